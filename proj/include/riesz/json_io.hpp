#pragma once

// JSON forms of the public types.
//   SymElement:   {"r": 3, "data": [[...], [...], [...]]}   (dense, symmetric)
//   sampling job: {"s": [...], "theta": SymElement, "n": N, "seed": S}
//   NDJSON batch: header line {"spec": ..., "partition": ...}, then one
//                 SymElement per line.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "riesz/gindikin.hpp"
#include "riesz/sampler.hpp"
#include "riesz/verify.hpp"

namespace riesz {

using Json = nlohmann::ordered_json;

Json to_json(const SymElement& x);
/// Validates shape and symmetry (absolute tolerance 1e-12).
SymElement sym_element_from_json(const Json& j);

Json to_json(const BlockPartition& part);
/// {in_xi, s, u, first_negative?, k, i, j, I, I_prime, u_blocks, s_blocks}.
Json to_json(const XiVerdict& verdict, std::span<const double> s);
Json to_json(const LaplaceReport& rep);
Json to_json(const IdentityReport& rep);
Json to_json(const RankProfile& prof);
Json to_json(const QuadratureResult& res);
Json spec_to_json(const RieszSpec& spec);

struct SampleJob {
  std::vector<double> s;
  SymElement theta;
  std::size_t n = 1;
  std::uint64_t seed = 0;
};
SampleJob sample_job_from_json(const Json& j);

void write_ndjson(const SampleBatch& batch, std::ostream& out);
/// Header "x_1_1,x_1_2,..." (packed upper triangle, 1-based), one row per sample.
void write_csv(const SampleBatch& batch, std::ostream& out);

}  // namespace riesz
