#include "riesz/json_io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace riesz {

Json to_json(const SymElement& x) {
  Json rows = Json::array();
  for (int i = 0; i < x.r(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < x.r(); ++j) row.push_back(x(i, j) + 0.0);  // no "-0.0"
    rows.push_back(std::move(row));
  }
  return Json{{"r", x.r()}, {"data", std::move(rows)}};
}

SymElement sym_element_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("r") || !j.contains("data"))
    throw ShapeError("SymElement JSON needs fields \"r\" and \"data\"");
  if (!j.at("r").is_number_integer()) throw ShapeError("SymElement JSON: \"r\" must be an integer");
  const int r = j.at("r").get<int>();
  if (r < 1) throw ShapeError("SymElement JSON: r must be >= 1");
  const Json& data = j.at("data");
  if (!data.is_array() || static_cast<int>(data.size()) != r)
    throw ShapeError("SymElement JSON: \"data\" must have r rows");
  Matrix m(r, r);
  for (int i = 0; i < r; ++i) {
    const Json& row = data[i];
    if (!row.is_array() || static_cast<int>(row.size()) != r)
      throw ShapeError("SymElement JSON: every row must have r entries");
    for (int k = 0; k < r; ++k) {
      if (!row[k].is_number()) throw ShapeError("SymElement JSON: entries must be numbers");
      m(i, k) = row[k].get<double>();
    }
  }
  if (!m.allFinite()) throw ShapeError("SymElement JSON: entries must be finite");
  return SymElement::from_dense(m, 1e-12);
}

namespace {

Json index_sets(const std::vector<std::vector<int>>& sets) {
  Json out = Json::array();
  for (const auto& s : sets) out.push_back(s);
  return out;
}

void add_partition_fields(Json& j, const BlockPartition& part) {
  Json starts = Json::array(), lengths = Json::array(), ub = Json::array(), sb = Json::array();
  for (const auto& b : part.blocks) {
    starts.push_back(b.start);
    lengths.push_back(b.length);
    ub.push_back(b.u);
    sb.push_back(b.s);
  }
  j["k"] = part.k();
  j["i"] = std::move(starts);
  j["j"] = std::move(lengths);
  j["I"] = index_sets(part.runs);
  j["I_prime"] = index_sets(part.zero_runs);
  j["u_blocks"] = std::move(ub);
  j["s_blocks"] = std::move(sb);
  j["rank"] = part.total_rank();
  j["singular"] = part.singular();
}

}  // namespace

Json to_json(const BlockPartition& part) {
  Json j{{"r", part.r}, {"d", part.d}, {"u", part.u}};
  add_partition_fields(j, part);
  return j;
}

Json to_json(const XiVerdict& verdict, std::span<const double> s) {
  Json j{{"in_xi", verdict.in_xi}};
  j["s"] = verdict.param ? verdict.param->s : std::vector<double>(s.begin(), s.end());
  j["u"] = verdict.u;
  if (!verdict.in_xi) {
    j["first_negative"] = verdict.first_negative + 1;
    return j;
  }
  j["d"] = verdict.param->d;
  j["samplable"] = verdict.param->samplable();
  add_partition_fields(j, build_partition(*verdict.param));
  return j;
}

Json to_json(const LaplaceReport& rep) {
  auto num = [](double v) -> Json { return std::isfinite(v) ? Json(v) : Json(v > 0 ? "inf" : "-inf"); };
  return Json{{"s", rep.s},
              {"theta", to_json(rep.theta)},
              {"zeta", to_json(rep.zeta)},
              {"exact_ratio", rep.exact_ratio},
              {"mc_estimate", rep.mc_estimate},
              {"mc_stderr", rep.mc_stderr},
              {"z_score", num(rep.z_score)},
              {"n_samples", rep.n_samples}};
}

Json to_json(const IdentityReport& rep) {
  return Json{{"name", rep.name},
              {"r", rep.r},
              {"trials", rep.trials},
              {"max_relative_error", std::isfinite(rep.max_relative_error) ? Json(rep.max_relative_error) : Json("inf")},
              {"threshold", rep.threshold},
              {"pass", rep.pass}};
}

Json to_json(const RankProfile& prof) {
  Json hist = Json::object();
  for (const auto& [rank, count] : prof.histogram) hist[std::to_string(rank)] = count;
  return Json{{"expected_rank", prof.expected_rank},
              {"histogram", std::move(hist)},
              {"above_expected", prof.above_expected},
              {"fraction_at_expected", prof.fraction_at_expected},
              {"psd_violations", prof.psd_violations},
              {"pass", prof.pass}};
}

Json to_json(const QuadratureResult& res) {
  return Json{{"integral", res.integral}, {"expected", res.expected}, {"relative_error", res.relative_error}};
}

Json spec_to_json(const RieszSpec& spec) {
  return Json{{"s", spec.param.s},
              {"u", spec.param.u},
              {"theta", to_json(spec.theta)},
              {"n", spec.count},
              {"seed", spec.seed}};
}

SampleJob sample_job_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("s")) throw ShapeError("sampling job JSON needs \"s\"");
  SampleJob job;
  job.s = j.at("s").get<std::vector<double>>();
  if (job.s.empty()) throw ShapeError("sampling job: empty s");
  const int r = static_cast<int>(job.s.size());
  job.theta = j.contains("theta") ? sym_element_from_json(j.at("theta")) : -SymElement::identity(r);
  if (j.contains("n")) job.n = j.at("n").get<std::size_t>();
  if (j.contains("seed")) job.seed = j.at("seed").get<std::uint64_t>();
  return job;
}

void write_ndjson(const SampleBatch& batch, std::ostream& out) {
  Json header{{"spec", spec_to_json(batch.spec)}, {"partition", to_json(batch.partition)}};
  out << header.dump() << '\n';
  for (const auto& x : batch.samples) out << to_json(x).dump() << '\n';
}

void write_csv(const SampleBatch& batch, std::ostream& out) {
  const int r = batch.spec.param.r;
  for (int i = 0; i < r; ++i) {
    for (int j = i; j < r; ++j) out << (i == 0 && j == 0 ? "" : ",") << "x_" << i + 1 << '_' << j + 1;
  }
  out << '\n';
  for (const auto& x : batch.samples) {
    bool first = true;
    for (double v : x.packed()) {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof(buf), v);
      out << (first ? "" : ",") << std::string_view(buf, res.ptr - buf);
      first = false;
    }
    out << '\n';
  }
}

}  // namespace riesz
