#pragma once

// Samplers for the exponentially tilted Riesz laws
//   P_theta(dx) = exp(<theta, x>) Delta_s(-theta^{-1})^{-1} R_s(dx),  -theta in Omega.
//
// R_s is built as the convolution of one measure per run of nonzero Gindikin
// coordinates. Each of those lives on V(cbar_i, 1), the trailing block
// starting at the run, and is the image under alpha_map of a tilted
// absolutely continuous Riesz law on the leading j x j corner of that block
// times a Gaussian on the half space. Tilting factorises over the
// convolution, so a sample is a sum of independent block samples.

#include <cstdint>
#include <span>
#include <vector>

#include "riesz/gindikin.hpp"
#include "riesz/random.hpp"
#include "riesz/sym_element.hpp"

namespace riesz {

struct RieszSpec {
  AlgebraShape shape;
  GindikinParam param;
  SymElement theta;
  std::uint64_t seed = 0;
  std::size_t count = 1;

  /// Validates d = 1, s in Xi, the dimensions, and that -theta is strictly
  /// inside the cone (min eigenvalue >= 1e-10 ||theta||). Throws DomainError
  /// naming the failed condition.
  static RieszSpec make(const GindikinParam& param, const SymElement& theta, std::uint64_t seed,
                        std::size_t count);
};

/// Throws DomainError unless min eig(-theta) >= 1e-10 ||theta||.
void require_interior_tilt(const SymElement& theta, const char* what);

struct SampleBatch {
  RieszSpec spec;
  BlockPartition partition;
  std::vector<SymElement> samples;
  std::vector<std::uint64_t> stream_index;
};

struct SamplerOptions {
  unsigned workers = 0;  // 0: hardware concurrency
};

double sample_gamma(double shape, RandomStream& stream);

/// Tilted absolutely continuous Riesz law on Sym(l): density proportional to
/// exp(<eta, x>) Delta_u(x) det(x)^{-(l+1)/2}. Generalised Bartlett
/// construction with the lower Cholesky factor of (-eta)^{-1}.
class AcRieszSampler {
 public:
  AcRieszSampler(std::span<const double> u, const SymElement& eta);
  SymElement draw(RandomStream& stream) const;
  /// Lower triangular G with draw = G G^T.
  Matrix draw_factor(RandomStream& stream) const;
  int size() const { return static_cast<int>(shapes_.size()); }

 private:
  std::vector<double> shapes_;  // u_p - (p-1)/2
  Matrix chol_;                 // lower, chol_ chol_^T = (-eta)^{-1}
};

SymElement sample_ac_riesz(std::span<const double> u, const SymElement& eta, RandomStream& stream);

/// One convolution factor: rank-j measure on the trailing (r-i) x (r-i)
/// block, tilted by theta.
class SingularBlockSampler {
 public:
  SingularBlockSampler(int start, int length, std::span<const double> u_block, const SymElement& theta);
  SymElement draw(RandomStream& stream) const;

  /// Schur complement Theta1 - Theta12 Theta0^{-1} Theta12^T of the block.
  const SymElement& conditional_tilt() const { return eta_; }

 private:
  int r_;
  int start_;
  int length_;
  SymElement eta_;
  AcRieszSampler ac_;
  Matrix mean_factor_;           // Theta12 (-Theta0)^{-1}, j x (r-i-j)
  Eigen::LLT<Matrix> neg_theta0_;  // -Theta0
};

SymElement sample_singular_block(int start, int length, std::span<const double> u_block,
                                 const SymElement& theta, RandomStream& stream);

/// N independent draws; sample n uses RandomStream(seed, n).
SampleBatch sample_riesz(const RieszSpec& spec, SamplerOptions options = {});

/// log of Delta_{s - n/r}(x) / Gamma_Omega(s), the Lebesgue density of R_s
/// (Lebesgue measure of the trace inner product) in the AC regime.
double log_density_ac(std::span<const double> s, const SymElement& x);

}  // namespace riesz
