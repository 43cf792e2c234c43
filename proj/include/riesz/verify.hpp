#pragma once

// Oracles for the Riesz measure machinery: the closed-form Laplace transform
// L_{R_s}(theta) = Delta_s(-theta^{-1}), its Monte Carlo counterpart on sample
// batches, direct quadrature of the r = 2 density, randomized checks of the
// Peirce/minor identities the construction relies on, and rank profiles.

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "riesz/sampler.hpp"
#include "riesz/sym_element.hpp"

namespace riesz {

/// Thrown by laplace_mc when the estimator would have infinite variance.
class VarianceGuardError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Delta_s(-theta^{-1}). Requires -theta positive definite and s in Xi (d = 1).
double laplace_exact(std::span<const double> s, const SymElement& theta);
double log_laplace_exact(std::span<const double> s, const SymElement& theta);

struct LaplaceReport {
  std::vector<double> s;
  SymElement theta;
  SymElement zeta;
  double exact_ratio = 0.0;
  double mc_estimate = 0.0;
  double mc_stderr = 0.0;
  double z_score = 0.0;
  std::size_t n_samples = 0;

  bool within(double z_limit) const;
};

/// Estimates E[exp(<zeta - theta, X>)] over the batch and compares with
/// Delta_s(-zeta^{-1}) / Delta_s(-theta^{-1}). Requires -zeta and
/// -(2 zeta - theta) positive definite.
LaplaceReport laplace_mc(const SampleBatch& batch, const SymElement& zeta);

struct QuadratureResult {
  double integral = 0.0;  // int_Omega exp(<theta,x>) Delta_{s-3/2}(x) dx
  double expected = 0.0;  // Gamma_Omega(s) Delta_s(-theta^{-1})
  double relative_error = 0.0;
};

/// Three-dimensional tanh-sinh quadrature over {a > 0, c > 0, b^2 < ac}
/// mapped to the unit cube by a = p/(1-p), c = q/(1-q), b = (2w-1) sqrt(ac).
/// dx is Lebesgue measure for the trace inner product (sqrt 2 da db dc).
QuadratureResult quadrature_r2(std::array<double, 2> s, const SymElement& theta, double tolerance = 1e-8);
/// |integral / expected - 1|.
double quadrature_check_r2(std::array<double, 2> s, const SymElement& theta);

struct IdentityReport {
  std::string name;
  int r = 0;
  int trials = 0;
  double max_relative_error = 0.0;
  double threshold = 1e-9;
  bool pass = false;
};

/// Randomized checks of the Peirce-block identities, one report each:
/// cone projection P(c)Omega = Omega_c, determinant and inverse of 2L(x) on
/// V(c, 1/2), L(x)^2 = L(x^2)/2 there, the pairing <u1, P(v)z0> =
/// 2<v, L(z0)L(u1)v>, commutation and positivity of L(z0)L(u1), and the
/// minors of theta^{-1} against the trailing block theta_0.
std::vector<IdentityReport> identity_suite(int r, int trials, std::uint64_t seed);

struct RankProfile {
  std::map<int, std::size_t> histogram;  // numerical rank -> count
  int expected_rank = 0;
  std::size_t above_expected = 0;
  double fraction_at_expected = 0.0;
  std::size_t psd_violations = 0;  // min eigenvalue < -1e-9 ||x||
  bool pass = false;
};

/// Numerical rank: eigenvalue magnitudes above 1e-8 times the largest.
int numerical_rank(const SymElement& x);

/// pass iff every rank <= expected and at least 99.9% equal it.
RankProfile rank_profile(const SampleBatch& batch, int expected_rank);

}  // namespace riesz
