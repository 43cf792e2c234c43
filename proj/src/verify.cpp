#include "riesz/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "riesz/gindikin.hpp"
#include "riesz/jordan.hpp"
#include "riesz/random.hpp"

namespace riesz {

namespace {

void require_in_xi(std::span<const double> s) {
  const auto verdict = u_from_s(s, 1.0);
  if (!verdict.in_xi) {
    std::ostringstream msg;
    msg << "s is not in the Gindikin set (u_" << verdict.first_negative + 1 << " = "
        << verdict.u[verdict.first_negative] << " < 0)";
    throw DomainError(msg.str());
  }
}

}  // namespace

double log_laplace_exact(std::span<const double> s, const SymElement& theta) {
  if (static_cast<int>(s.size()) != theta.r()) throw ShapeError("laplace_exact: s and theta sizes differ");
  require_interior_tilt(theta, "laplace_exact");
  require_in_xi(s);
  return log_generalized_power(inverse_pd(-theta), s);
}

double laplace_exact(std::span<const double> s, const SymElement& theta) {
  return std::exp(log_laplace_exact(s, theta));
}

bool LaplaceReport::within(double z_limit) const { return std::abs(z_score) <= z_limit; }

LaplaceReport laplace_mc(const SampleBatch& batch, const SymElement& zeta) {
  const SymElement& theta = batch.spec.theta;
  require_same_shape(theta, zeta, "laplace_mc");
  if (batch.samples.empty()) throw DomainError("laplace_mc: empty batch");
  require_interior_tilt(zeta, "laplace_mc (zeta)");
  try {
    require_interior_tilt(2.0 * zeta - theta, "laplace_mc");
  } catch (const DomainError&) {
    throw VarianceGuardError(
        "laplace_mc: -(2 zeta - theta) is not positive definite, so exp(<zeta - theta, X>) has "
        "infinite variance under the tilted law");
  }

  LaplaceReport rep;
  rep.s = batch.spec.param.s;
  rep.theta = theta;
  rep.zeta = zeta;
  rep.n_samples = batch.samples.size();
  rep.exact_ratio = std::exp(log_laplace_exact(rep.s, zeta) - log_laplace_exact(rep.s, theta));

  const SymElement shift = zeta - theta;
  std::vector<double> w;
  w.reserve(rep.n_samples);
  for (const auto& x : batch.samples) w.push_back(std::exp(inner(shift, x)));
  const double n = static_cast<double>(w.size());
  double mean = 0.0;
  for (double v : w) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : w) ss += (v - mean) * (v - mean);
  rep.mc_estimate = mean;
  rep.mc_stderr = w.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;

  const double diff = rep.mc_estimate - rep.exact_ratio;
  if (rep.mc_stderr > 0.0) {
    rep.z_score = diff / rep.mc_stderr;
  } else {
    // Degenerate estimator (zeta = theta, or a Dirac batch): every term is identical.
    rep.z_score = std::abs(diff) <= 1e-12 * std::abs(rep.exact_ratio)
                      ? 0.0
                      : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  return rep;
}

QuadratureResult quadrature_r2(std::array<double, 2> s, const SymElement& theta, double tolerance) {
  if (theta.r() != 2) throw ShapeError("quadrature_r2: theta must be 2 x 2");
  if (!(s[0] > 0.0) || !(s[1] > 0.5)) throw DomainError("quadrature_r2: need s1 > 0 and s2 > 1/2");
  require_interior_tilt(theta, "quadrature_r2");

  const double t11 = theta(0, 0);
  const double t22 = theta(1, 1);
  const double t12 = theta(0, 1);
  const double log_const = std::log(2.0 * std::numbers::sqrt2);

  // Second argument: signed distance to the nearest endpoint (0 - x < 0 near
  // 0, 1 - x > 0 near 1), so both complements stay accurate at the ends.
  auto split = [](double x, double xc) {
    return xc < 0 ? std::pair{-xc, 1.0 - x} : std::pair{x, xc};
  };

  boost::math::quadrature::tanh_sinh<double> ts(12);
  // (4 w0 w1)^beta is singular at both ends of w when s2 < 3/2. Each half of
  // the w range is folded onto its nearest endpoint and w_near = v^gamma with
  // gamma = 1 / (beta + 1), which absorbs w_near^beta into the Jacobian.
  const double beta = s[1] - 1.5;
  const double gamma = 1.0 / (beta + 1.0);
  const double v_max = std::pow(0.5, beta + 1.0);
  const double log_w_const = beta * std::log(4.0) + std::log(gamma);

  auto integrand = [&](double p, double pc, double q, double qc, double v, bool right) {
    const auto [p0, p1] = split(p, pc);
    const auto [q0, q1] = split(q, qc);
    const double near = std::pow(v, gamma);
    const double far = 1.0 - near;
    const double a = p0 / p1;
    const double c = q0 / q1;
    const double b = (right ? far - near : near - far) * std::sqrt(a * c);
    const double log_f = t11 * a + t22 * c + 2.0 * t12 * b + (s[0] - 1.0) * std::log(a) +
                         (s[1] - 1.0) * std::log(c) + beta * std::log(far) + log_w_const -
                         2.0 * std::log(p1) - 2.0 * std::log(q1) + log_const;
    const double f = std::exp(log_f);
    return std::isfinite(f) ? f : 0.0;
  };

  auto inner_w = [&](double p, double pc, double q, double qc) {
    double total = 0.0;
    for (bool right : {false, true})
      total += ts.integrate([&](double v) { return integrand(p, pc, q, qc, v, right); }, 0.0, v_max, tolerance);
    return total;
  };
  auto middle_q = [&](double p, double pc) {
    return ts.integrate([&](double q, double qc) { return inner_w(p, pc, q, qc); }, 0.0, 1.0, tolerance);
  };
  QuadratureResult res;
  res.integral = ts.integrate([&](double p, double pc) { return middle_q(p, pc); }, 0.0, 1.0, tolerance);
  const std::vector<double> sv{s[0], s[1]};
  res.expected = std::exp(log_gamma_omega(sv, 2, 1.0) + log_laplace_exact(sv, theta));
  res.relative_error = std::abs(res.integral / res.expected - 1.0);
  return res;
}

double quadrature_check_r2(std::array<double, 2> s, const SymElement& theta) {
  return quadrature_r2(s, theta).relative_error;
}

namespace {

double rel(double a, double b, double floor = 0.0) {
  const double scale = std::max({std::abs(a), std::abs(b), floor});
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double rel(const Matrix& a, const Matrix& b, double floor = 0.0) {
  const double scale = std::max({a.norm(), b.norm(), floor});
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

double rel(const SymElement& a, const SymElement& b, double floor = 0.0) {
  return rel(a.dense(), b.dense(), floor);
}

Matrix gaussian_matrix(int rows, int cols, RandomStream& rng) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

SymElement cone_point(int r, RandomStream& rng) {
  const Matrix x = gaussian_matrix(r, r, rng);
  return SymElement::symmetrized(x * x.transpose() + 1e-3 * Matrix::Identity(r, r));
}

SymElement gaussian_sym(int r, RandomStream& rng) {
  return SymElement::symmetrized(gaussian_matrix(r, r, rng));
}

Matrix random_orthogonal(int r, RandomStream& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(r, r, rng));
  return qr.householderQ() * Matrix::Identity(r, r);
}

int random_split(int r, RandomStream& rng) {
  return 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(r - 1));
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// P(c)Omega = Omega_c for c = Q sigma_l Q^T: P(c)x through the Jordan route
// 2L(c)^2 x - L(c^2) x agrees with the block truncation in the rotated frame,
// that block is positive definite, and P(c)(w + e - c) = w on Omega_c.
double check_cone_projection(int r, RandomStream& rng) {
  const int l = random_split(r, rng);
  const Matrix q = random_orthogonal(r, rng);
  const SymElement c = SymElement::symmetrized(q * SymElement::sigma(r, l).dense() * q.transpose());
  const SymElement x = cone_point(r, rng);

  const SymElement jordan_route = 2.0 * jordan_product(c, jordan_product(c, x)) - jordan_product(jordan_product(c, c), x);
  const SymElement rotated = SymElement::symmetrized(q.transpose() * x.dense() * q);
  const SymElement block = leading_block(rotated, l);
  const SymElement block_route =
      SymElement::symmetrized(q * embed_leading(block, r).dense() * q.transpose());
  double err = rel(jordan_route, block_route);
  if (!is_positive_definite(block)) return kInf;

  const SymElement w_block = cone_point(l, rng);
  const SymElement w = SymElement::symmetrized(q * embed_leading(w_block, r).dense() * q.transpose());
  const SymElement back = quadratic_rep(c, w + SymElement::identity(r) - c);
  err = std::max(err, rel(back, w));
  return err;
}

double check_half_space_determinant(int r, RandomStream& rng) {
  const int l = random_split(r, rng);
  const SymElement a = cone_point(l, rng);
  const HalfSpaceOperator op = half_space_op(a, HalfSide::leading, l, r);
  const double expected = std::pow(a.dense().determinant(), r - l);
  return rel(op.determinant, expected);
}

double check_half_space_inverse(int r, RandomStream& rng) {
  const int l = random_split(r, rng);
  const SymElement a = cone_point(l, rng);
  const HalfSpaceOperator op = half_space_op(a, HalfSide::leading, l, r);
  const HalfSpaceOperator inv = half_space_op(inverse_pd(a), HalfSide::leading, l, r);
  const Matrix id = Matrix::Identity(op.matrix.rows(), op.matrix.cols());
  return std::max(rel(op.matrix * inv.matrix, id), rel(inv.matrix * op.matrix, id));
}

double check_square_relation(int r, RandomStream& rng) {
  const int l = random_split(r, rng);
  const SymElement x = embed_leading(gaussian_sym(l, rng), r);
  const SymElement v = half_space_element(gaussian_matrix(l, r - l, rng));
  const SymElement lhs = jordan_product(x, jordan_product(x, v));
  const SymElement rhs = 0.5 * jordan_product(jordan_product(x, x), v);
  return rel(lhs, rhs, x.norm() * x.norm() * v.norm());
}

double check_quadratic_pairing(int r, RandomStream& rng) {
  const int l = random_split(r, rng);
  const SymElement u1 = embed_leading(gaussian_sym(l, rng), r);
  const SymElement z0 = embed_trailing(gaussian_sym(r - l, rng), r);
  const SymElement v = half_space_element(gaussian_matrix(l, r - l, rng));
  const double lhs = inner(u1, quadratic_rep(v, z0));
  const double rhs = 2.0 * inner(v, jordan_product(z0, jordan_product(u1, v)));
  return rel(lhs, rhs, u1.norm() * v.norm() * v.norm() * z0.norm());
}

double check_commutation(int r, RandomStream& rng) {
  const int l = random_split(r, rng);
  const SymElement u1 = embed_leading(gaussian_sym(l, rng), r);
  const SymElement z0 = embed_trailing(gaussian_sym(r - l, rng), r);
  const SymElement v = half_space_element(gaussian_matrix(l, r - l, rng));
  const SymElement a = jordan_product(z0, jordan_product(u1, v));
  const SymElement b = jordan_product(u1, jordan_product(z0, v));
  return rel(a, b, u1.norm() * z0.norm() * v.norm());
}

// L(u1)L(z0) on V(c, 1/2) acts as B -> U B Z / 4, so its spectrum is
// {lambda_i(U) mu_j(Z) / 4}; check symmetry and the smallest eigenvalue.
double check_positive_definite(int r, RandomStream& rng) {
  const int l = random_split(r, rng);
  const SymElement u = cone_point(l, rng);
  const SymElement z = cone_point(r - l, rng);
  const SymElement u1 = embed_leading(u, r);
  const SymElement z0 = embed_trailing(z, r);
  const int cols = r - l;
  Matrix op(l * cols, l * cols);
  for (int p = 0; p < l; ++p) {
    for (int q = 0; q < cols; ++q) {
      Matrix unit = Matrix::Zero(l, cols);
      unit(p, q) = 1.0;
      const Matrix img = half_space_block(jordan_product(u1, jordan_product(z0, half_space_element(unit))), l);
      for (int pp = 0; pp < l; ++pp)
        for (int qq = 0; qq < cols; ++qq) op(pp * cols + qq, p * cols + q) = img(pp, qq);
    }
  }
  double err = rel(op, op.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (op + op.transpose()), Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 0.0)) return kInf;
  // Spectrum is {lambda_i(u) mu_j(z) / 4}.
  const auto lu = spectral(u).eigenvalues;
  const auto mz = spectral(z).eigenvalues;
  Vector expected(l * cols);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < cols; ++j) expected(i * cols + j) = lu(i) * mz(j) / 4.0;
  std::sort(expected.begin(), expected.end());
  err = std::max(err, rel(Matrix(es.eigenvalues()), Matrix(expected)));
  return err;
}

double check_minor_of_inverse(int r, RandomStream& rng) {
  const SymElement theta = cone_point(r, rng);
  const SymElement inv = inverse_pd(theta);
  const auto m = minors(inv);
  const double det_inv = inv.dense().determinant();
  double err = 0.0;
  for (int l = 1; l < r; ++l) {
    const double rhs = det_inv * trailing_block(theta, l).dense().determinant();
    err = std::max(err, rel(m[l - 1], rhs));
  }
  return err;
}

double check_minor_ratios(int r, RandomStream& rng) {
  const SymElement theta = cone_point(r, rng);
  const auto m = minors(inverse_pd(theta));
  double err = 0.0;
  for (int l = 1; l < r; ++l) {
    const auto m0 = minors(inverse_pd(trailing_block(theta, l)));
    // Delta_{l+1}(theta^{-1}) / Delta_l(theta^{-1}) = Delta_1(theta_0^{-1}), then
    // Delta_{k+1}/Delta_k = Delta_{k+1-l}/Delta_{k-l} on theta_0^{-1}.
    err = std::max(err, rel(m[l] / m[l - 1], m0[0]));
    for (int k = l + 1; k <= r - 1; ++k) err = std::max(err, rel(m[k] / m[k - 1], m0[k - l] / m0[k - l - 1]));
  }
  return err;
}

struct NamedCheck {
  const char* name;
  double (*run)(int, RandomStream&);
};

constexpr NamedCheck kChecks[] = {
    {"cone_projection", check_cone_projection},
    {"half_space_determinant", check_half_space_determinant},
    {"half_space_inverse", check_half_space_inverse},
    {"half_space_square", check_square_relation},
    {"quadratic_pairing", check_quadratic_pairing},
    {"half_space_commutation", check_commutation},
    {"half_space_positivity", check_positive_definite},
    {"minor_of_inverse", check_minor_of_inverse},
    {"minor_ratios", check_minor_ratios},
};

}  // namespace

std::vector<IdentityReport> identity_suite(int r, int trials, std::uint64_t seed) {
  if (r < 2) throw ShapeError("identity_suite: need r >= 2");
  if (trials < 1) throw ShapeError("identity_suite: need at least one trial");
  std::vector<IdentityReport> out;
  std::uint64_t check_index = 0;
  for (const auto& check : kChecks) {
    IdentityReport rep{check.name, r, trials, 0.0, 1e-9, false};
    for (int t = 0; t < trials; ++t) {
      // One stream per (identity, trial), disjoint from sampler stream indices.
      RandomStream rng(seed, (check_index << 40) | (static_cast<std::uint64_t>(r) << 32) | std::uint64_t(t));
      const double e = check.run(r, rng);
      rep.max_relative_error = std::max(rep.max_relative_error, std::isnan(e) ? kInf : e);
    }
    rep.pass = rep.max_relative_error <= rep.threshold;
    out.push_back(rep);
    ++check_index;
  }
  return out;
}

int numerical_rank(const SymElement& x) {
  const Vector ev = spectral(x).eigenvalues.cwiseAbs();
  const double top = ev.maxCoeff();
  if (top == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-8 * top) ++rank;
  return rank;
}

RankProfile rank_profile(const SampleBatch& batch, int expected_rank) {
  if (batch.samples.empty()) throw DomainError("rank_profile: empty batch");
  RankProfile prof;
  prof.expected_rank = expected_rank;
  std::size_t at_expected = 0;
  for (const auto& x : batch.samples) {
    const SpectralDecomp sd = spectral(x);
    const double top = sd.eigenvalues.cwiseAbs().maxCoeff();
    int rank = 0;
    for (int i = 0; i < x.r(); ++i)
      if (std::abs(sd.eigenvalues(i)) > 1e-8 * top) ++rank;
    if (top == 0.0) rank = 0;
    ++prof.histogram[rank];
    if (rank > expected_rank) ++prof.above_expected;
    if (rank == expected_rank) ++at_expected;
    if (sd.eigenvalues(x.r() - 1) < -1e-9 * x.norm()) ++prof.psd_violations;
  }
  prof.fraction_at_expected = static_cast<double>(at_expected) / batch.samples.size();
  prof.pass = prof.above_expected == 0 && prof.fraction_at_expected >= 0.999;
  return prof;
}

}  // namespace riesz
