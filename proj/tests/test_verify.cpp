#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "riesz/jordan.hpp"
#include "riesz/verify.hpp"

using namespace riesz;
using oracle::Mat;
using V = std::vector<double>;

namespace {

SymElement sym(const Mat& m) { return oracle::to_sym(m); }

SampleBatch draw(const V& s, const SymElement& theta, std::size_t n, std::uint64_t seed) {
  return sample_riesz(RieszSpec::make(*u_from_s(s, 1.0).param, theta, seed, n));
}

SymElement random_tilt(oracle::Rng& rng, int r) {
  const Mat g = rng.gaussian(r, r);
  return -sym(oracle::add(oracle::mul(g, oracle::transpose(g)), oracle::eye(r), 0.5 * r)) * (1.0 / r);
}

double gamma_omega_2(double s1, double s2) {
  return std::sqrt(2 * std::numbers::pi) * std::tgamma(s1) * std::tgamma(s2 - 0.5);
}

}  // namespace

// ---------------------------------------------------------------- exact Laplace

TEST(LaplaceExact, Examples) {
  oracle::Rng rng(50);
  for (int t = 0; t < 20; ++t) {
    const int r = rng.integer(1, 5);
    V s(r);
    for (int i = 0; i < r; ++i) s[i] = i / 2.0 + rng.uniform(0.01, 3.0);
    EXPECT_NEAR(laplace_exact(s, -SymElement::identity(r)), 1.0, 1e-14);
  }
  EXPECT_NEAR(laplace_exact(V{2, 1}, sym({{-2, 0}, {0, -1}})), 0.25, 1e-15);
  EXPECT_NEAR(laplace_exact(V{0.5, 0.5}, -0.5 * SymElement::identity(2)), 2.0, 1e-14);
  EXPECT_DOUBLE_EQ(laplace_exact(V{0, 0}, sym({{-3, 1}, {1, -2}})), 1.0);
}

TEST(LaplaceExact, MatchesOracleAndScales) {
  oracle::Rng rng(51);
  for (int t = 0; t < 300; ++t) {
    const int r = rng.integer(1, 6);
    V u(r);
    for (double& v : u) v = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.1, 3.0);
    const V s = oracle::s_from_u(u, 1.0);
    const SymElement theta = random_tilt(rng, r);
    const double value = laplace_exact(s, theta);
    const double ref = oracle::delta_s(oracle::inverse(oracle::to_mat(-theta)), s);
    EXPECT_GT(value, 0.0);
    EXPECT_NEAR(value, ref, 1e-9 * ref);
    const double scale = rng.uniform(0.2, 5.0);
    double total = 0.0;
    for (double v : s) total += v;
    EXPECT_NEAR(laplace_exact(s, scale * theta), std::pow(scale, -total) * value, 1e-9 * std::pow(scale, -total) * value);
  }
}

TEST(LaplaceExact, Errors) {
  EXPECT_THROW(laplace_exact(V{1, 1}, SymElement::identity(2)), DomainError);
  EXPECT_THROW(laplace_exact(V{1, 1}, sym({{-1, 0}, {0, 0}})), DomainError);
  EXPECT_THROW(laplace_exact(V{0.5, 0.2}, -SymElement::identity(2)), DomainError);
  EXPECT_THROW(laplace_exact(V{1}, -SymElement::identity(2)), ShapeError);
}

// ---------------------------------------------------------------- Monte Carlo Laplace

TEST(LaplaceMc, ZetaEqualsTheta) {
  const SymElement theta = sym({{-1.5, 0.4}, {0.4, -1}});
  const auto rep = laplace_mc(draw({1.3, 0.6}, theta, 500, 1), theta);
  EXPECT_EQ(rep.exact_ratio, 1.0);
  EXPECT_EQ(rep.mc_estimate, 1.0);
  EXPECT_EQ(rep.mc_stderr, 0.0);
  EXPECT_EQ(rep.z_score, 0.0);
  EXPECT_TRUE(rep.within(4.0));
}

TEST(LaplaceMc, DiracBatch) {
  const auto rep = laplace_mc(draw({0, 0}, -SymElement::identity(2), 10, 1), -2.0 * SymElement::identity(2));
  EXPECT_EQ(rep.exact_ratio, 1.0);
  EXPECT_EQ(rep.mc_estimate, 1.0);
  EXPECT_TRUE(rep.within(4.0));
}

TEST(LaplaceMc, RankOneWishart) {
  const auto rep = laplace_mc(draw({0.5, 0.5}, -SymElement::identity(2), 200000, 2), -1.25 * SymElement::identity(2));
  EXPECT_NEAR(rep.exact_ratio, 0.8, 1e-14);
  EXPECT_LE(std::abs(rep.z_score), 4.0);
  EXPECT_EQ(rep.n_samples, 200000u);
  EXPECT_GT(rep.mc_stderr, 0.0);
  EXPECT_NEAR(rep.z_score, (rep.mc_estimate - rep.exact_ratio) / rep.mc_stderr, 1e-12);
}

TEST(LaplaceMc, GenericSingular) {
  const auto rep =
      laplace_mc(draw({1.2, 0.5, 1.2, 1.0}, -SymElement::identity(4), 200000, 3), -1.25 * SymElement::identity(4));
  EXPECT_NEAR(rep.exact_ratio, std::pow(0.8, 3.9), 1e-13);
  EXPECT_LE(std::abs(rep.z_score), 4.0);
}

TEST(LaplaceMc, VarianceGuard) {
  const SymElement theta = -SymElement::identity(2);
  const auto batch = draw({1, 1}, theta, 100, 4);
  // -(2 zeta - theta) = 2 * 0.4 - 1 < 0.
  EXPECT_THROW(laplace_mc(batch, -0.4 * SymElement::identity(2)), VarianceGuardError);
  EXPECT_THROW(laplace_mc(batch, -0.5 * SymElement::identity(2)), VarianceGuardError);
  EXPECT_NO_THROW(laplace_mc(batch, -0.6 * SymElement::identity(2)));
  EXPECT_THROW(laplace_mc(batch, SymElement::identity(2)), DomainError);
  EXPECT_THROW(laplace_mc(batch, -SymElement::identity(3)), ShapeError);
}

TEST(LaplaceMc, FiftyPairsBinomialSanity) {
  oracle::Rng rng(52);
  int outliers = 0;
  for (int t = 0; t < 50; ++t) {
    const int r = rng.integer(1, 4);
    V u(r);
    for (double& v : u) v = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.2, 2.5);
    const SymElement theta = random_tilt(rng, r);
    const SymElement zeta = theta - rng.uniform(0.05, 0.5) * SymElement::identity(r);
    const auto rep = laplace_mc(draw(oracle::s_from_u(u, 1.0), theta, 20000, 1000 + t), zeta);
    if (!rep.within(4.0)) ++outliers;
  }
  EXPECT_LE(outliers, 1);
}

TEST(LaplaceMc, DetectsWrongBartlettShape) {
  // Negative control: a sampler with the diagonal shapes off by 1/2 must be
  // caught by the Laplace oracle.
  const V s{2.0, 1.5, 1.2};
  const SymElement theta = -SymElement::identity(3);
  auto batch = draw(s, theta, 50000, 5);
  const AcRieszSampler wrong(V{2.0, 2.0, 2.2}, theta);
  for (std::size_t i = 0; i < batch.samples.size(); ++i) {
    RandomStream stream(5, i);
    batch.samples[i] = wrong.draw(stream);
  }
  const auto rep = laplace_mc(batch, -1.3 * SymElement::identity(3));
  EXPECT_GT(std::abs(rep.z_score), 10.0);
  EXPECT_FALSE(rep.within(4.0));
}

// ---------------------------------------------------------------- quadrature

TEST(Quadrature, Examples) {
  const auto a = quadrature_r2({2, 1}, -SymElement::identity(2));
  EXPECT_NEAR(a.expected, std::sqrt(2 * std::numbers::pi) * std::sqrt(std::numbers::pi), 1e-12);
  EXPECT_NEAR(a.expected, 4.4429, 1e-4);
  EXPECT_LE(a.relative_error, 1e-6);
  EXPECT_NEAR(a.integral / gamma_omega_2(2, 1), 1.0, 1e-6);

  const auto b = quadrature_r2({2, 2}, -SymElement::identity(2));
  EXPECT_NEAR(b.integral, gamma_omega_2(2, 2), 1e-6 * gamma_omega_2(2, 2));
  EXPECT_NEAR(b.expected, 2.22144, 1e-5);

  const auto c = quadrature_r2({1, 1}, -2.0 * SymElement::identity(2));
  const double truth = 0.25 * std::sqrt(2 * std::numbers::pi) * std::sqrt(std::numbers::pi);
  EXPECT_NEAR(c.integral, truth, 1e-6 * truth);
  EXPECT_LE(quadrature_check_r2({1, 1}, -2.0 * SymElement::identity(2)), 1e-6);
}

TEST(Quadrature, NonDiagonalTiltAndSingularIntegrand) {
  const SymElement theta = sym({{-1.5, 0.4}, {0.4, -1}});
  for (std::array<double, 2> s : {std::array<double, 2>{0.7, 0.6}, {3.0, 0.9}}) {
    const auto res = quadrature_r2(s, theta);
    const double truth = gamma_omega_2(s[0], s[1]) * oracle::delta_s(oracle::inverse(oracle::to_mat(-theta)), {s[0], s[1]});
    EXPECT_NEAR(res.integral, truth, 1e-6 * truth) << s[0] << "," << s[1];
  }
}

TEST(Quadrature, Errors) {
  EXPECT_THROW(quadrature_r2({1, 0.5}, -SymElement::identity(2)), DomainError);
  EXPECT_THROW(quadrature_r2({0, 1}, -SymElement::identity(2)), DomainError);
  EXPECT_THROW(quadrature_r2({1, 1}, SymElement::identity(2)), DomainError);
  EXPECT_THROW(quadrature_r2({1, 1}, -SymElement::identity(3)), ShapeError);
}

// ---------------------------------------------------------------- identities

TEST(IdentitySuite, AllPassForRank3) {
  const auto reports = identity_suite(3, 500, 1);
  ASSERT_EQ(reports.size(), 9u);
  for (const auto& rep : reports) {
    EXPECT_TRUE(rep.pass) << rep.name << " " << rep.max_relative_error;
    EXPECT_EQ(rep.pass, rep.max_relative_error <= rep.threshold);
    EXPECT_EQ(rep.threshold, 1e-9);
    EXPECT_EQ(rep.trials, 500);
  }
}

TEST(IdentitySuite, RanksTwoToSix) {
  for (int r = 2; r <= 6; ++r)
    for (const auto& rep : identity_suite(r, 100, 2)) EXPECT_TRUE(rep.pass) << rep.name << " r=" << r;
}

TEST(IdentitySuite, Deterministic) {
  const auto a = identity_suite(4, 20, 3);
  const auto b = identity_suite(4, 20, 3);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].max_relative_error, b[i].max_relative_error);
  EXPECT_THROW(identity_suite(1, 10, 3), ShapeError);
}

TEST(Identities, MinorOfInverseOracle) {
  // Delta_l(theta^{-1}) = det(theta^{-1}) det(theta_0), theta_0 the trailing block.
  oracle::Rng rng(53);
  for (int t = 0; t < 200; ++t) {
    const int r = rng.integer(2, 6);
    const int l = rng.integer(1, r - 1);
    const Mat theta = rng.cone_point(r);
    const Mat inv = oracle::inverse(theta);
    const double lhs = oracle::leading_minor(inv, l);
    const double rhs = oracle::det(inv) * oracle::det(oracle::sub(theta, l, l, r - l, r - l));
    EXPECT_NEAR(lhs, rhs, 1e-8 * std::abs(rhs));
    EXPECT_NEAR(minors(sym(inv))[l - 1], lhs, 1e-8 * std::abs(lhs));
  }
  // At theta = e both sides are 1.
  EXPECT_EQ(minors(inverse_pd(SymElement::identity(4)))[1], 1.0);
}

TEST(Identities, PairingVanishesAtZeroHalfSpaceElement) {
  const SymElement u1 = embed_leading(sym({{2, 1}, {1, 3}}), 4);
  const SymElement z0 = embed_trailing(sym({{1, 0.5}, {0.5, 2}}), 4);
  const SymElement v = half_space_element(Matrix::Zero(2, 2));
  EXPECT_EQ(inner(u1, quadratic_rep(v, z0)), 0.0);
  EXPECT_EQ(2.0 * inner(v, jordan_product(z0, jordan_product(u1, v))), 0.0);
}

// ---------------------------------------------------------------- rank

TEST(Rank, NumericalRank) {
  EXPECT_EQ(numerical_rank(SymElement::zero(3)), 0);
  EXPECT_EQ(numerical_rank(SymElement::identity(3)), 3);
  EXPECT_EQ(numerical_rank(sym({{1, 1}, {1, 1}})), 1);
  EXPECT_EQ(numerical_rank(SymElement::diagonal(V{1, 1e-9, 0})), 1);
  EXPECT_EQ(numerical_rank(SymElement::diagonal(V{1, 1e-7, 0})), 2);
}

TEST(Rank, Profiles) {
  const auto ac = rank_profile(draw({2, 1.5, 1.8}, -SymElement::identity(3), 2000, 6), 3);
  EXPECT_TRUE(ac.pass);
  EXPECT_EQ(ac.histogram.at(3), 2000u);

  const auto zero = rank_profile(draw({0, 0, 0}, -SymElement::identity(3), 100, 7), 0);
  EXPECT_TRUE(zero.pass);
  EXPECT_EQ(zero.histogram.at(0), 100u);

  const auto batch = draw({1.2, 0.5, 1.2, 1.0}, -SymElement::identity(4), 20000, 8);
  const auto two = rank_profile(batch, 2);
  EXPECT_TRUE(two.pass);
  EXPECT_EQ(two.above_expected, 0u);
  EXPECT_GE(two.fraction_at_expected, 0.999);
  EXPECT_EQ(two.psd_violations, 0u);
  EXPECT_FALSE(rank_profile(batch, 1).pass);
  EXPECT_FALSE(rank_profile(batch, 3).pass);
}
