#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "riesz/random.hpp"
#include "riesz/sampler.hpp"

using namespace riesz;

// Known-answer vectors of the Random123 reference implementation.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (PhiloxBlock{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (PhiloxBlock{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (PhiloxBlock{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RandomStream, Reproducible) {
  RandomStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
    EXPECT_NE(x, d());
    seen.insert(x);
  }
  EXPECT_EQ(seen.size(), 100u);
}

TEST(RandomStream, UniformInOpenInterval) {
  RandomStream rng(1, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
}

TEST(RandomStream, NormalMoments) {
  RandomStream rng(2, 0);
  const int n = 400000;
  double m1 = 0, m2 = 0, m4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    m1 += z;
    m2 += z * z;
    m4 += z * z * z * z;
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  EXPECT_NEAR(m1, 0.0, 5 / std::sqrt(n));
  EXPECT_NEAR(m2, 1.0, 5 * std::sqrt(2.0 / n));
  EXPECT_NEAR(m4, 3.0, 5 * std::sqrt(96.0 / n));
}

namespace {

struct GammaMoments {
  double mean = 0.0;
  double var = 0.0;
  double min = INFINITY;
};

GammaMoments gamma_moments(double shape, int n, std::uint64_t seed) {
  RandomStream rng(seed, 0);
  GammaMoments m;
  double s1 = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double g = sample_gamma(shape, rng);
    s1 += g;
    s2 += g * g;
    m.min = std::min(m.min, g);
  }
  m.mean = s1 / n;
  m.var = s2 / n - m.mean * m.mean;
  return m;
}

}  // namespace

TEST(Gamma, ExponentialMean) {
  const auto m = gamma_moments(1.0, 1000000, 3);
  EXPECT_GE(m.mean, 0.997);
  EXPECT_LE(m.mean, 1.003);
}

TEST(Gamma, MeansAndVariances) {
  const int n = 400000;
  for (double shape : {2.5, 0.3, 0.05, 1.0 / 3.0, 7.0, 40.0}) {
    const auto m = gamma_moments(shape, n, 4);
    EXPECT_GT(m.min, 0.0) << shape;
    EXPECT_NEAR(m.mean, shape, 3 * std::sqrt(shape / n)) << shape;
    // Var of the sample variance uses the fourth central moment 3k^2 + 6k.
    EXPECT_NEAR(m.var, shape, 4 * std::sqrt((3 * shape * shape + 6 * shape - shape * shape) / n)) << shape;
  }
}

TEST(Gamma, RejectsNonPositiveShape) {
  RandomStream rng(5, 0);
  EXPECT_THROW(sample_gamma(0.0, rng), DomainError);
  EXPECT_THROW(sample_gamma(-1.0, rng), DomainError);
  EXPECT_THROW(sample_gamma(std::nan(""), rng), DomainError);
}
