#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "riesz/gindikin.hpp"

using namespace riesz;
using V = std::vector<double>;

namespace {

V sum_blocks(const BlockPartition& part) {
  V sum(part.r, 0.0);
  for (const auto& bp : block_params(part))
    for (int i = 0; i < part.r; ++i) sum[i] += bp.s[i];
  return sum;
}

}  // namespace

TEST(SFromU, Examples) {
  EXPECT_EQ(s_from_u(V{0, 0, 0}, 1.0), (V{0, 0, 0}));
  EXPECT_EQ(s_from_u(V{1, 0, 0.5}, 1.0), (V{1, 0.5, 1}));
  EXPECT_EQ(s_from_u(V{0, 1, 2, 0, 0, 3, 0}, 1.0), (V{0, 1, 2.5, 1, 1, 4, 1.5}));
  EXPECT_EQ(s_from_u(V{1, 1, 1}, 2.0), (V{1, 2, 3}));
}

TEST(SFromU, Errors) {
  EXPECT_THROW(s_from_u(V{1, -0.1}, 1.0), DomainError);
  EXPECT_THROW(s_from_u(V{1, 1}, 0.0), DomainError);
  EXPECT_THROW(s_from_u(V{1, std::nan("")}, 1.0), DomainError);
}

TEST(UFromS, Examples) {
  const auto a = u_from_s(V{1, 0.5, 1}, 1.0);
  ASSERT_TRUE(a.in_xi);
  EXPECT_EQ(a.u, (V{1, 0, 0.5}));
  EXPECT_EQ(a.param->s, (V{1, 0.5, 1}));

  const auto b = u_from_s(V{0.5, 0.2}, 1.0);
  EXPECT_FALSE(b.in_xi);
  EXPECT_EQ(b.first_negative, 1);
  EXPECT_NEAR(b.u[1], -0.3, 1e-15);
  EXPECT_FALSE(b.param.has_value());
}

TEST(UFromS, DiagonalMembershipGrid) {
  // (p, p, p) is in Xi for r = 3, d = 1 iff p in {0, 1/2, 1} or p > 1.
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 0.9999, 1.5, 7.0}) {
    const bool expected = p == 0.0 || p == 0.5 || p >= 1.0;
    EXPECT_EQ(u_from_s(V{p, p, p}, 1.0).in_xi, expected) << "p=" << p;
  }
}

TEST(UFromS, GeneralDiagonalMembership) {
  // (p,...,p) is in Xi iff p in {0, d/2, ..., (r-1)d/2} or p > (r-1)d/2.
  for (double d : {1.0, 2.0, 4.0}) {
    for (int r = 1; r <= 5; ++r) {
      for (int q = 0; q <= 4 * r; ++q) {
        const double p = q * d / 4.0;
        const bool expected = (q % 2 == 0 && q / 2 <= r - 1) || p > (r - 1) * d / 2.0;
        EXPECT_EQ(u_from_s(V(r, p), d).in_xi, expected) << "d=" << d << " r=" << r << " p=" << p;
      }
    }
  }
}

TEST(UFromS, ContainsTheOpenProduct) {
  oracle::Rng rng(31);
  for (int t = 0; t < 2000; ++t) {
    const int r = rng.integer(1, 8);
    const double d = rng.uniform(0.2, 4.0);
    V s(r);
    for (int i = 0; i < r; ++i) s[i] = i * d / 2.0 + rng.uniform(1e-9, 5.0);
    const auto v = u_from_s(s, d);
    EXPECT_TRUE(v.in_xi);
    EXPECT_TRUE(v.param->absolutely_continuous());
  }
}

TEST(UFromS, ZeroTolSnapsNearZeros) {
  const V s{1.0, 0.5 + 1e-13, 1.0};
  EXPECT_FALSE(u_from_s(s, 1.0).param->u[1] == 0.0);
  const auto snapped = u_from_s(s, 1.0, 1e-12);
  ASSERT_TRUE(snapped.in_xi);
  EXPECT_EQ(snapped.u[1], 0.0);
  EXPECT_EQ(snapped.param->s, s_from_u(snapped.u, 1.0));
  // A small negative coordinate is rejected without the flag and kept with it.
  const V neg{1.0, 0.5 - 1e-13};
  EXPECT_FALSE(u_from_s(neg, 1.0).in_xi);
  EXPECT_TRUE(u_from_s(neg, 1.0, 1e-12).in_xi);
}

TEST(RoundTrip, DyadicCoordinatesAreExact) {
  oracle::Rng rng(32);
  for (int t = 0; t < 10000; ++t) {
    const int r = rng.integer(1, 8);
    V u(r);
    for (double& v : u) v = rng.uniform() < 0.35 ? 0.0 : rng.integer(1, 5 * 1024) / 1024.0;
    const V s = s_from_u(u, 1.0);
    EXPECT_EQ(s, oracle::s_from_u(u, 1.0));
    const auto v = u_from_s(s, 1.0);
    ASSERT_TRUE(v.in_xi);
    EXPECT_EQ(v.u, u);
    EXPECT_EQ(sum_blocks(build_partition(*v.param)), s);
  }
}

TEST(RoundTrip, ContinuousCoordinates) {
  oracle::Rng rng(33);
  for (int t = 0; t < 10000; ++t) {
    const int r = rng.integer(1, 8);
    V u(r);
    for (double& v : u) v = rng.uniform() < 0.35 ? 0.0 : rng.uniform(1e-6, 5.0);
    const auto v = u_from_s(s_from_u(u, 1.0), 1.0);
    ASSERT_TRUE(v.in_xi);
    for (int i = 0; i < r; ++i) {
      EXPECT_EQ(v.u[i] == 0.0, u[i] == 0.0);
      EXPECT_NEAR(v.u[i], u[i], 1e-12 * std::max(1.0, u[i]));
    }
  }
}

TEST(Partition, SevenExample) {
  const auto part = build_partition(param_from_u(V{0, 1, 2, 0, 0, 3, 0}, 1.0));
  ASSERT_EQ(part.k(), 2);
  EXPECT_EQ(part.blocks[0].start, 1);
  EXPECT_EQ(part.blocks[0].length, 2);
  EXPECT_EQ(part.blocks[1].start, 5);
  EXPECT_EQ(part.blocks[1].length, 1);
  EXPECT_EQ(part.runs, (std::vector<std::vector<int>>{{2, 3}, {6}}));
  EXPECT_EQ(part.zero_runs, (std::vector<std::vector<int>>{{1}, {4, 5}, {7}}));
  EXPECT_EQ(part.total_rank(), 3);
  EXPECT_TRUE(part.singular());

  const auto bp = block_params(part);
  EXPECT_EQ(bp[0].u, (V{1, 2.5}));
  EXPECT_EQ(bp[0].s, (V{0, 1, 2.5, 1, 1, 1, 1}));
  EXPECT_EQ(bp[1].u, (V{3}));
  EXPECT_EQ(bp[1].s, (V{0, 0, 0, 0, 0, 3, 0.5}));
  EXPECT_EQ(part.blocks[0].u, bp[0].u);
  EXPECT_EQ(part.blocks[1].s, bp[1].s);
  EXPECT_EQ(sum_blocks(part), (V{0, 1, 2.5, 1, 1, 4, 1.5}));
}

TEST(Partition, SingleRunAndEmpty) {
  const V u{0.3, 1.7, 2.0, 0.1};
  const auto full = build_partition(param_from_u(u, 1.0));
  ASSERT_EQ(full.k(), 1);
  EXPECT_EQ(full.blocks[0].start, 0);
  EXPECT_EQ(full.blocks[0].length, 4);
  EXPECT_FALSE(full.singular());
  EXPECT_EQ(full.blocks[0].u, (V{0.3, 2.2, 3.0, 1.6}));
  EXPECT_EQ(full.blocks[0].s, s_from_u(u, 1.0));

  const auto empty = build_partition(param_from_u(V{0, 0, 0}, 1.0));
  EXPECT_EQ(empty.k(), 0);
  EXPECT_EQ(empty.total_rank(), 0);
  EXPECT_EQ(empty.zero_runs, (std::vector<std::vector<int>>{{1, 2, 3}}));
  EXPECT_EQ(sum_blocks(empty), (V{0, 0, 0}));

  const auto trailing_zero = build_partition(param_from_u(V{1, 0}, 1.0));
  ASSERT_EQ(trailing_zero.k(), 1);
  EXPECT_EQ(trailing_zero.blocks[0].u, (V{1}));
  EXPECT_EQ(trailing_zero.blocks[0].s, (V{1, 0.5}));
}

TEST(Partition, SingularIffSomeCoordinateVanishes) {
  // A single run followed by zeros (k = 1) is already singular.
  EXPECT_TRUE(build_partition(param_from_u(V{1, 0}, 1.0)).singular());
  EXPECT_TRUE(build_partition(param_from_u(V{0, 1}, 1.0)).singular());
  EXPECT_FALSE(build_partition(param_from_u(V{1, 1}, 1.0)).singular());
  oracle::Rng rng(34);
  for (int t = 0; t < 2000; ++t) {
    const int r = rng.integer(1, 7);
    V u(r);
    bool any_zero = false;
    for (double& v : u) {
      v = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.1, 3.0);
      any_zero = any_zero || v == 0.0;
    }
    const auto param = param_from_u(u, 1.0);
    EXPECT_EQ(build_partition(param).singular(), any_zero);
    EXPECT_EQ(param.absolutely_continuous(), !any_zero);
  }
}

TEST(Partition, Invariants) {
  oracle::Rng rng(35);
  for (int t = 0; t < 3000; ++t) {
    const int r = rng.integer(1, 9);
    const double d = std::vector<double>{1.0, 2.0, 4.0}[rng.integer(0, 2)];
    V u(r);
    for (double& v : u) v = rng.uniform() < 0.4 ? 0.0 : rng.integer(1, 4096) / 512.0;
    const auto part = build_partition(param_from_u(u, d));

    // I and I' partition {1..r}, in order, alternating I'_0 I_1 I'_1 ...
    std::vector<int> seen;
    ASSERT_EQ(part.zero_runs.size(), part.runs.size() + 1);
    for (int l = 0; l <= part.k(); ++l) {
      for (int i : part.zero_runs[l]) {
        seen.push_back(i);
        EXPECT_EQ(u[i - 1], 0.0);
      }
      if (l < part.k()) {
        const auto& b = part.blocks[l];
        std::vector<int> expect;
        for (int p = 1; p <= b.length; ++p) expect.push_back(b.start + p);
        EXPECT_EQ(part.runs[l], expect);
        for (int i : part.runs[l]) {
          seen.push_back(i);
          EXPECT_GT(u[i - 1], 0.0);
        }
        for (int p = 1; p <= b.length; ++p) {
          EXPECT_EQ(b.u[p - 1], u[b.start + p - 1] + d / 2.0 * (p - 1));
          EXPECT_GT(b.u[p - 1], (p - 1) * d / 2.0);
        }
      }
    }
    std::vector<int> all(r);
    for (int i = 0; i < r; ++i) all[i] = i + 1;
    EXPECT_EQ(seen, all);
    EXPECT_EQ(sum_blocks(part), s_from_u(u, d));
  }
}

TEST(GammaOmega, Examples) {
  EXPECT_NEAR(log_gamma_omega(V{3.5}, 1, 1.0), std::lgamma(3.5), 1e-14);
  const double expected = 0.5 * std::log(2 * std::numbers::pi) + 0.5 * std::log(std::numbers::pi);
  EXPECT_NEAR(log_gamma_omega(V{2, 1}, 2, 1.0), expected, 1e-14);
  EXPECT_NEAR(std::exp(log_gamma_omega(V{2, 1}, 2, 1.0)), 4.442882938158366, 1e-12);
  EXPECT_THROW(log_gamma_omega(V{1, 0.5}, 2, 1.0), DomainError);
  EXPECT_THROW(log_gamma_omega(V{0, 2}, 2, 1.0), DomainError);
}

TEST(GammaOmega, MatchesOracle) {
  oracle::Rng rng(36);
  for (int t = 0; t < 500; ++t) {
    const int r = rng.integer(1, 6);
    const double d = std::vector<double>{1.0, 2.0, 4.0}[rng.integer(0, 2)];
    V s(r);
    for (int i = 0; i < r; ++i) s[i] = i * d / 2.0 + rng.uniform(0.05, 6.0);
    EXPECT_NEAR(log_gamma_omega(s, r, d), oracle::log_gamma_omega(s, d),
                1e-12 * std::max(1.0, std::abs(oracle::log_gamma_omega(s, d))));
  }
}

TEST(GindikinParam, Flags) {
  EXPECT_TRUE(param_from_u(V{1, 2}, 1.0).samplable());
  EXPECT_FALSE(param_from_u(V{1, 2}, 2.0).samplable());
  EXPECT_THROW(param_from_u(V{}, 1.0), ShapeError);
  EXPECT_THROW(param_from_u(V{1, -1}, 1.0), DomainError);
}
