#pragma once

// Arithmetic of the Gindikin set Xi: the correspondence between the
// parameter s of a Riesz measure and its nonnegative coordinates u,
// s_1 = u_1,  s_i = u_i + (d/2) * #{j < i : u_j > 0},
// the decomposition of u into runs of nonzero entries, and Gamma_Omega.

#include <optional>
#include <span>
#include <vector>

namespace riesz {

/// A certified member of Xi: s and its coordinates u (all >= 0).
struct GindikinParam {
  int r = 0;
  double d = 1.0;
  std::vector<double> s;
  std::vector<double> u;

  /// Samplers exist only for real symmetric matrices.
  bool samplable() const { return d == 1.0; }
  /// All u_i > 0, i.e. s_i > (i-1) d/2: R_s has a density on the open cone.
  bool absolutely_continuous() const;
};

std::vector<double> s_from_u(std::span<const double> u, double d);

struct XiVerdict {
  bool in_xi = false;
  /// Coordinates as recovered left to right; entries after the first
  /// negative one are still reported.
  std::vector<double> u;
  /// 0-based index of the first u_i < 0, or -1.
  int first_negative = -1;
  std::optional<GindikinParam> param;
};

/// Inverts s_from_u and decides membership in Xi. With zero_tol > 0 every
/// recovered |u_i| <= zero_tol is snapped to 0 before it is counted; the
/// certified param then carries s_from_u of the snapped u.
XiVerdict u_from_s(std::span<const double> s, double d, double zero_tol = 0.0);

/// Builds a certified parameter from nonnegative coordinates.
GindikinParam param_from_u(std::span<const double> u, double d);

/// One run of nonzero coordinates, I_l = {start+1, ..., start+length}.
struct Block {
  int start = 0;               // i_l
  int length = 0;              // j_l
  std::vector<double> u;       // u^(l), length j_l
  std::vector<double> s;       // s^(l), length r
};

struct BlockPartition {
  int r = 0;
  double d = 1.0;
  std::vector<double> u;
  std::vector<Block> blocks;                  // k = blocks.size()
  std::vector<std::vector<int>> runs;         // I_1..I_k, 1-based indices
  std::vector<std::vector<int>> zero_runs;    // I'_0..I'_k, 1-based, may be empty

  int k() const { return static_cast<int>(blocks.size()); }
  /// j_1 + ... + j_k, the almost-sure rank of R_s samples.
  int total_rank() const;
  /// Some u_i = 0, so R_s lives on the boundary of the cone.
  bool singular() const { return total_rank() < r; }
};

BlockPartition build_partition(const GindikinParam& param);

struct BlockParams {
  std::vector<double> u;  // u^(l)
  std::vector<double> s;  // s^(l)
};

/// u^(l)_p = u_{i_l+p} + (d/2)(p-1); s^(l) is zero before the run, u^(l) on
/// it and d j_l / 2 after it.
std::vector<BlockParams> block_params(const BlockPartition& partition);

/// log Gamma_Omega(s) = (n-r)/2 log(2 pi) + sum_j log Gamma(s_j - (j-1) d/2).
/// Throws DomainError at a pole.
double log_gamma_omega(std::span<const double> s, int r, double d);

}  // namespace riesz
