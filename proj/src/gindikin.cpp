#include "riesz/gindikin.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "riesz/sym_element.hpp"

namespace riesz {

namespace {

void require_d(double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("Peirce constant d must be positive");
}

}  // namespace

bool GindikinParam::absolutely_continuous() const {
  for (double v : u)
    if (v == 0.0) return false;
  return true;
}

std::vector<double> s_from_u(std::span<const double> u, double d) {
  require_d(d);
  std::vector<double> s(u.size());
  int positive = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] >= 0.0) || !std::isfinite(u[i])) {
      std::ostringstream msg;
      msg << "s_from_u: u_" << i + 1 << " = " << u[i] << " is not a finite nonnegative number";
      throw DomainError(msg.str());
    }
    s[i] = u[i] + 0.5 * d * positive;
    if (u[i] > 0.0) ++positive;
  }
  return s;
}

XiVerdict u_from_s(std::span<const double> s, double d, double zero_tol) {
  require_d(d);
  if (s.empty()) throw ShapeError("u_from_s: empty parameter");
  XiVerdict out;
  out.u.resize(s.size());
  int positive = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i])) throw DomainError("u_from_s: non-finite parameter");
    double ui = s[i] - 0.5 * d * positive;
    if (std::abs(ui) <= zero_tol) ui = 0.0;
    out.u[i] = ui;
    if (ui < 0.0 && out.first_negative < 0) out.first_negative = static_cast<int>(i);
    if (ui > 0.0) ++positive;
  }
  out.in_xi = out.first_negative < 0;
  if (out.in_xi) {
    GindikinParam p{static_cast<int>(s.size()), d, {}, out.u};
    p.s = zero_tol > 0.0 ? s_from_u(out.u, d) : std::vector<double>(s.begin(), s.end());
    out.param = std::move(p);
  }
  return out;
}

GindikinParam param_from_u(std::span<const double> u, double d) {
  if (u.empty()) throw ShapeError("param_from_u: empty parameter");
  return GindikinParam{static_cast<int>(u.size()), d, s_from_u(u, d), {u.begin(), u.end()}};
}

int BlockPartition::total_rank() const {
  int total = 0;
  for (const auto& b : blocks) total += b.length;
  return total;
}

BlockPartition build_partition(const GindikinParam& param) {
  const int r = param.r;
  if (static_cast<int>(param.u.size()) != r) throw ShapeError("build_partition: u has wrong length");
  BlockPartition part;
  part.r = r;
  part.d = param.d;
  part.u = param.u;

  std::vector<int> zeros;
  int p = 0;
  while (p < r) {
    if (param.u[p] == 0.0) {
      zeros.push_back(p + 1);
      ++p;
      continue;
    }
    part.zero_runs.push_back(std::move(zeros));
    zeros.clear();
    Block b;
    b.start = p;
    std::vector<int> run;
    while (p < r && param.u[p] != 0.0) run.push_back(++p);
    b.length = static_cast<int>(run.size());
    part.blocks.push_back(std::move(b));
    part.runs.push_back(std::move(run));
  }
  part.zero_runs.push_back(std::move(zeros));

  const auto params = block_params(part);
  for (std::size_t l = 0; l < params.size(); ++l) {
    part.blocks[l].u = params[l].u;
    part.blocks[l].s = params[l].s;
  }
  return part;
}

std::vector<BlockParams> block_params(const BlockPartition& partition) {
  const double half_d = 0.5 * partition.d;
  std::vector<BlockParams> out;
  out.reserve(partition.blocks.size());
  for (const Block& b : partition.blocks) {
    BlockParams bp;
    bp.u.resize(b.length);
    bp.s.assign(partition.r, 0.0);
    for (int p = 0; p < b.length; ++p) {
      bp.u[p] = partition.u[b.start + p] + half_d * p;
      bp.s[b.start + p] = bp.u[p];
    }
    for (int m = b.start + b.length; m < partition.r; ++m) bp.s[m] = half_d * b.length;
    out.push_back(std::move(bp));
  }
  return out;
}

double log_gamma_omega(std::span<const double> s, int r, double d) {
  require_d(d);
  if (static_cast<int>(s.size()) != r) throw ShapeError("log_gamma_omega: s has wrong length");
  const double n = r + 0.5 * d * r * (r - 1);
  double total = 0.5 * (n - r) * std::log(2.0 * std::numbers::pi);
  for (int j = 0; j < r; ++j) {
    const double arg = s[j] - 0.5 * d * j;
    if (!(arg > 0.0)) {
      std::ostringstream msg;
      msg << "Gamma_Omega: pole at s_" << j + 1 << " - " << j << "d/2 = " << arg;
      throw DomainError(msg.str());
    }
    total += boost::math::lgamma(arg);
  }
  return total;
}

}  // namespace riesz
