#include "riesz/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "riesz/jordan.hpp"

namespace riesz {

void require_interior_tilt(const SymElement& theta, const char* what) {
  if (!theta.is_finite()) throw DomainError(std::string(what) + ": tilt has non-finite entries");
  const double lo = spectral(-theta).eigenvalues(theta.r() - 1);
  if (!(lo >= 1e-10 * theta.norm()) || !(lo > 0.0)) {
    std::ostringstream msg;
    msg << what << ": -theta is not positive definite (min eigenvalue " << lo << ")";
    throw DomainError(msg.str());
  }
}

RieszSpec RieszSpec::make(const GindikinParam& param, const SymElement& theta, std::uint64_t seed,
                          std::size_t count) {
  if (!param.samplable()) throw DomainError("sampling is only available for d = 1");
  if (param.r != theta.r()) {
    std::ostringstream msg;
    msg << "parameter has length " << param.r << " but theta is " << theta.r() << " x " << theta.r();
    throw ShapeError(msg.str());
  }
  const auto verdict = u_from_s(param.s, param.d);
  if (!verdict.in_xi) throw DomainError("parameter is not in the Gindikin set");
  for (std::size_t i = 0; i < param.u.size(); ++i) {
    if (param.u[i] != verdict.u[i]) throw DomainError("parameter coordinates u do not match s");
  }
  if (count < 1) throw DomainError("sample count must be at least 1");
  require_interior_tilt(theta, "RieszSpec");
  return RieszSpec{AlgebraShape(param.r, 1.0), param, theta, seed, count};
}

double sample_gamma(double shape, RandomStream& stream) { return stream.gamma(shape); }

AcRieszSampler::AcRieszSampler(std::span<const double> u, const SymElement& eta) {
  const int l = eta.r();
  if (static_cast<int>(u.size()) != l) throw ShapeError("AC sampler: u and eta sizes differ");
  shapes_.resize(l);
  for (int p = 0; p < l; ++p) {
    shapes_[p] = u[p] - 0.5 * p;
    if (!(shapes_[p] > 0.0)) {
      std::ostringstream msg;
      msg << "AC sampler: u_" << p + 1 << " = " << u[p] << " must exceed " << 0.5 * p;
      throw DomainError(msg.str());
    }
  }
  require_interior_tilt(eta, "AC sampler");
  const auto llt = inverse_pd(-eta).dense().llt();
  if (llt.info() != Eigen::Success) throw DomainError("AC sampler: Cholesky of (-eta)^{-1} failed");
  chol_ = llt.matrixL();
}

Matrix AcRieszSampler::draw_factor(RandomStream& stream) const {
  const int l = size();
  const double off_scale = std::sqrt(0.5);
  Matrix t = Matrix::Zero(l, l);
  for (int p = 0; p < l; ++p) {
    t(p, p) = std::sqrt(stream.gamma(shapes_[p]));
    for (int q = 0; q < p; ++q) t(p, q) = off_scale * stream.normal();
  }
  return chol_.triangularView<Eigen::Lower>() * t;
}

SymElement AcRieszSampler::draw(RandomStream& stream) const {
  const Matrix g = draw_factor(stream);
  return SymElement::symmetrized(g * g.transpose());
}

SymElement sample_ac_riesz(std::span<const double> u, const SymElement& eta, RandomStream& stream) {
  return AcRieszSampler(u, eta).draw(stream);
}

namespace {

SymElement schur_tilt(const SymElement& theta, int start, int length) {
  const SymElement block = trailing_block(theta, start);
  if (length == block.r()) return block;
  const PeirceSplit split = peirce_split(block, length);
  const auto llt = (-split.x0).dense().llt();
  if (llt.info() != Eigen::Success) throw DomainError("singular block: -Theta0 is not positive definite");
  return split.x1 + SymElement::symmetrized(split.x12 * llt.solve(split.x12.transpose()));
}

}  // namespace

SingularBlockSampler::SingularBlockSampler(int start, int length, std::span<const double> u_block,
                                           const SymElement& theta)
    : r_(theta.r()),
      start_(start),
      length_(length),
      eta_((start >= 0 && length >= 1 && start + length <= theta.r())
               ? schur_tilt(theta, start, length)
               : throw ShapeError("singular block: need 0 <= i, 1 <= j, i + j <= r")),
      ac_(u_block, eta_) {
  const int rest = r_ - start_ - length_;
  if (rest > 0) {
    const PeirceSplit split = peirce_split(trailing_block(theta, start_), length_);
    neg_theta0_.compute((-split.x0).dense());
    if (neg_theta0_.info() != Eigen::Success)
      throw DomainError("singular block: -Theta0 is not positive definite");
    mean_factor_ = neg_theta0_.solve(split.x12.transpose()).transpose();
  }
}

SymElement SingularBlockSampler::draw(RandomStream& stream) const {
  // With A = G G^T and G = sqrt(A) Q, alpha_map(A, B) = W W^T for
  // W = [G; (Q^T B)^T], and Q^T B = G^T M + Q^T E has the law of G^T M + E.
  const Matrix g = ac_.draw_factor(stream);
  const int rest = r_ - start_ - length_;
  if (rest == 0) return embed_trailing(SymElement::symmetrized(g * g.transpose()), r_);

  // Rows of E are N(0, (1/2)(-Theta0)^{-1}): E^T = U^{-1} Z^T / sqrt 2 with -Theta0 = U^T U.
  Matrix z(rest, length_);
  for (int p = 0; p < length_; ++p)
    for (int q = 0; q < rest; ++q) z(q, p) = stream.normal();
  const Matrix e = (neg_theta0_.matrixU().solve(z) * std::sqrt(0.5)).transpose();

  Matrix w(length_ + rest, length_);
  w.topRows(length_) = g;
  w.bottomRows(rest) = (g.transpose() * mean_factor_ + e).transpose();
  return embed_trailing(SymElement::symmetrized(w * w.transpose()), r_);
}

SymElement sample_singular_block(int start, int length, std::span<const double> u_block,
                                 const SymElement& theta, RandomStream& stream) {
  return SingularBlockSampler(start, length, u_block, theta).draw(stream);
}

SampleBatch sample_riesz(const RieszSpec& spec, SamplerOptions options) {
  SampleBatch batch{spec, build_partition(spec.param), {}, {}};
  const int r = spec.param.r;

  std::vector<SingularBlockSampler> samplers;
  samplers.reserve(batch.partition.blocks.size());
  for (const Block& b : batch.partition.blocks) samplers.emplace_back(b.start, b.length, b.u, spec.theta);

  const std::size_t n = spec.count;
  batch.samples.assign(n, SymElement(r));
  batch.stream_index.resize(n);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      RandomStream stream(spec.seed, idx);
      SymElement x(r);
      for (const auto& sampler : samplers) x += sampler.draw(stream);
      batch.samples[idx] = std::move(x);
      batch.stream_index[idx] = idx;
    }
  };

  unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    work(0, n);
    return batch;
  }
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }
  return batch;
}

double log_density_ac(std::span<const double> s, const SymElement& x) {
  const int r = x.r();
  if (static_cast<int>(s.size()) != r) throw ShapeError("log_density_ac: s has wrong length");
  for (int i = 0; i < r; ++i) {
    if (!(s[i] > 0.5 * i)) {
      std::ostringstream msg;
      msg << "log_density_ac: s_" << i + 1 << " = " << s[i] << " <= " << 0.5 * i
          << "; R_s has no density outside the absolutely continuous regime";
      throw DomainError(msg.str());
    }
  }
  const auto m = minors(x);
  for (int k = 0; k < r; ++k) {
    if (!(m[k] > 0.0)) throw DomainError("log_density_ac: x is not in the open cone");
  }
  const double n_over_r = 0.5 * (r + 1);
  std::vector<double> shifted(s.begin(), s.end());
  for (double& v : shifted) v -= n_over_r;
  return log_generalized_power(x, shifted) - log_gamma_omega(s, r, 1.0);
}

}  // namespace riesz
