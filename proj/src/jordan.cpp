#include "riesz/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace riesz {

namespace {

constexpr int kMaxJacobiSweeps = 50;
constexpr double kJacobiTol = 1e-13;

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_square_block(const SymElement& x, int l) {
  if (l < 1 || l > x.r() - 1) {
    std::ostringstream msg;
    msg << "split index l = " << l << " outside 1.." << x.r() - 1;
    throw ShapeError(msg.str());
  }
}

}  // namespace

double inner(const SymElement& x, const SymElement& y) {
  require_same_shape(x, y, "inner");
  const int r = x.r();
  double diag = 0.0;
  double off = 0.0;
  for (int i = 0; i < r; ++i) {
    diag += x(i, i) * y(i, i);
    for (int j = i + 1; j < r; ++j) off += x(i, j) * y(i, j);
  }
  return diag + 2.0 * off;
}

SymElement jordan_product(const SymElement& x, const SymElement& y) {
  require_same_shape(x, y, "jordan_product");
  const Matrix xy = x.dense() * y.dense();
  // (xy + yx)/2 and yx = (xy)^T for symmetric factors.
  return SymElement::symmetrized(xy);
}

SymElement quadratic_rep(const SymElement& x, const SymElement& y) {
  require_same_shape(x, y, "quadratic_rep");
  const Matrix xd = x.dense();
  return SymElement::symmetrized(xd * y.dense() * xd);
}

SpectralDecomp spectral(const SymElement& x) {
  if (!x.is_finite()) throw DomainError("spectral: non-finite entries");
  const int r = x.r();
  Matrix a = x.dense();
  Matrix v = Matrix::Identity(r, r);
  const double scale = x.norm();

  bool converged = false;
  for (int sweep = 0; sweep <= kMaxJacobiSweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < r; ++p)
      for (int q = p + 1; q < r; ++q) off += 2.0 * a(p, q) * a(p, q);
    if (std::sqrt(off) <= kJacobiTol * scale) {
      converged = true;
      break;
    }
    if (sweep == kMaxJacobiSweeps) break;

    for (int p = 0; p < r - 1; ++p) {
      for (int q = p + 1; q < r; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < r; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < r; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < r; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) throw ConvergenceError("spectral: Jacobi iteration did not converge in 50 sweeps");

  std::vector<int> order(r);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });

  SpectralDecomp out{Vector(r), Matrix(r, r)};
  for (int k = 0; k < r; ++k) {
    out.eigenvalues(k) = a(order[k], order[k]);
    out.basis.col(k) = v.col(order[k]);
  }
  return out;
}

std::vector<double> minors(const SymElement& x) {
  const int r = x.r();
  const Matrix a = x.dense();
  const double scale = max_abs(a);
  std::vector<double> out(r, 0.0);
  if (scale == 0.0) return out;

  // Unpivoted LDL^T of the leading blocks: Delta_{k+1} = Delta_k * D_k.
  Matrix lower = Matrix::Zero(r, r);
  std::vector<double> pivots(r, 0.0);
  double running = 1.0;
  for (int k = 0; k < r; ++k) {
    double dk = a(k, k);
    for (int j = 0; j < k; ++j) dk -= lower(k, j) * lower(k, j) * pivots[j];
    pivots[k] = dk;
    running *= dk;
    out[k] = running;

    if (std::abs(dk) <= 1e-14 * scale) {
      // Singular leading block: the recursion cannot continue, evaluate the
      // remaining minors directly.
      for (int m = k + 1; m < r; ++m) out[m] = a.topLeftCorner(m + 1, m + 1).partialPivLu().determinant();
      return out;
    }
    for (int i = k + 1; i < r; ++i) {
      double lik = a(i, k);
      for (int j = 0; j < k; ++j) lik -= lower(i, j) * lower(k, j) * pivots[j];
      lower(i, k) = lik / dk;
    }
  }
  return out;
}

namespace {

std::vector<double> power_exponents(std::span<const double> s, int r) {
  if (static_cast<int>(s.size()) != r) {
    std::ostringstream msg;
    msg << "generalized power: exponent vector has length " << s.size() << ", expected " << r;
    throw ShapeError(msg.str());
  }
  std::vector<double> e(r);
  for (int k = 0; k < r; ++k) e[k] = s[k] - (k + 1 < r ? s[k + 1] : 0.0);
  return e;
}

}  // namespace

double generalized_power(const SymElement& x, std::span<const double> s) {
  const auto e = power_exponents(s, x.r());
  const auto m = minors(x);
  double result = 1.0;
  for (int k = 0; k < x.r(); ++k) {
    if (e[k] == 0.0) continue;
    if (m[k] > 0.0 || (e[k] > 0.0 && e[k] == std::floor(e[k]))) {
      result *= std::pow(m[k], e[k]);
    } else {
      std::ostringstream msg;
      msg << "generalized power: minor Delta_" << k + 1 << " = " << m[k]
          << " is not positive and its exponent " << e[k] << " is not a nonnegative integer";
      throw DomainError(msg.str());
    }
  }
  return result;
}

double log_generalized_power(const SymElement& x, std::span<const double> s) {
  const auto e = power_exponents(s, x.r());
  const auto m = minors(x);
  double result = 0.0;
  for (int k = 0; k < x.r(); ++k) {
    if (e[k] == 0.0) continue;
    if (!(m[k] > 0.0)) {
      std::ostringstream msg;
      msg << "log generalized power: minor Delta_" << k + 1 << " = " << m[k] << " is not positive";
      throw DomainError(msg.str());
    }
    result += e[k] * std::log(m[k]);
  }
  return result;
}

SymElement leading_block(const SymElement& x, int k) {
  if (k < 1 || k > x.r()) throw ShapeError("leading_block: size out of range");
  SymElement out(k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) out.set(i, j, x(i, j));
  return out;
}

SymElement trailing_block(const SymElement& x, int k) {
  if (k < 0 || k >= x.r()) throw ShapeError("trailing_block: offset out of range");
  SymElement out(x.r() - k);
  for (int i = k; i < x.r(); ++i)
    for (int j = i; j < x.r(); ++j) out.set(i - k, j - k, x(i, j));
  return out;
}

SymElement PeirceSplit::reassemble() const {
  const int r = x1.r() + x0.r();
  SymElement x(r);
  for (int i = 0; i < l; ++i)
    for (int j = i; j < l; ++j) x.set(i, j, x1(i, j));
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < r - l; ++j) x.set(i, l + j, x12(i, j));
  for (int i = 0; i < r - l; ++i)
    for (int j = i; j < r - l; ++j) x.set(l + i, l + j, x0(i, j));
  return x;
}

PeirceSplit peirce_split(const SymElement& x, int l) {
  require_square_block(x, l);
  return PeirceSplit{l, leading_block(x, l), half_space_block(x, l), trailing_block(x, l)};
}

SymElement half_space_element(const Matrix& block) {
  const int l = static_cast<int>(block.rows());
  const int r = l + static_cast<int>(block.cols());
  SymElement v(r);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < block.cols(); ++j) v.set(i, l + j, block(i, j));
  return v;
}

Matrix half_space_block(const SymElement& x, int l) {
  require_square_block(x, l);
  Matrix b(l, x.r() - l);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < x.r() - l; ++j) b(i, j) = x(i, l + j);
  return b;
}

SymElement embed_leading(const SymElement& a, int r) {
  if (a.r() > r) throw ShapeError("embed_leading: block larger than target");
  SymElement x(r);
  for (int i = 0; i < a.r(); ++i)
    for (int j = i; j < a.r(); ++j) x.set(i, j, a(i, j));
  return x;
}

SymElement embed_trailing(const SymElement& z, int r) {
  if (z.r() > r) throw ShapeError("embed_trailing: block larger than target");
  const int off = r - z.r();
  SymElement x(r);
  for (int i = 0; i < z.r(); ++i)
    for (int j = i; j < z.r(); ++j) x.set(off + i, off + j, z(i, j));
  return x;
}

namespace {

// Q diag(f(lambda)) Q^T for a decomposition whose eigenvalues are all > 0.
Matrix spectral_function(const SpectralDecomp& sd, double (*f)(double)) {
  Vector fl = sd.eigenvalues.unaryExpr(f);
  return sd.basis * fl.asDiagonal() * sd.basis.transpose();
}

SpectralDecomp require_pd(const SymElement& a, const char* what) {
  SpectralDecomp sd = spectral(a);
  const double lo = sd.eigenvalues(a.r() - 1);
  if (!(lo > 1e-12 * a.norm())) {
    std::ostringstream msg;
    msg << what << ": block is not positive definite (min eigenvalue " << lo << ")";
    throw DomainError(msg.str());
  }
  return sd;
}

}  // namespace

SymElement alpha_map(const SymElement& x1, const Matrix& v) {
  const int l = x1.r();
  if (v.rows() != l) throw ShapeError("alpha_map: half-space block must have l rows");
  const int r = l + static_cast<int>(v.cols());
  const SpectralDecomp sd = require_pd(x1, "alpha_map");
  if (v.cols() == 0) return x1;

  const Matrix root = spectral_function(sd, [](double t) { return std::sqrt(t); });
  const Matrix c = root * v;
  const Matrix d = v.transpose() * v;

  SymElement x = embed_leading(x1, r);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < v.cols(); ++j) x.set(i, l + j, c(i, j));
  for (int i = 0; i < v.cols(); ++i)
    for (int j = i; j < v.cols(); ++j) x.set(l + i, l + j, 0.5 * (d(i, j) + d(j, i)));
  return x;
}

AlphaPreimage invert_alpha(const SymElement& x, int l) {
  if (l < 1 || l > x.r()) throw ShapeError("invert_alpha: l out of range");
  const SymElement a = leading_block(x, l);
  const auto llt = a.dense().llt();
  if (llt.info() != Eigen::Success || !(minors(a).back() > 0.0))
    throw DomainError("invert_alpha: leading block is not positive definite (Delta_l(x) <= 0)");
  if (l == x.r()) return {a, Matrix(l, 0)};

  const Matrix c = half_space_block(x, l);
  const Matrix d = trailing_block(x, l).dense();
  const Matrix residual = d - c.transpose() * llt.solve(c);
  if (residual.norm() > 1e-9 * std::max(1.0, x.norm())) {
    std::ostringstream msg;
    msg << "invert_alpha: element does not have rank l = " << l << " (Schur residual "
        << residual.norm() << ")";
    throw DomainError(msg.str());
  }
  const SpectralDecomp sd = require_pd(a, "invert_alpha");
  const Matrix inv_root = spectral_function(sd, [](double t) { return 1.0 / std::sqrt(t); });
  return {a, inv_root * c};
}

Matrix HalfSpaceOperator::apply(const Matrix& block) const {
  const int cols = r - l;
  if (block.rows() != l || block.cols() != cols) throw ShapeError("half-space block has wrong shape");
  Vector vec(l * cols);
  for (int p = 0; p < l; ++p)
    for (int q = 0; q < cols; ++q) vec(p * cols + q) = block(p, q);
  const Vector out = matrix * vec;
  Matrix res(l, cols);
  for (int p = 0; p < l; ++p)
    for (int q = 0; q < cols; ++q) res(p, q) = out(p * cols + q);
  return res;
}

HalfSpaceOperator half_space_op(const SymElement& z, HalfSide side, int l, int r) {
  if (l < 1 || l >= r) throw ShapeError("half_space_op: need 1 <= l <= r-1");
  const int expected = side == HalfSide::leading ? l : r - l;
  if (z.r() != expected) {
    std::ostringstream msg;
    msg << "half_space_op: operand has size " << z.r() << ", expected " << expected;
    throw ShapeError(msg.str());
  }
  const SymElement full = side == HalfSide::leading ? embed_leading(z, r) : embed_trailing(z, r);
  const int cols = r - l;
  const int dim = l * cols;

  HalfSpaceOperator op{l, r, Matrix(dim, dim), 0.0};
  for (int p = 0; p < l; ++p) {
    for (int q = 0; q < cols; ++q) {
      Matrix unit = Matrix::Zero(l, cols);
      unit(p, q) = 1.0;
      const Matrix image = half_space_block(2.0 * jordan_product(full, half_space_element(unit)), l);
      for (int pp = 0; pp < l; ++pp)
        for (int qq = 0; qq < cols; ++qq) op.matrix(pp * cols + qq, p * cols + q) = image(pp, qq);
    }
  }
  op.determinant = op.matrix.partialPivLu().determinant();
  return op;
}

SymElement sqrt_psd(const SymElement& x) {
  SpectralDecomp sd = spectral(x);
  const double floor = -1e-12 * x.norm();
  for (int k = 0; k < x.r(); ++k) {
    double& lam = sd.eigenvalues(k);
    if (lam < 0.0) {
      if (lam < floor) {
        std::ostringstream msg;
        msg << "sqrt_psd: eigenvalue " << lam << " is not within roundoff of the cone";
        throw DomainError(msg.str());
      }
      lam = 0.0;
    }
  }
  return SymElement::symmetrized(spectral_function(sd, [](double t) { return std::sqrt(t); }));
}

SymElement inverse_pd(const SymElement& x) {
  const auto llt = x.dense().llt();
  if (llt.info() != Eigen::Success) throw DomainError("inverse_pd: element is not positive definite");
  return SymElement::symmetrized(llt.solve(Matrix::Identity(x.r(), x.r())));
}

bool is_positive_definite(const SymElement& x) {
  if (!x.is_finite()) return false;
  return x.dense().llt().info() == Eigen::Success;
}

}  // namespace riesz
