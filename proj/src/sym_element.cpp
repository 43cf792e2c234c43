#include "riesz/sym_element.hpp"

#include <cmath>
#include <sstream>

namespace riesz {

AlgebraShape::AlgebraShape(int rank, double peirce) : r(rank), d(peirce) {
  if (r < 1) throw ShapeError("algebra rank must be >= 1");
  if (!(d > 0.0) || !std::isfinite(d)) throw ShapeError("Peirce constant d must be positive");
}

SymElement::SymElement(int r) : r_(r) {
  if (r < 1) throw ShapeError("SymElement needs r >= 1");
  packed_.assign(static_cast<std::size_t>(r) * (r + 1) / 2, 0.0);
}

SymElement SymElement::identity(int r) {
  SymElement e(r);
  for (int i = 0; i < r; ++i) e.set(i, i, 1.0);
  return e;
}

SymElement SymElement::frame_idempotent(int r, int i) {
  if (i < 1 || i > r) throw ShapeError("frame index out of range");
  SymElement c(r);
  c.set(i - 1, i - 1, 1.0);
  return c;
}

SymElement SymElement::sigma(int r, int l) {
  if (l < 0 || l > r) throw ShapeError("sigma_l needs 0 <= l <= r");
  SymElement c(r);
  for (int i = 0; i < l; ++i) c.set(i, i, 1.0);
  return c;
}

SymElement SymElement::diagonal(std::span<const double> values) {
  SymElement x(static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) x.set(int(i), int(i), values[i]);
  return x;
}

SymElement SymElement::from_dense(const Matrix& m, double abs_tol) {
  if (m.rows() != m.cols() || m.rows() < 1) throw ShapeError("expected a non-empty square matrix");
  const int r = static_cast<int>(m.rows());
  SymElement x(r);
  for (int i = 0; i < r; ++i) {
    for (int j = i; j < r; ++j) {
      if (!(std::abs(m(i, j) - m(j, i)) <= abs_tol)) {
        std::ostringstream msg;
        msg << "matrix is not symmetric at (" << i << ", " << j << "): " << m(i, j) << " vs "
            << m(j, i);
        throw ShapeError(msg.str());
      }
      x.set(i, j, i == j ? m(i, i) : 0.5 * (m(i, j) + m(j, i)));
    }
  }
  return x;
}

SymElement SymElement::symmetrized(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) throw ShapeError("expected a non-empty square matrix");
  const int r = static_cast<int>(m.rows());
  SymElement x(r);
  for (int i = 0; i < r; ++i) {
    x.set(i, i, m(i, i));
    for (int j = i + 1; j < r; ++j) x.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  }
  return x;
}

Matrix SymElement::dense() const {
  Matrix m(r_, r_);
  for (int i = 0; i < r_; ++i) {
    for (int j = i; j < r_; ++j) {
      const double v = (*this)(i, j);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

double SymElement::norm() const {
  double diag = 0.0;
  double off = 0.0;
  for (int i = 0; i < r_; ++i) {
    diag += (*this)(i, i) * (*this)(i, i);
    for (int j = i + 1; j < r_; ++j) off += (*this)(i, j) * (*this)(i, j);
  }
  return std::sqrt(diag + 2.0 * off);
}

bool SymElement::is_finite() const {
  for (double v : packed_)
    if (!std::isfinite(v)) return false;
  return true;
}

SymElement& SymElement::operator+=(const SymElement& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t k = 0; k < packed_.size(); ++k) packed_[k] += other.packed_[k];
  return *this;
}

SymElement& SymElement::operator-=(const SymElement& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t k = 0; k < packed_.size(); ++k) packed_[k] -= other.packed_[k];
  return *this;
}

SymElement& SymElement::operator*=(double scale) {
  for (double& v : packed_) v *= scale;
  return *this;
}

void require_same_shape(const SymElement& x, const SymElement& y, const char* what) {
  if (x.r() != y.r()) {
    std::ostringstream msg;
    msg << what << ": shape mismatch (r = " << x.r() << " vs " << y.r() << ")";
    throw ShapeError(msg.str());
  }
}

}  // namespace riesz
