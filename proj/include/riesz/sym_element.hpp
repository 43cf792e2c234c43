#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace riesz {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Argument has the wrong size or incompatible shape.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument lies outside the mathematical domain of the operation
// (not in the cone, not in the Gindikin set, pole of a Gamma factor ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rank r, Peirce constant d and dimension n = r + (d/2) r (r-1) of a simple
/// Euclidean Jordan algebra. Only d = 1 (real symmetric matrices) carries
/// concrete elements; other values are allowed for parameter arithmetic.
struct AlgebraShape {
  int r = 1;
  double d = 1.0;

  AlgebraShape() = default;
  AlgebraShape(int rank, double peirce = 1.0);

  double n() const { return r + 0.5 * d * r * (r - 1); }
  bool operator==(const AlgebraShape&) const = default;
};

/// An element of Sym(r, R). Entries are stored once, as the packed upper
/// triangle in row-major order, so symmetry holds by construction.
class SymElement {
 public:
  SymElement() = default;
  explicit SymElement(int r);

  static SymElement zero(int r) { return SymElement(r); }
  static SymElement identity(int r);
  /// c_i of the standard frame (1-based i), a single 1 at (i, i).
  static SymElement frame_idempotent(int r, int i);
  /// sigma_l = c_1 + ... + c_l.
  static SymElement sigma(int r, int l);
  static SymElement diagonal(std::span<const double> values);

  /// Validated conversion: rejects |m(i,j) - m(j,i)| > abs_tol.
  static SymElement from_dense(const Matrix& m, double abs_tol = 1e-12);
  /// Unchecked conversion taking (m + m^T) / 2. For results of arithmetic
  /// that is symmetric up to roundoff.
  static SymElement symmetrized(const Matrix& m);

  int r() const { return r_; }
  AlgebraShape shape() const { return AlgebraShape(r_, 1.0); }
  std::size_t packed_size() const { return packed_.size(); }
  std::span<const double> packed() const { return packed_; }

  double operator()(int i, int j) const { return packed_[index(i, j)]; }
  void set(int i, int j, double value) { packed_[index(i, j)] = value; }

  Matrix dense() const;

  /// sqrt(<x, x>) with the trace inner product; equals the Frobenius norm.
  double norm() const;
  bool is_finite() const;

  SymElement& operator+=(const SymElement& other);
  SymElement& operator-=(const SymElement& other);
  SymElement& operator*=(double scale);
  friend SymElement operator+(SymElement a, const SymElement& b) { return a += b; }
  friend SymElement operator-(SymElement a, const SymElement& b) { return a -= b; }
  friend SymElement operator*(SymElement a, double t) { return a *= t; }
  friend SymElement operator*(double t, SymElement a) { return a *= t; }
  SymElement operator-() const { return *this * -1.0; }
  bool operator==(const SymElement&) const = default;

 private:
  std::size_t index(int i, int j) const {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i) * r_ - static_cast<std::size_t>(i) * (i - 1) / 2 + (j - i);
  }

  int r_ = 0;
  std::vector<double> packed_;
};

void require_same_shape(const SymElement& x, const SymElement& y, const char* what);

}  // namespace riesz
