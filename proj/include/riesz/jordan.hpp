#pragma once

// The Euclidean Jordan algebra Sym(r, R): x o y = (xy + yx) / 2, inner
// product <x, y> = tr(xy), and the fixed standard Jordan frame c_1..c_r.
// Peirce splits are always taken with respect to sigma_l = c_1 + ... + c_l,
// which in matrix terms is the 2x2 block structure at row/column l.

#include <span>
#include <vector>

#include "riesz/sym_element.hpp"

namespace riesz {

double inner(const SymElement& x, const SymElement& y);
SymElement jordan_product(const SymElement& x, const SymElement& y);
/// P(x)y = x y x.
SymElement quadratic_rep(const SymElement& x, const SymElement& y);

struct SpectralDecomp {
  Vector eigenvalues;  // sorted descending
  Matrix basis;        // orthogonal, columns are eigenvectors
};

/// Cyclic Jacobi. Stops when the off-diagonal Frobenius mass drops to
/// 1e-13 * ||x||; throws ConvergenceError after 50 sweeps.
SpectralDecomp spectral(const SymElement& x);

/// Leading principal minors Delta_1(x) .. Delta_r(x).
std::vector<double> minors(const SymElement& x);

/// Delta_s(x) = Delta_1^{s1-s2} ... Delta_r^{sr}. Nonpositive minors are
/// accepted only where the exponent is a nonnegative integer.
double generalized_power(const SymElement& x, std::span<const double> s);
/// log Delta_s(x); every minor with a nonzero exponent must be positive.
double log_generalized_power(const SymElement& x, std::span<const double> s);

struct PeirceSplit {
  int l = 0;
  SymElement x1;  // l x l block, V(sigma_l, 1)
  Matrix x12;     // l x (r-l) block B, V(sigma_l, 1/2)
  SymElement x0;  // (r-l) x (r-l) block, V(sigma_l, 0)

  SymElement reassemble() const;
};

PeirceSplit peirce_split(const SymElement& x, int l);

/// The half-space element [[0, B], [B^T, 0]] of V(sigma_l, 1/2).
SymElement half_space_element(const Matrix& block);
/// Block B of the V(sigma_l, 1/2) component of x.
Matrix half_space_block(const SymElement& x, int l);
/// [[a, 0], [0, 0]] with a in the leading l x l corner of an r x r element.
SymElement embed_leading(const SymElement& a, int r);
/// [[0, 0], [0, z]] with z in the trailing corner of an r x r element.
SymElement embed_trailing(const SymElement& z, int r);

/// (x1, v) -> x1 + 2 v o sqrt(x1) + (e - sigma_l) o v^2, realised as
/// [[A, sqrt(A) B], [B^T sqrt(A), B^T B]]. The result has rank l.
SymElement alpha_map(const SymElement& x1, const Matrix& v);

struct AlphaPreimage {
  SymElement x1;
  Matrix v;
};

/// Inverse of alpha_map on J_l = {rank l, Delta_l != 0}.
AlphaPreimage invert_alpha(const SymElement& x, int l);

enum class HalfSide { leading, trailing };

struct HalfSpaceOperator {
  int l = 0;
  int r = 0;
  Matrix matrix;  // acts on vec(B), B an l x (r-l) block, row-major vec
  double determinant = 0.0;

  Matrix apply(const Matrix& block) const;
};

/// 2L(z) restricted to V(sigma_l, 1/2). For a leading z = diag(A, 0) this is
/// B -> A B; for a trailing z = diag(0, Z) it is B -> B Z.
HalfSpaceOperator half_space_op(const SymElement& z, HalfSide side, int l, int r);

/// Symmetric square root of a positive semidefinite element. Eigenvalues in
/// [-1e-12 ||x||, 0) are clamped to 0; anything more negative is an error.
SymElement sqrt_psd(const SymElement& x);

/// Inverse of a positive definite element via Cholesky.
SymElement inverse_pd(const SymElement& x);

bool is_positive_definite(const SymElement& x);

/// Leading k x k and trailing (r-k) x (r-k) sub-elements.
SymElement leading_block(const SymElement& x, int k);
SymElement trailing_block(const SymElement& x, int k);

}  // namespace riesz
