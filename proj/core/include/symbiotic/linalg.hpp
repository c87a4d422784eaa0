#pragma once

#include <vector>

#include "symbiotic/matrix.hpp"

namespace symbiotic::linalg {

/// Relative tolerance used when deciding whether a matrix is symmetric.
inline constexpr double kSymmetryTolerance = 1e-12;

/// Solves A'P + PA + R = 0 for P by Kronecker vectorization
/// ((I (x) A' + A' (x) I) vec(P) = -vec(R)). The result is symmetrized.
/// Throws NumericalError("not Hurwitz / solve failed") when the n^2 system is
/// singular, i.e. when two eigenvalues of A sum to zero.
Matrix solve_lyapunov(const Matrix& a, const Matrix& r);

/// True iff A'P + PA + I = 0 has a symmetric positive-definite solution.
bool hurwitz_check(const Matrix& a);

/// Eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
std::vector<double> sym_eigs(const Matrix& m);

/// min(sym_eigs(M)) > 0, no slack.
bool is_positive_definite(const Matrix& m);

bool is_symmetric(const Matrix& m, double rel_tol = kSymmetryTolerance);

/// Gaussian elimination with partial pivoting. Throws NearPoleError when a
/// pivot falls below 1e-14 relative to the largest entry of A.
ComplexVector complex_solve(const ComplexMatrix& a, const ComplexVector& b);

/// Real square solve A X = B with partial pivoting.
Matrix solve(const Matrix& a, const Matrix& b);

/// B_i = (B'B)^-1 B'. Throws NumericalError for rank-deficient B.
Matrix pseudo_left_inverse(const Matrix& b);

}  // namespace symbiotic::linalg
