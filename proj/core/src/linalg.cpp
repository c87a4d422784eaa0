#include "symbiotic/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace symbiotic::linalg {
namespace {

// In-place partial-pivoting elimination of [A | B]; returns false if a pivot
// drops below tol * max|A|.
template <typename T>
bool eliminate(BasicMatrix<T>& a, BasicMatrix<T>& b, double rel_tol) {
  const std::size_t n = a.rows();
  // Row equilibration, so the pivot threshold is relative per equation.
  for (std::size_t i = 0; i < n; ++i) {
    double row_max = 0.0;
    for (std::size_t j = 0; j < n; ++j) row_max = std::max(row_max, static_cast<double>(std::abs(a(i, j))));
    if (row_max == 0.0) return false;
    for (std::size_t j = 0; j < n; ++j) a(i, j) /= row_max;
    for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) /= row_max;
  }
  const double scale = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best <= rel_tol * scale) return false;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(piv, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const T f = a(i, k) / a(k, k);
      if (f == T{}) continue;
      a(i, k) = T{};
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) -= f * b(k, j);
    }
  }
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t ii = n; ii-- > 0;) {
      T acc = b(ii, c);
      for (std::size_t j = ii + 1; j < n; ++j) acc -= a(ii, j) * b(j, c);
      b(ii, c) = acc / a(ii, ii);
    }
  }
  return true;
}

void require_square(const Matrix& m, const char* what) {
  if (!m.is_square()) throw DimensionError(std::string(what) + ": matrix must be square, got " + m.shape());
}

void require_symmetric(const Matrix& m, const char* what) {
  require_square(m, what);
  if (!is_symmetric(m)) throw DimensionError(std::string(what) + ": matrix is not symmetric");
}

}  // namespace

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (!m.is_square()) return false;
  const double tol = rel_tol * std::max(1.0, m.max_abs());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol) return false;
  return true;
}

Matrix solve(const Matrix& a, const Matrix& b) {
  require_square(a, "solve");
  if (b.rows() != a.rows()) throw DimensionError("solve: rhs has " + b.shape() + " for " + a.shape());
  Matrix lhs = a;
  Matrix rhs = b;
  if (!eliminate(lhs, rhs, 1e-13)) throw NumericalError("singular linear system");
  return rhs;
}

Matrix solve_lyapunov(const Matrix& a, const Matrix& r) {
  require_square(a, "solve_lyapunov");
  require_symmetric(r, "solve_lyapunov");
  if (r.rows() != a.rows()) throw DimensionError("solve_lyapunov: R is " + r.shape() + ", A is " + a.shape());
  const std::size_t n = a.rows();
  const Matrix at = a.transpose();
  const Matrix eye = Matrix::identity(n);
  // Column-stacking vec: vec(A'P) = (I (x) A') vec(P), vec(PA) = (A' (x) I) vec(P).
  Matrix kronsum = kron(eye, at) + kron(at, eye);
  Matrix rhs(n * n, 1);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) rhs(j * n + i, 0) = -r(i, j);
  if (!eliminate(kronsum, rhs, 1e-12)) throw NumericalError("not Hurwitz / solve failed");
  Matrix p(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) p(i, j) = rhs(j * n + i, 0);
  Matrix sym = p + p.transpose();
  sym *= 0.5;
  return sym;
}

bool hurwitz_check(const Matrix& a) {
  require_square(a, "hurwitz_check");
  Matrix p;
  try {
    p = solve_lyapunov(a, Matrix::identity(a.rows()));
  } catch (const NumericalError&) {
    return false;
  }
  return is_positive_definite(p);
}

std::vector<double> sym_eigs(const Matrix& m) {
  require_symmetric(m, "sym_eigs");
  const std::size_t n = m.rows();
  Matrix a = m;
  // Start from the exactly symmetric part.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (m(i, j) + m(j, i));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
  };
  double total = 0.0;
  for (double v : a.entries()) total += v * v;
  total = std::sqrt(total);

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_norm() <= 1e-15 * total) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

bool is_positive_definite(const Matrix& m) {
  const auto eig = sym_eigs(m);
  return !eig.empty() && eig.front() > 0.0;
}

ComplexVector complex_solve(const ComplexMatrix& a, const ComplexVector& b) {
  if (!a.is_square()) throw DimensionError("complex_solve: matrix must be square, got " + a.shape());
  if (b.size() != a.rows()) throw DimensionError("complex_solve: rhs length mismatch");
  for (const auto& v : b)
    if (!detail::is_finite(v)) throw ConfigError("complex_solve: rhs must be finite");
  ComplexMatrix lhs = a;
  ComplexMatrix rhs(b.size(), 1, ComplexVector(b.begin(), b.end()));
  if (!eliminate(lhs, rhs, 1e-14)) throw NearPoleError();
  auto x = rhs.entries();
  return ComplexVector(x.begin(), x.end());
}

Matrix pseudo_left_inverse(const Matrix& b) {
  if (b.rows() < b.cols()) throw NumericalError("control matrix not full column rank");
  const Matrix bt = b.transpose();
  const Matrix gram = bt * b;
  const auto eig = sym_eigs(gram);
  if (eig.empty() || eig.front() <= 1e-12 * std::max(eig.back(), 1e-300)) {
    throw NumericalError("control matrix not full column rank");
  }
  return solve(gram, bt);
}

}  // namespace symbiotic::linalg
