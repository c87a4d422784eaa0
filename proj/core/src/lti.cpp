#include "symbiotic/lti.hpp"

#include <string>

#include "symbiotic/linalg.hpp"

namespace symbiotic {

LtiSystem::LtiSystem(Matrix a_, Matrix b_, Matrix c_, Matrix d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
  validate();
}

void LtiSystem::validate() const {
  const std::size_t q = a.rows();
  if (a.cols() != q) throw DimensionError("LtiSystem: A must be square, got " + a.shape());
  if (b.rows() != q) throw DimensionError("LtiSystem: B is " + b.shape() + " for A " + a.shape());
  if (c.cols() != q) throw DimensionError("LtiSystem: C is " + c.shape() + " for A " + a.shape());
  if (d.rows() != c.rows() || d.cols() != b.cols()) {
    throw DimensionError("LtiSystem: D is " + d.shape() + ", expected " + std::to_string(c.rows()) + "x" +
                         std::to_string(b.cols()));
  }
}

LtiSystem static_gain(const Matrix& d) {
  return LtiSystem(Matrix(0, 0), Matrix(0, d.cols()), Matrix(d.rows(), 0), d);
}

LtiSystem series(const LtiSystem& first, const LtiSystem& second) {
  if (first.out_dim() != second.in_dim()) {
    throw DimensionError("series: " + std::to_string(first.out_dim()) + " outputs feed " +
                         std::to_string(second.in_dim()) + " inputs");
  }
  const std::size_t n1 = first.state_dim();
  const std::size_t n2 = second.state_dim();
  Matrix a(n1 + n2, n1 + n2);
  a.set_block(0, 0, first.a);
  a.set_block(n1, 0, second.b * first.c);
  a.set_block(n1, n1, second.a);
  Matrix b(n1 + n2, first.in_dim());
  b.set_block(0, 0, first.b);
  b.set_block(n1, 0, second.b * first.d);
  Matrix c(second.out_dim(), n1 + n2);
  c.set_block(0, 0, second.d * first.c);
  c.set_block(0, n1, second.c);
  return LtiSystem(std::move(a), std::move(b), std::move(c), second.d * first.d);
}

LtiSystem negative_feedback(const LtiSystem& sys) {
  if (sys.in_dim() != sys.out_dim()) throw DimensionError("negative_feedback: system must be square");
  const std::size_t m = sys.in_dim();
  // w = v - y, y = Cz + Dw  =>  y = (I + D)^-1 (Cz + Dv)
  const Matrix s = linalg::solve(Matrix::identity(m) + sys.d, Matrix::identity(m));
  const Matrix c = s * sys.c;
  const Matrix d = s * sys.d;
  const Matrix eye = Matrix::identity(m);
  return LtiSystem(sys.a - sys.b * c, sys.b * (eye - d), c, d);
}

LtiSystem select_inputs(const LtiSystem& sys, const std::vector<std::size_t>& inputs) {
  Matrix b(sys.state_dim(), inputs.size());
  Matrix d(sys.out_dim(), inputs.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (inputs[k] >= sys.in_dim()) throw DimensionError("select_inputs: index out of range");
    for (std::size_t i = 0; i < sys.state_dim(); ++i) b(i, k) = sys.b(i, inputs[k]);
    for (std::size_t i = 0; i < sys.out_dim(); ++i) d(i, k) = sys.d(i, inputs[k]);
  }
  return LtiSystem(sys.a, std::move(b), sys.c, std::move(d));
}

LtiSystem scale_output(const LtiSystem& sys, double k) { return LtiSystem(sys.a, sys.b, sys.c * k, sys.d * k); }

LtiSystem from_transfer_function(std::vector<double> num, std::vector<double> den) {
  if (den.empty() || den.front() == 0.0) throw ConfigError("transfer function: leading denominator coefficient is zero");
  if (num.size() > den.size()) throw ConfigError("transfer function must be proper");
  const double lead = den.front();
  for (auto& v : den) v /= lead;
  for (auto& v : num) v /= lead;
  const std::size_t n = den.size() - 1;
  num.insert(num.begin(), den.size() - num.size(), 0.0);
  const double dterm = num.front();
  // Strictly proper remainder: num - dterm * den.
  Matrix a(n, n), b(n, 1), c(1, n), d(1, 1);
  d(0, 0) = dterm;
  for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = 1.0;
  if (n > 0) {
    for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = -den[n - j];
    b(n - 1, 0) = 1.0;
    for (std::size_t j = 0; j < n; ++j) c(0, j) = num[n - j] - dterm * den[n - j];
  }
  return LtiSystem(std::move(a), std::move(b), std::move(c), std::move(d));
}

ComplexMatrix evaluate(const LtiSystem& sys, Complex s) {
  const std::size_t q = sys.state_dim();
  ComplexMatrix lhs(q, q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j) lhs(i, j) = (i == j ? s : Complex{}) - sys.a(i, j);
  ComplexMatrix out = to_complex(sys.d);
  for (std::size_t k = 0; k < sys.in_dim(); ++k) {
    ComplexVector rhs(q);
    for (std::size_t i = 0; i < q; ++i) rhs[i] = sys.b(i, k);
    const ComplexVector x = q == 0 ? ComplexVector{} : linalg::complex_solve(lhs, rhs);
    for (std::size_t r = 0; r < sys.out_dim(); ++r) {
      Complex acc{};
      for (std::size_t i = 0; i < q; ++i) acc += sys.c(r, i) * x[i];
      out(r, k) += acc;
    }
  }
  return out;
}

Complex evaluate_siso(const LtiSystem& sys, Complex s) {
  if (!sys.is_siso()) throw DimensionError("evaluate_siso: system is not single-input single-output");
  return evaluate(sys, s)(0, 0);
}

}  // namespace symbiotic
