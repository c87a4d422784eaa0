#pragma once

#include <cstddef>
#include <vector>

#include "symbiotic/matrix.hpp"

namespace symbiotic {

/// Continuous-time state-space quadruple
///   dz/dt = A z + B w,   y = C z + D w.
struct LtiSystem {
  Matrix a;
  Matrix b;
  Matrix c;
  Matrix d;

  LtiSystem() = default;
  LtiSystem(Matrix a_, Matrix b_, Matrix c_, Matrix d_);

  std::size_t state_dim() const { return a.rows(); }
  std::size_t in_dim() const { return b.cols(); }
  std::size_t out_dim() const { return c.rows(); }
  bool is_siso() const { return in_dim() == 1 && out_dim() == 1; }

  /// Throws DimensionError unless A: q x q, B: q x in, C: out x q, D: out x in.
  void validate() const;
};

/// Static gain y = D w with no states.
LtiSystem static_gain(const Matrix& d);

/// Cascade: the output of `first` drives `second`. States are stacked
/// [z_first; z_second].
LtiSystem series(const LtiSystem& first, const LtiSystem& second);

/// Unity negative feedback around a square system: w = v - y.
/// Requires (I + D) invertible.
LtiSystem negative_feedback(const LtiSystem& sys);

/// Keep a subset of inputs (columns of B and D) in the given order.
LtiSystem select_inputs(const LtiSystem& sys, const std::vector<std::size_t>& inputs);

/// Scale every output by k.
LtiSystem scale_output(const LtiSystem& sys, double k);

/// Controllable-canonical realization of num(s)/den(s). Coefficients are in
/// descending powers of s; deg(num) <= deg(den) and den[0] != 0.
LtiSystem from_transfer_function(std::vector<double> num, std::vector<double> den);

/// Transfer matrix C (sI - A)^-1 B + D at complex s via complex_solve.
ComplexMatrix evaluate(const LtiSystem& sys, Complex s);

/// SISO shortcut of evaluate().
Complex evaluate_siso(const LtiSystem& sys, Complex s);

}  // namespace symbiotic
