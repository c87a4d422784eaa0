#pragma once

// Independent reference models used by the tests. None of these share code
// with the realizations under test beyond the matrix type and the integrator.

#include <cstddef>

#include "symbiotic/lti.hpp"
#include "symbiotic/signal.hpp"
#include "symbiotic/simulator.hpp"
#include "symbiotic/system_model.hpp"

namespace oracle {

using namespace symbiotic;

/// Double-integrator plant with K1 = [0.16 0.57], K2 = 0.16, R = I and the
/// learning parameters beta1 = 0.1, beta2 = 3, beta3 = 1.
ControlDesign example_design(double alpha = 10.0, FixedGainVariant variant = FixedGainVariant::New, double eps1 = 3.0,
                           double eps2 = 10.0, double mu1 = 0.0, double mu2 = 0.0);

/// Closed loop written with u_f as a state, driven by the true disturbance:
///   u_f' = -alpha (u_f - (d_hat - d)) - alpha eps1 (u_f - u_fl).
/// States [x; x_n; u_f; u_fl (New only); d_hat], inputs [r; d], output u_f.
struct AnalysisForm {
  LtiSystem system;
  Vector initial_state;
};
AnalysisForm analysis_form(const ControlDesign& design);

/// Return ratio at the plant input built from the control law with the
/// x-integrator collapsed to eta = B_i xi1, so it has no unobservable modes.
/// States [x; eta; xi2 (New with mu2 > 0); u_fl (New only); d_hat]; input is
/// the plant input, output is -u.
LtiSystem reduced_loop(const ControlDesign& design);

/// Pade (order, order) approximant of exp(-s tau).
LtiSystem pade_delay(double tau, std::size_t order);

/// Largest real part of the eigenvalues, from a dense QR iteration.
double spectral_abscissa(const Matrix& a);

/// Eigenvalue test of the unity negative-feedback loop around loop * pade(tau).
bool delayed_loop_stable(const LtiSystem& loop, double tau, std::size_t order = 5);

/// [r(t); d(t)] for simulate_lti.
InputFunction exogenous(const SignalSpec& r, std::size_t p, const SignalSpec& d, std::size_t m);

}  // namespace oracle
