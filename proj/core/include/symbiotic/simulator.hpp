#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "symbiotic/lti.hpp"
#include "symbiotic/signal.hpp"
#include "symbiotic/system_model.hpp"

namespace symbiotic {

inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kDefaultFinalTime = 100.0;

/// Row-per-sample storage of a vector-valued signal.
struct Series {
  std::size_t width = 0;
  std::vector<double> data;

  std::size_t size() const { return width == 0 ? 0 : data.size() / width; }
  std::span<const double> at(std::size_t k) const {
    return std::span<const double>(data).subspan(k * width, width);
  }
  double operator()(std::size_t k, std::size_t i) const { return data[k * width + i]; }
};

struct Trajectory {
  std::vector<double> t;
  Series x, x_n, e, u, u_n, u_f, u_a, u_fl, d_hat, d, r;
  std::vector<std::string> warnings;

  std::size_t size() const { return t.size(); }
  double dt() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }
};

/// Uniform-grid RK4 history of an LTI system's outputs.
struct LtiRun {
  std::vector<double> t;
  Series y;
  Series z;  // states, only filled when requested
  std::vector<std::string> warnings;
};

/// Writes w(t) into the span (length in_dim).
using InputFunction = std::function<void(double, std::span<double>)>;

/// Classic fourth-order Runge-Kutta on dz/dt = A z + B w(t), with w evaluated
/// exactly at the stage times. Grid: t_k = k dt, k = 0..round(t_final / dt).
/// Throws NumericalError("divergence at t=...") on a non-finite state.
LtiRun simulate_lti(const LtiSystem& sys, std::span<const double> z0, const InputFunction& input, double t_final,
                    double dt, bool keep_states = false);

/// Simulates the closed loop under reference r(t) and disturbance d(t).
Trajectory integrate(const ClosedLoopModel& model, const SignalSpec& r, const SignalSpec& d,
                     double t_final = kDefaultFinalTime, double dt = kDefaultStep);

/// p = integral_0^t_end e'e dtau (trapezoidal; the last partial interval is
/// interpolated linearly). Throws ConfigError if t_end is outside the grid.
double quadratic_cost(const Trajectory& traj, double t_end);

/// Column names `t,x1..xn,xn1..xnn,e1..en,u,un,uf,ua,ufl,dhat,d` (multi-input
/// channels get a 1-based index suffix).
std::vector<std::string> trajectory_csv_header(const Trajectory& traj);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace symbiotic
