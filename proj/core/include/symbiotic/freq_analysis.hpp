#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "symbiotic/lti.hpp"

namespace symbiotic {

/// Sampled L(jw) on a log-spaced grid. Samples where the evaluation hit a
/// pole are kept with valid[k] == false and ignored by the crossover search.
struct FrequencyResponse {
  std::vector<double> omega;     // rad/s, strictly increasing
  std::vector<Complex> value;
  std::vector<double> magnitude;
  std::vector<double> phase;     // rad, unwrapped by branch continuation
  std::vector<bool> valid;

  std::size_t size() const { return omega.size(); }
};

struct FrequencyGrid {
  double omega_lo = 1e-3;
  double omega_hi = 1e4;
  std::size_t points = 2000;
};

FrequencyResponse frequency_response(const LtiSystem& sys, double omega_lo, double omega_hi, std::size_t points);
inline FrequencyResponse frequency_response(const LtiSystem& sys, const FrequencyGrid& grid = {}) {
  return frequency_response(sys, grid.omega_lo, grid.omega_hi, grid.points);
}

struct GainCrossing {
  double omega;         // |L| = 1
  double phase_margin;  // rad, wrapped to (-pi, pi]
  double delay_margin;  // s; 0 when the phase margin is not positive
};

struct PhaseCrossing {
  double omega;        // arg L = -pi (mod 2 pi)
  double gain_margin;  // 1 / |L|
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Classical margins of the negative-feedback loop with return ratio L.
/// The minimum margin of each kind is authoritative; all crossings are kept
/// for diagnostics.
struct MarginReport {
  double gain_margin = kInfinity;  // linear
  std::optional<double> gm_freq;
  std::optional<double> phase_margin;  // rad
  std::optional<double> pm_freq;
  double delay_margin = kInfinity;  // s
  std::vector<GainCrossing> gain_crossings;
  std::vector<PhaseCrossing> phase_crossings;
};

/// Brackets crossovers on the sampled response and bisects each one on the
/// exact system `refine` (gain: |log|L|| <= 1e-10; phase: 1e-12 rad).
/// Throws NumericalError if a bracket does not converge in 200 iterations.
MarginReport compute_margins(const FrequencyResponse& resp, const LtiSystem& refine);

/// frequency_response + compute_margins on the same system.
MarginReport loop_margins(const LtiSystem& loop, const FrequencyGrid& grid = {});

/// CSV with columns `omega,re,im,mag,phase_rad`; samples at poles are omitted.
void write_frequency_response_csv(std::ostream& out, const FrequencyResponse& resp);

}  // namespace symbiotic
