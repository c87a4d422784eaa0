#pragma once

#include <cstddef>
#include <variant>

#include "symbiotic/matrix.hpp"

namespace symbiotic {

/// Scalar signal profiles; a profile is broadcast to every channel of the
/// vector it drives (r or d).
struct ZeroSignal {};

struct ConstantSignal {
  double level = 0.0;
};

/// Square wave of +-amplitude (positive first half-period) passed through the
/// first-order lag s' = -pole (s - sq(t)), s(0) = 0. Evaluated in closed form.
struct FilteredSquareWave {
  double amplitude = 1.0;
  double period = 40.0;  // s
  double pole = 0.5;     // 1/s
};

/// offset + amplitude * sin(omega t + phase)
struct SinusoidSignal {
  double offset = 0.0;
  double amplitude = 1.0;
  double omega = 1.0;  // rad/s
  double phase = 0.0;  // rad
};

using SignalSpec = std::variant<ZeroSignal, ConstantSignal, FilteredSquareWave, SinusoidSignal>;

/// Throws ConfigError on period <= 0 or pole <= 0 (and non-finite fields).
void validate_signal(const SignalSpec& spec);

/// Scalar value of the profile at time t >= 0.
double signal_value(const SignalSpec& spec, double t);

/// Profile broadcast to a `dim`-vector.
Vector eval_signal(const SignalSpec& spec, double t, std::size_t dim);

/// sup_t |value| and sup_t |d/dt value| of the scalar profile. Multiply by
/// sqrt(dim) for the Euclidean norm of the broadcast vector.
double signal_bound(const SignalSpec& spec);
double signal_rate_bound(const SignalSpec& spec);

/// Same profile with its amplitude-like fields multiplied by k.
SignalSpec scaled(const SignalSpec& spec, double k);

}  // namespace symbiotic
