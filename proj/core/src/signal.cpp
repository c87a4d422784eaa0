#include "symbiotic/signal.hpp"

#include <cmath>
#include <type_traits>

namespace symbiotic {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ConfigError(std::string("signal field '") + what + "' must be finite");
}

// Closed-form response of the lag to the square wave. With half-period h and
// q = exp(-pole h), the lag value at the k-th switching instant is
// a (-1)^k c (1 - (-q)^k), c = -(1 - q) / (1 + q).
double filtered_square(const FilteredSquareWave& w, double t) {
  if (t <= 0.0) return 0.0;
  const double h = 0.5 * w.period;
  const double kf = std::floor(t / h);
  const double tau = t - kf * h;
  const double q = std::exp(-w.pole * h);
  const bool odd = std::fmod(kf, 2.0) != 0.0;
  const double sign = odd ? -1.0 : 1.0;
  const double neg_q_pow_k = (odd ? -1.0 : 1.0) * std::pow(q, kf);
  const double c = -(1.0 - q) / (1.0 + q);
  const double level = sign * w.amplitude;
  const double s_k = level * c * (1.0 - neg_q_pow_k);
  return level + (s_k - level) * std::exp(-w.pole * tau);
}

}  // namespace

void validate_signal(const SignalSpec& spec) {
  std::visit(overloaded{
                 [](const ZeroSignal&) {},
                 [](const ConstantSignal& c) { require_finite(c.level, "level"); },
                 [](const FilteredSquareWave& w) {
                   require_finite(w.amplitude, "amplitude");
                   if (!(std::isfinite(w.period) && w.period > 0.0)) throw ConfigError("square wave period must be > 0");
                   if (!(std::isfinite(w.pole) && w.pole > 0.0)) throw ConfigError("square wave filter pole must be > 0");
                 },
                 [](const SinusoidSignal& s) {
                   require_finite(s.offset, "offset");
                   require_finite(s.amplitude, "amplitude");
                   require_finite(s.omega, "omega");
                   require_finite(s.phase, "phase");
                 },
             },
             spec);
}

double signal_value(const SignalSpec& spec, double t) {
  return std::visit(overloaded{
                        [](const ZeroSignal&) { return 0.0; },
                        [](const ConstantSignal& c) { return c.level; },
                        [t](const FilteredSquareWave& w) { return filtered_square(w, t); },
                        [t](const SinusoidSignal& s) { return s.offset + s.amplitude * std::sin(s.omega * t + s.phase); },
                    },
                    spec);
}

Vector eval_signal(const SignalSpec& spec, double t, std::size_t dim) { return Vector(dim, signal_value(spec, t)); }

double signal_bound(const SignalSpec& spec) {
  return std::visit(overloaded{
                        [](const ZeroSignal&) { return 0.0; },
                        [](const ConstantSignal& c) { return std::abs(c.level); },
                        [](const FilteredSquareWave& w) { return std::abs(w.amplitude); },
                        [](const SinusoidSignal& s) { return std::abs(s.offset) + std::abs(s.amplitude); },
                    },
                    spec);
}

double signal_rate_bound(const SignalSpec& spec) {
  return std::visit(overloaded{
                        [](const ZeroSignal&) { return 0.0; },
                        [](const ConstantSignal&) { return 0.0; },
                        // |s - sq| <= 2 |amplitude| right after a switch.
                        [](const FilteredSquareWave& w) { return 2.0 * w.pole * std::abs(w.amplitude); },
                        [](const SinusoidSignal& s) { return std::abs(s.amplitude * s.omega); },
                    },
                    spec);
}

SignalSpec scaled(const SignalSpec& spec, double k) {
  return std::visit(overloaded{
                        [](const ZeroSignal& z) -> SignalSpec { return z; },
                        [k](ConstantSignal c) -> SignalSpec {
                          c.level *= k;
                          return c;
                        },
                        [k](FilteredSquareWave w) -> SignalSpec {
                          w.amplitude *= k;
                          return w;
                        },
                        [k](SinusoidSignal s) -> SignalSpec {
                          s.offset *= k;
                          s.amplitude *= k;
                          return s;
                        },
                    },
                    spec);
}

}  // namespace symbiotic
