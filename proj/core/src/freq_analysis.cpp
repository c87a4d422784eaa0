#include "symbiotic/freq_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "symbiotic/csv.hpp"
#include "symbiotic/errors.hpp"

namespace symbiotic {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxBisections = 200;

double nearest_branch(double raw, double reference) {
  return raw + kTwoPi * std::round((reference - raw) / kTwoPi);
}

double wrap_pi(double a) {
  double w = std::remainder(a, kTwoPi);  // [-pi, pi]
  if (w <= -kPi) w += kTwoPi;
  return w;
}

Complex eval_at(const LtiSystem& sys, double omega) { return evaluate_siso(sys, Complex(0.0, omega)); }

// Bisection in log(omega) on f, which changes sign over [lo, hi].
template <typename F>
double bisect(F&& f, double lo, double hi, double tol, const char* what) {
  double flo = f(lo);
  double a = std::log(lo);
  double b = std::log(hi);
  for (int it = 0; it < kMaxBisections; ++it) {
    const double mid = 0.5 * (a + b);
    const double w = std::exp(mid);
    const double fm = f(w);
    if (std::abs(fm) <= tol) return w;
    if ((fm < 0) == (flo < 0)) {
      a = mid;
      flo = fm;
    } else {
      b = mid;
    }
  }
  throw NumericalError(std::string("unresolvable ") + what + " crossover bracket near omega=" + std::to_string(lo));
}

}  // namespace

FrequencyResponse frequency_response(const LtiSystem& sys, double omega_lo, double omega_hi, std::size_t points) {
  if (!sys.is_siso()) throw DimensionError("frequency_response: system must be SISO");
  if (!(omega_lo > 0.0) || !(omega_hi > omega_lo) || !std::isfinite(omega_hi)) {
    throw ConfigError("frequency grid requires 0 < omega_lo < omega_hi");
  }
  if (points < 2) throw ConfigError("frequency grid needs at least 2 points");

  FrequencyResponse resp;
  resp.omega.resize(points);
  resp.value.resize(points);
  resp.magnitude.resize(points);
  resp.phase.resize(points);
  resp.valid.resize(points);
  const double llo = std::log(omega_lo);
  const double lhi = std::log(omega_hi);
  for (std::size_t k = 0; k < points; ++k) {
    resp.omega[k] = k + 1 == points ? omega_hi : std::exp(llo + (lhi - llo) * static_cast<double>(k) / static_cast<double>(points - 1));
  }
  // Samples are independent; only the unwrapping pass below is sequential.
  for (std::size_t k = 0; k < points; ++k) {
    try {
      resp.value[k] = eval_at(sys, resp.omega[k]);
      resp.valid[k] = detail::is_finite(resp.value[k]);
    } catch (const NearPoleError&) {
      resp.valid[k] = false;
    }
    resp.magnitude[k] = resp.valid[k] ? std::abs(resp.value[k]) : std::numeric_limits<double>::quiet_NaN();
  }
  bool have_ref = false;
  double ref = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    if (!resp.valid[k]) {
      resp.phase[k] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double raw = std::arg(resp.value[k]);
    ref = have_ref ? nearest_branch(raw, ref) : raw;
    have_ref = true;
    resp.phase[k] = ref;
  }
  return resp;
}

MarginReport compute_margins(const FrequencyResponse& resp, const LtiSystem& refine) {
  if (!refine.is_siso()) throw DimensionError("compute_margins: system must be SISO");
  MarginReport report;

  auto log_mag = [&](double w) { return std::log(std::abs(eval_at(refine, w))); };

  std::size_t prev = resp.size();
  for (std::size_t k = 0; k < resp.size(); ++k) {
    if (!resp.valid[k]) continue;
    if (prev == resp.size()) {
      prev = k;
      continue;
    }
    const std::size_t i = prev;
    prev = k;
    const double w0 = resp.omega[i];
    const double w1 = resp.omega[k];
    const double phi0 = resp.phase[i];
    const double phi1 = resp.phase[k];

    // Exact phase continued onto the grid's branch (linear in log omega).
    auto phase_at = [&](double w) {
      const double s = (std::log(w) - std::log(w0)) / (std::log(w1) - std::log(w0));
      return nearest_branch(std::arg(eval_at(refine, w)), phi0 + s * (phi1 - phi0));
    };

    // Gain crossover: sign change of log|L|, including an exact hit on the left sample.
    const double f0 = std::log(resp.magnitude[i]);
    const double f1 = std::log(resp.magnitude[k]);
    if (f0 == 0.0 || (f0 < 0.0) != (f1 < 0.0)) {
      if (!(f1 == 0.0 && f0 != 0.0)) {
        const double wc = f0 == 0.0 ? w0 : bisect(log_mag, w0, w1, 1e-10, "gain");
        const double pm = wrap_pi(kPi + phase_at(wc));
        report.gain_crossings.push_back({wc, pm, pm > 0.0 ? pm / wc : 0.0});
      }
    }

    // Phase crossovers: every odd multiple of pi in [min(phi), max(phi)).
    const double lo = std::min(phi0, phi1);
    const double hi = std::max(phi0, phi1);
    const double first = std::ceil((lo - kPi) / kTwoPi);
    for (double j = first; kPi + kTwoPi * j <= hi; j += 1.0) {
      const double target = kPi + kTwoPi * j;
      if (target == phi1 && phi0 != phi1) continue;  // picked up by the next interval
      auto g = [&](double w) { return phase_at(w) - target; };
      const double wp = phi0 == target ? w0 : bisect(g, w0, w1, 1e-12, "phase");
      report.phase_crossings.push_back({wp, 1.0 / std::abs(eval_at(refine, wp))});
    }
  }

  for (const auto& gc : report.gain_crossings) {
    if (!report.phase_margin || gc.phase_margin < *report.phase_margin) {
      report.phase_margin = gc.phase_margin;
      report.pm_freq = gc.omega;
    }
    report.delay_margin = std::min(report.delay_margin, gc.delay_margin);
  }
  for (const auto& pc : report.phase_crossings) {
    if (pc.gain_margin < report.gain_margin) {
      report.gain_margin = pc.gain_margin;
      report.gm_freq = pc.omega;
    }
  }
  return report;
}

MarginReport loop_margins(const LtiSystem& loop, const FrequencyGrid& grid) {
  return compute_margins(frequency_response(loop, grid), loop);
}

void write_frequency_response_csv(std::ostream& out, const FrequencyResponse& resp) {
  out << "omega,re,im,mag,phase_rad\n";
  for (std::size_t k = 0; k < resp.size(); ++k) {
    if (!resp.valid[k]) continue;
    out << csv::format(resp.omega[k]) << ',' << csv::format(resp.value[k].real()) << ','
        << csv::format(resp.value[k].imag()) << ',' << csv::format(resp.magnitude[k]) << ','
        << csv::format(resp.phase[k]) << '\n';
  }
}

}  // namespace symbiotic
