#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "symbiotic/lti.hpp"
#include "symbiotic/matrix.hpp"

namespace symbiotic {

/// dx/dt = A x + B (u + d), x(0) = x0. B must have full column rank.
struct PlantModel {
  Matrix a;
  Matrix b;
  Vector x0;

  std::size_t n() const { return a.rows(); }
  std::size_t m() const { return b.cols(); }
};

/// Nominal control u_n = -K1 x + K2 r.
struct NominalGains {
  Matrix k1;  // m x n
  Matrix k2;  // m x p

  std::size_t p() const { return k2.cols(); }
};

enum class FixedGainVariant {
  Standard,  // integral fixed-gain law
  New,       // low-pass-filter coupled fixed-gain law
};

std::string_view to_string(FixedGainVariant v);
/// Accepts "SFG"/"NFG" (also "standard"/"new").
FixedGainVariant parse_variant(std::string_view s);

struct SymbioticConfig {
  double alpha = 1.0;  // fixed-gain parameter
  double eps1 = 0.0;   // auxiliary fixed gain (filter coupling); 0 reduces NFG to SFG
  double eps2 = 1.0;   // low-pass filter parameter
  double beta1 = 1.0;
  double beta2 = 1.0;
  double beta3 = 1.0;
  double mu1 = 0.0;  // adaptive-law leakage
  double mu2 = 0.0;  // filter leakage
  Matrix r_weight;   // Lyapunov weight R (n x n, SPD)
  FixedGainVariant variant = FixedGainVariant::New;

  /// tau = 1 / (eps2 + mu2)
  double filter_time_constant() const { return 1.0 / (eps2 + mu2); }
  /// K = eps2 / (eps2 + mu2); unity without leakage.
  double filter_gain() const { return eps2 / (eps2 + mu2); }
  /// beta4 = alpha * beta2 * eps1 / eps2
  double beta4() const { return alpha * beta2 * eps1 / eps2; }

  /// Throws ConfigError on out-of-domain scalars or a non-SPD R of the wrong size.
  void validate(std::size_t n) const;
};

/// Validated plant/gains/config together with the derived quantities
/// A_n = A - B K1, B_n = B K2, B_i = (B'B)^-1 B' and P from A_n'P + P A_n + R = 0.
class ControlDesign {
 public:
  ControlDesign(PlantModel plant, NominalGains gains, SymbioticConfig cfg);

  const PlantModel& plant() const { return plant_; }
  const NominalGains& gains() const { return gains_; }
  const SymbioticConfig& config() const { return cfg_; }

  const Matrix& a_n() const { return a_n_; }
  const Matrix& b_n() const { return b_n_; }
  const Matrix& b_i() const { return b_i_; }
  const Matrix& p() const { return p_; }

  std::size_t n() const { return plant_.n(); }
  std::size_t m() const { return plant_.m(); }
  std::size_t p_dim() const { return gains_.p(); }

  /// Copy with a modified config (P is reused when R is unchanged).
  ControlDesign with_config(SymbioticConfig cfg) const;

 private:
  PlantModel plant_;
  NominalGains gains_;
  SymbioticConfig cfg_;
  Matrix a_n_;
  Matrix b_n_;
  Matrix b_i_;
  Matrix p_;
};

/// Controller as an LTI map from [x; r] to u, together with its initial
/// state. The x0 offset of the fixed-gain law is carried by the initial value
/// of the xi1 integrator (xi1(0) = x0), so the realization itself is linear.
///
/// State ordering: [x_n (n); xi1 (n); xi2 (m); u_fl (m); d_hat (m)], with xi2
/// and u_fl present only for the New variant.
struct ControllerRealization {
  LtiSystem system;
  Vector initial_state;
};

ControllerRealization realize_controller(const ControlDesign& design);

/// Output taps of the closed loop, in the order they are stacked in C/D.
enum class Tap : std::size_t { X = 0, Xn, E, Un, Uf, Ua, U, Ufl, Dhat, Count };

/// Closed loop over z = [x; x_n; xi1; xi2; u_fl; d_hat] with inputs [r; d].
/// For the Standard variant xi2 and u_fl are absent and the u_fl tap reads 0.
struct ClosedLoopModel {
  LtiSystem system;
  Vector initial_state;
  FixedGainVariant variant;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t p = 0;
  std::array<std::size_t, static_cast<std::size_t>(Tap::Count)> tap_offset{};
  std::array<std::size_t, static_cast<std::size_t>(Tap::Count)> tap_width{};

  std::size_t offset(Tap t) const { return tap_offset[static_cast<std::size_t>(t)]; }
  std::size_t width(Tap t) const { return tap_width[static_cast<std::size_t>(t)]; }
};

ClosedLoopModel assemble_closed_loop(const ControlDesign& design);

/// Loop transfer function broken at the plant input (r = 0):
///   L(s) = -controller(x -> u) o plant(u -> x),
/// normalized so that the nominal-only loop is K1 (sI - A)^-1 B.
/// x_n is dropped (e = x). States: [x; xi1; xi2; u_fl; d_hat].
/// Throws DimensionError("margin analysis requires single-input loop") if m != 1.
LtiSystem open_loop_at_plant_input(const ControlDesign& design);

/// Same composition but keeping the x_n state of the full controller.
/// Exposed for checking that x_n has no influence on L(s).
LtiSystem open_loop_with_reference_model(const ControlDesign& design);

}  // namespace symbiotic
