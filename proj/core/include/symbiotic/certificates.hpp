#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "symbiotic/matrix.hpp"
#include "symbiotic/simulator.hpp"
#include "symbiotic/system_model.hpp"

namespace symbiotic {

/// Constants of the composite Lyapunov argument.
///   beta4     weight of u_fl in V; derived as alpha beta2 eps1 / eps2
///   d1, d2    free Young's-inequality constants
///   dbar      bound on ||d(t)||, ddotbar bound on ||d'(t)||
struct CertificateParams {
  double beta4 = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double dbar = 0.0;
  double ddotbar = 0.0;

  /// beta4 from the config; d1 = min(1, mu1), d2 = mu1 / 2 (zero when mu1 = 0).
  static CertificateParams from_config(const SymbioticConfig& cfg, double dbar, double ddotbar);
};

/// M1 = blockdiag(beta1 P, beta2 I)
/// M2 = [[2 a b2 e1 I, -2 b4 e2 I], [-2 b4 e2 I, (2 b4 e2 + 2 b4 mu2) I]]
/// M3 = [[beta1 R, -beta1 P B], [-beta1 B'P, (2 beta2 alpha + lambda_min(M2)) I]]
/// M4 = [[beta1 R, -beta1 P B], [-beta1 B'P, 2 beta2 alpha I]]
struct CertificateMatrices {
  Matrix m1, m2, m3, m4;
  bool m1_pd = false, m2_pd = false, m3_pd = false, m4_pd = false;
};

CertificateMatrices build_certificate_matrices(const ControlDesign& design, double beta4);
/// Same from raw ingredients; cfg is not validated, so limiting cases such as
/// beta1 = 0 can be inspected.
CertificateMatrices build_certificate_matrices(const SymbioticConfig& cfg, const Matrix& p, const Matrix& b,
                                               double beta4);
inline CertificateMatrices build_certificate_matrices(const ControlDesign& design) {
  return build_certificate_matrices(design, design.config().beta4());
}

/// l1 = lambda_min(M3) / lambda_max(M1), l2 = 2 mu1 - mu1 d1 - d2,
/// l3 = lambda_min(M2) / beta4, b* = min(l1, l2, l3),
/// l* = beta3 mu1 dbar^2 / d1 + beta3 ddotbar^2 / d2.
struct CertificateConstants {
  double l1 = 0.0, l2 = 0.0, l3 = 0.0;
  double bstar = 0.0;
  double lstar = 0.0;
};

/// Throws NumericalError("Young constants infeasible for given mu1") when
/// l2 <= 0, and NumericalError when M1, M2 or M3 is not positive definite.
CertificateConstants certificate_constants(const CertificateParams& params, const SymbioticConfig& cfg,
                                           const CertificateMatrices& mats);

/// Grid search over (d1, d2) in (0, 2 mu1)^2 minimizing the ultimate level
/// l*/b* subject to l2 > 0. Returns nullopt when mu1 = 0 or M2/M3 are not PD.
std::optional<CertificateParams> tighten_young_constants(const CertificateParams& base, const SymbioticConfig& cfg,
                                                         const CertificateMatrices& mats, std::size_t steps = 40);

/// V = delta' M1 delta + beta3 dtilde' dtilde + beta4 u_fl' u_fl with
/// delta = [e; u_f] and dtilde = d_hat - d (ground-truth d from the trajectory).
std::vector<double> evaluate_V(const Trajectory& traj, const SymbioticConfig& cfg, const Matrix& p, double beta4);
inline std::vector<double> evaluate_V(const Trajectory& traj, const ControlDesign& design) {
  return evaluate_V(traj, design.config(), design.p(), design.config().beta4());
}

enum class BoundStatus { Holds, Violated, Infeasible };
std::string_view to_string(BoundStatus s);

struct BoundCheck {
  BoundStatus status = BoundStatus::Infeasible;
  double max_violation = 0.0;    // max of V - envelope (<= 0 when it holds)
  std::vector<double> envelope;  // V0 exp(-b* t) + l*/b*
};

/// V(t) <= V0 exp(-b* t) + l*/b* + 1e-8 at every sample.
BoundCheck check_theorem1_bound(std::span<const double> t, std::span<const double> v,
                                const CertificateConstants& constants);

/// V_{k+1} <= V_k + slack for all k.
bool is_nonincreasing(std::span<const double> v, double slack);

/// Max over interior samples of |central-difference V' - (-delta'M4 delta -
/// 2 alpha beta2 eps1 ||u_fl - u_f||^2)|, valid without leakage and with
/// constant d.
double vdot_identity_residual(const Trajectory& traj, const std::vector<double>& v, const ControlDesign& design,
                              const CertificateMatrices& mats);

/// Which stability statement applies to a configuration.
enum class CertificateRegime { Theorem1, Theorem2, None };
std::string_view to_string(CertificateRegime r);

struct CertificateReport {
  CertificateMatrices matrices;
  CertificateParams params;
  std::optional<CertificateConstants> constants;  // set when the bound is feasible
  CertificateRegime regime = CertificateRegime::None;
  std::string diagnosis;
  std::vector<double> t;
  std::vector<double> v;
  BoundCheck bound;
};

/// Overrides for the Young's-inequality constants. `tighten` runs
/// tighten_young_constants starting from the (possibly overridden) values.
struct YoungOptions {
  std::optional<double> d1;
  std::optional<double> d2;
  bool tighten = false;
};

/// Builds matrices and constants and routes to the applicable regime:
/// Theorem1 when the constants are feasible, Theorem2 when mu1 = mu2 = 0 with
/// a constant disturbance and M4 PD, None otherwise.
CertificateReport assess_certificates(const ControlDesign& design, const SignalSpec& disturbance,
                                      const YoungOptions& young = {});

/// Adds the V(t) series and the envelope check to an assessment.
void attach_trajectory(CertificateReport& report, const Trajectory& traj, const ControlDesign& design);

/// CSV `t,V,envelope` (envelope is "inf" when no bound applies).
void write_certificate_csv(std::ostream& out, const CertificateReport& report);
/// Flat `key = value` summary block.
void write_certificate_summary(std::ostream& out, const CertificateReport& report);

}  // namespace symbiotic
