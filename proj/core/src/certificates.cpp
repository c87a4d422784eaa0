#include "symbiotic/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "symbiotic/csv.hpp"
#include "symbiotic/errors.hpp"
#include "symbiotic/linalg.hpp"

namespace symbiotic {

CertificateParams CertificateParams::from_config(const SymbioticConfig& cfg, double dbar, double ddotbar) {
  CertificateParams p;
  p.beta4 = cfg.beta4();
  p.d1 = std::min(1.0, cfg.mu1);
  p.d2 = 0.5 * cfg.mu1;
  p.dbar = dbar;
  p.ddotbar = ddotbar;
  return p;
}

CertificateMatrices build_certificate_matrices(const SymbioticConfig& cfg, const Matrix& p, const Matrix& b,
                                               double beta4) {
  const std::size_t n = p.rows();
  const std::size_t m = b.cols();
  if (!p.is_square() || b.rows() != n || cfg.r_weight.rows() != n || cfg.r_weight.cols() != n) {
    throw DimensionError("certificate matrices: P is " + p.shape() + ", B is " + b.shape() + ", R is " +
                         cfg.r_weight.shape());
  }
  const Matrix eye_m = Matrix::identity(m);
  const Matrix pb = p * b;

  CertificateMatrices out;
  out.m1 = block_diag(cfg.beta1 * p, cfg.beta2 * eye_m);

  out.m2 = Matrix(2 * m, 2 * m);
  out.m2.set_block(0, 0, 2.0 * cfg.alpha * cfg.beta2 * cfg.eps1 * eye_m);
  out.m2.set_block(0, m, -2.0 * beta4 * cfg.eps2 * eye_m);
  out.m2.set_block(m, 0, -2.0 * beta4 * cfg.eps2 * eye_m);
  out.m2.set_block(m, m, (2.0 * beta4 * cfg.eps2 + 2.0 * beta4 * cfg.mu2) * eye_m);
  const double lmin_m2 = linalg::sym_eigs(out.m2).front();

  auto coupled = [&](double corner) {
    Matrix mm(n + m, n + m);
    mm.set_block(0, 0, cfg.beta1 * cfg.r_weight);
    mm.set_block(0, n, -cfg.beta1 * pb);
    mm.set_block(n, 0, -cfg.beta1 * pb.transpose());
    mm.set_block(n, n, corner * eye_m);
    return mm;
  };
  out.m3 = coupled(2.0 * cfg.beta2 * cfg.alpha + lmin_m2);
  out.m4 = coupled(2.0 * cfg.beta2 * cfg.alpha);

  out.m1_pd = linalg::is_positive_definite(out.m1);
  out.m2_pd = linalg::is_positive_definite(out.m2);
  out.m3_pd = linalg::is_positive_definite(out.m3);
  out.m4_pd = linalg::is_positive_definite(out.m4);
  return out;
}

CertificateMatrices build_certificate_matrices(const ControlDesign& design, double beta4) {
  return build_certificate_matrices(design.config(), design.p(), design.plant().b, beta4);
}

CertificateConstants certificate_constants(const CertificateParams& params, const SymbioticConfig& cfg,
                                           const CertificateMatrices& mats) {
  if (!(params.beta4 > 0.0)) throw NumericalError("beta4 must be positive for the certificate");
  if (!mats.m1_pd || !mats.m2_pd || !mats.m3_pd) {
    throw NumericalError("certificate matrices M1, M2, M3 must be positive definite");
  }
  CertificateConstants c;
  c.l2 = 2.0 * cfg.mu1 - cfg.mu1 * params.d1 - params.d2;
  if (!(params.d1 > 0.0) || !(params.d2 > 0.0) || !(c.l2 > 0.0)) {
    throw NumericalError("Young constants infeasible for given mu1");
  }
  const auto e1 = linalg::sym_eigs(mats.m1);
  const auto e2 = linalg::sym_eigs(mats.m2);
  const auto e3 = linalg::sym_eigs(mats.m3);
  c.l1 = e3.front() / e1.back();
  c.l3 = e2.front() / params.beta4;
  c.bstar = std::min({c.l1, c.l2, c.l3});
  c.lstar = cfg.beta3 * cfg.mu1 * params.dbar * params.dbar / params.d1 +
            cfg.beta3 * params.ddotbar * params.ddotbar / params.d2;
  return c;
}

std::optional<CertificateParams> tighten_young_constants(const CertificateParams& base, const SymbioticConfig& cfg,
                                                         const CertificateMatrices& mats, std::size_t steps) {
  if (!(cfg.mu1 > 0.0) || steps == 0) return std::nullopt;
  std::optional<CertificateParams> best;
  double best_level = std::numeric_limits<double>::infinity();
  const double span = 2.0 * cfg.mu1;
  for (std::size_t i = 1; i <= steps; ++i) {
    for (std::size_t j = 1; j <= steps; ++j) {
      CertificateParams trial = base;
      trial.d1 = span * static_cast<double>(i) / static_cast<double>(steps + 1);
      trial.d2 = span * static_cast<double>(j) / static_cast<double>(steps + 1);
      if (!(2.0 * cfg.mu1 - cfg.mu1 * trial.d1 - trial.d2 > 0.0)) continue;
      try {
        const auto c = certificate_constants(trial, cfg, mats);
        const double level = c.lstar / c.bstar;
        if (level < best_level) {
          best_level = level;
          best = trial;
        }
      } catch (const NumericalError&) {
        return std::nullopt;
      }
    }
  }
  return best;
}

std::vector<double> evaluate_V(const Trajectory& traj, const SymbioticConfig& cfg, const Matrix& p, double beta4) {
  const std::size_t n = traj.e.width;
  const std::size_t m = traj.u_f.width;
  if (p.rows() != n || p.cols() != n) throw DimensionError("evaluate_V: P does not match the error dimension");
  std::vector<double> v(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto e = traj.e.at(k);
    const auto uf = traj.u_f.at(k);
    const auto ufl = traj.u_fl.at(k);
    double dtilde2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double dt = traj.d_hat(k, i) - traj.d(k, i);
      dtilde2 += dt * dt;
    }
    v[k] = cfg.beta1 * quadratic_form(p, e) + cfg.beta2 * dot(uf, uf) + cfg.beta3 * dtilde2 + beta4 * dot(ufl, ufl);
  }
  return v;
}

std::string_view to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::Holds:
      return "holds";
    case BoundStatus::Violated:
      return "violated";
    case BoundStatus::Infeasible:
      return "infeasible";
  }
  return "infeasible";
}

std::string_view to_string(CertificateRegime r) {
  switch (r) {
    case CertificateRegime::Theorem1:
      return "theorem1";
    case CertificateRegime::Theorem2:
      return "theorem2";
    case CertificateRegime::None:
      return "none";
  }
  return "none";
}

BoundCheck check_theorem1_bound(std::span<const double> t, std::span<const double> v,
                                const CertificateConstants& constants) {
  if (t.size() != v.size()) throw DimensionError("check_theorem1_bound: t and V lengths differ");
  BoundCheck check;
  if (!(constants.bstar > 0.0)) return check;
  check.envelope.resize(v.size());
  check.max_violation = -std::numeric_limits<double>::infinity();
  const double v0 = v.empty() ? 0.0 : v.front();
  const double level = constants.lstar / constants.bstar;
  for (std::size_t k = 0; k < v.size(); ++k) {
    check.envelope[k] = v0 * std::exp(-constants.bstar * (t[k] - t.front())) + level;
    check.max_violation = std::max(check.max_violation, v[k] - check.envelope[k]);
  }
  if (v.empty()) check.max_violation = 0.0;
  check.status = check.max_violation <= 1e-8 ? BoundStatus::Holds : BoundStatus::Violated;
  return check;
}

bool is_nonincreasing(std::span<const double> v, double slack) {
  for (std::size_t k = 0; k + 1 < v.size(); ++k)
    if (v[k + 1] > v[k] + slack) return false;
  return true;
}

double vdot_identity_residual(const Trajectory& traj, const std::vector<double>& v, const ControlDesign& design,
                              const CertificateMatrices& mats) {
  const auto& cfg = design.config();
  const std::size_t n = design.n();
  const std::size_t m = design.m();
  const double dt = traj.dt();
  const double coupling = 2.0 * cfg.alpha * cfg.beta2 * cfg.eps1;
  Vector delta(n + m);
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    const double numeric = (v[k + 1] - v[k - 1]) / (2.0 * dt);
    const auto e = traj.e.at(k);
    const auto uf = traj.u_f.at(k);
    const auto ufl = traj.u_fl.at(k);
    std::copy(e.begin(), e.end(), delta.begin());
    std::copy(uf.begin(), uf.end(), delta.begin() + static_cast<std::ptrdiff_t>(n));
    double gap = 0.0;
    for (std::size_t i = 0; i < m; ++i) gap += (ufl[i] - uf[i]) * (ufl[i] - uf[i]);
    const double analytic = -quadratic_form(mats.m4, delta) - coupling * gap;
    worst = std::max(worst, std::abs(numeric - analytic));
  }
  return worst;
}

CertificateReport assess_certificates(const ControlDesign& design, const SignalSpec& disturbance,
                                      const YoungOptions& young) {
  const auto& cfg = design.config();
  const double root_m = std::sqrt(static_cast<double>(design.m()));
  CertificateReport report;
  report.params = CertificateParams::from_config(cfg, root_m * signal_bound(disturbance),
                                                 root_m * signal_rate_bound(disturbance));
  if (young.d1) report.params.d1 = *young.d1;
  if (young.d2) report.params.d2 = *young.d2;
  report.matrices = build_certificate_matrices(design, report.params.beta4);
  if (young.tighten) {
    if (auto tuned = tighten_young_constants(report.params, cfg, report.matrices)) report.params = *tuned;
  }
  try {
    report.constants = certificate_constants(report.params, cfg, report.matrices);
    report.regime = CertificateRegime::Theorem1;
    report.diagnosis = "Theorem 1 constants feasible";
    return report;
  } catch (const NumericalError&) {
  }
  const bool constant_d = signal_rate_bound(disturbance) == 0.0;
  if (cfg.mu1 == 0.0 && cfg.mu2 == 0.0 && constant_d && report.matrices.m4_pd) {
    report.regime = CertificateRegime::Theorem2;
    report.diagnosis = "Theorem 1 constants infeasible; Theorem 2 regime active";
  } else {
    report.regime = CertificateRegime::None;
    report.diagnosis = "Theorem 1 constants infeasible; no certificate applies";
  }
  return report;
}

void attach_trajectory(CertificateReport& report, const Trajectory& traj, const ControlDesign& design) {
  report.t = traj.t;
  report.v = evaluate_V(traj, design.config(), design.p(), report.params.beta4);
  if (report.regime == CertificateRegime::Theorem1) {
    report.bound = check_theorem1_bound(report.t, report.v, *report.constants);
  } else if (report.regime == CertificateRegime::Theorem2) {
    const double vmax = report.v.empty() ? 0.0 : *std::max_element(report.v.begin(), report.v.end());
    const double v0 = report.v.empty() ? 0.0 : report.v.front();
    report.bound.envelope.assign(report.v.size(), v0);
    double worst_rise = 0.0;
    for (std::size_t k = 0; k + 1 < report.v.size(); ++k)
      worst_rise = std::max(worst_rise, report.v[k + 1] - report.v[k]);
    report.bound.max_violation = worst_rise;
    report.bound.status = is_nonincreasing(report.v, 1e-8 * vmax) ? BoundStatus::Holds : BoundStatus::Violated;
  } else {
    report.bound = BoundCheck{};
  }
}

void write_certificate_csv(std::ostream& out, const CertificateReport& report) {
  out << "t,V,envelope\n";
  for (std::size_t k = 0; k < report.v.size(); ++k) {
    const double env = report.bound.envelope.empty() ? std::numeric_limits<double>::infinity() : report.bound.envelope[k];
    out << csv::format(report.t[k]) << ',' << csv::format(report.v[k]) << ',' << csv::format(env) << '\n';
  }
}

void write_certificate_summary(std::ostream& out, const CertificateReport& report) {
  auto flag = [](bool b) { return b ? "true" : "false"; };
  out << "regime = " << to_string(report.regime) << '\n';
  out << "diagnosis = " << report.diagnosis << '\n';
  out << "beta4 = " << csv::format(report.params.beta4) << '\n';
  out << "d1 = " << csv::format(report.params.d1) << '\n';
  out << "d2 = " << csv::format(report.params.d2) << '\n';
  out << "dbar = " << csv::format(report.params.dbar) << '\n';
  out << "ddotbar = " << csv::format(report.params.ddotbar) << '\n';
  out << "m1_pd = " << flag(report.matrices.m1_pd) << '\n';
  out << "m2_pd = " << flag(report.matrices.m2_pd) << '\n';
  out << "m3_pd = " << flag(report.matrices.m3_pd) << '\n';
  out << "m4_pd = " << flag(report.matrices.m4_pd) << '\n';
  if (report.constants) {
    out << "l1 = " << csv::format(report.constants->l1) << '\n';
    out << "l2 = " << csv::format(report.constants->l2) << '\n';
    out << "l3 = " << csv::format(report.constants->l3) << '\n';
    out << "bstar = " << csv::format(report.constants->bstar) << '\n';
    out << "lstar = " << csv::format(report.constants->lstar) << '\n';
  }
  if (!report.v.empty()) {
    out << "bound_status = " << to_string(report.bound.status) << '\n';
    out << "max_violation = " << csv::format(report.bound.max_violation) << '\n';
  }
}

}  // namespace symbiotic
