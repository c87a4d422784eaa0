#include "symbiotic/system_model.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "symbiotic/linalg.hpp"

namespace symbiotic {

std::string_view to_string(FixedGainVariant v) {
  return v == FixedGainVariant::Standard ? "SFG" : "NFG";
}

FixedGainVariant parse_variant(std::string_view s) {
  if (s == "SFG" || s == "standard") return FixedGainVariant::Standard;
  if (s == "NFG" || s == "new") return FixedGainVariant::New;
  throw ConfigError("unknown fixed-gain variant '" + std::string(s) + "' (expected SFG or NFG)");
}

void SymbioticConfig::validate(std::size_t n) const {
  auto positive = [](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) throw ConfigError(std::string(name) + " must be a positive finite number");
  };
  auto nonneg = [](double v, const char* name) {
    if (!(std::isfinite(v) && v >= 0.0)) throw ConfigError(std::string(name) + " must be a nonnegative finite number");
  };
  positive(alpha, "alpha");
  nonneg(eps1, "eps1");
  positive(eps2, "eps2");
  positive(beta1, "beta1");
  positive(beta2, "beta2");
  positive(beta3, "beta3");
  nonneg(mu1, "mu1");
  nonneg(mu2, "mu2");
  if (r_weight.rows() != n || r_weight.cols() != n) {
    throw ConfigError("R must be " + std::to_string(n) + "x" + std::to_string(n) + ", got " + r_weight.shape());
  }
  if (!linalg::is_symmetric(r_weight) || !linalg::is_positive_definite(r_weight)) {
    throw ConfigError("R must be symmetric positive definite");
  }
}

ControlDesign::ControlDesign(PlantModel plant, NominalGains gains, SymbioticConfig cfg)
    : plant_(std::move(plant)), gains_(std::move(gains)), cfg_(std::move(cfg)) {
  const std::size_t n = plant_.n();
  const std::size_t m = plant_.m();
  if (!plant_.a.is_square()) throw DimensionError("plant A must be square, got " + plant_.a.shape());
  if (plant_.b.rows() != n) throw DimensionError("plant B is " + plant_.b.shape() + " for n = " + std::to_string(n));
  if (plant_.x0.empty()) plant_.x0.assign(n, 0.0);
  if (plant_.x0.size() != n) throw DimensionError("x0 has " + std::to_string(plant_.x0.size()) + " entries, expected " + std::to_string(n));
  if (gains_.k1.rows() != m || gains_.k1.cols() != n) throw DimensionError("K1 must be " + std::to_string(m) + "x" + std::to_string(n) + ", got " + gains_.k1.shape());
  if (gains_.k2.rows() != m || gains_.k2.cols() == 0) throw DimensionError("K2 must have " + std::to_string(m) + " rows, got " + gains_.k2.shape());
  cfg_.validate(n);

  b_i_ = linalg::pseudo_left_inverse(plant_.b);
  a_n_ = plant_.a - plant_.b * gains_.k1;
  b_n_ = plant_.b * gains_.k2;
  if (!linalg::hurwitz_check(a_n_)) throw NumericalError("A - B K1 is not Hurwitz");
  p_ = linalg::solve_lyapunov(a_n_, cfg_.r_weight);
}

ControlDesign ControlDesign::with_config(SymbioticConfig cfg) const {
  if (cfg.r_weight == cfg_.r_weight) {
    cfg.validate(n());
    ControlDesign copy = *this;
    copy.cfg_ = std::move(cfg);
    return copy;
  }
  return ControlDesign(plant_, gains_, std::move(cfg));
}

namespace {

// Controller realization plus the pieces of the fixed-gain readout
// u_f = fx * x + fz * s that the closed-loop taps need.
struct ControllerParts {
  LtiSystem sys;  // inputs [x; r], output u
  Matrix fx;      // m x n
  Matrix fz;      // m x q
  std::size_t xn = 0, xi1 = 0, xi2 = 0, ufl = 0, dhat = 0;
  bool has_reference = false;
  bool has_filter = false;
};

ControllerParts build_controller(const ControlDesign& ds, bool with_reference) {
  const auto& cfg = ds.config();
  const std::size_t n = ds.n();
  const std::size_t m = ds.m();
  const std::size_t p = ds.p_dim();
  const bool nfg = cfg.variant == FixedGainVariant::New;
  const Matrix eye_m = Matrix::identity(m);

  ControllerParts parts;
  parts.has_reference = with_reference;
  parts.has_filter = nfg;
  std::size_t q = 0;
  if (with_reference) {
    parts.xn = q;
    q += n;
  }
  parts.xi1 = q;
  q += n;
  if (nfg) {
    parts.xi2 = q;
    q += m;
    parts.ufl = q;
    q += m;
  }
  parts.dhat = q;
  q += m;

  const double alpha = cfg.alpha;
  parts.fx = -alpha * ds.b_i();
  parts.fz = Matrix(m, q);
  parts.fz.set_block(0, parts.xi1, alpha * ds.b_i());
  if (nfg) parts.fz.set_block(0, parts.xi2, -alpha * cfg.eps1 * eye_m);

  Matrix a(q, q), b(q, n + p), c(m, q), d(m, n + p);
  const Matrix bt_p = ds.plant().b.transpose() * ds.p();

  if (with_reference) {
    a.set_block(parts.xn, parts.xn, ds.a_n());
    b.set_block(parts.xn, n, ds.b_n());
  }
  // xi1' = A_n x + B_n r
  b.set_block(parts.xi1, 0, ds.a_n());
  b.set_block(parts.xi1, n, ds.b_n());

  if (nfg) {
    // xi2' = u_f - u_fl
    a.set_block(parts.xi2, 0, parts.fz);
    a.add_block(parts.xi2, parts.ufl, -1.0 * eye_m);
    b.set_block(parts.xi2, 0, parts.fx);
    // u_fl' = -eps2 (u_fl - u_f) - mu2 u_fl
    a.set_block(parts.ufl, 0, cfg.eps2 * parts.fz);
    a.add_block(parts.ufl, parts.ufl, -(cfg.eps2 + cfg.mu2) * eye_m);
    b.set_block(parts.ufl, 0, cfg.eps2 * parts.fx);
  }

  // d_hat' = beta3^-1 (beta1 B'P e - alpha beta2 u_f) - mu1 d_hat, e = x - x_n
  const double ke = cfg.beta1 / cfg.beta3;
  const double kf = alpha * cfg.beta2 / cfg.beta3;
  a.set_block(parts.dhat, 0, -kf * parts.fz);
  a.add_block(parts.dhat, parts.dhat, -cfg.mu1 * eye_m);
  if (with_reference) a.add_block(parts.dhat, parts.xn, -ke * bt_p);
  b.set_block(parts.dhat, 0, ke * bt_p - kf * parts.fx);

  // u = -K1 x + K2 r + u_f - d_hat
  c.set_block(0, 0, parts.fz);
  c.add_block(0, parts.dhat, -1.0 * eye_m);
  d.set_block(0, 0, parts.fx - ds.gains().k1);
  d.set_block(0, n, ds.gains().k2);

  parts.sys = LtiSystem(std::move(a), std::move(b), std::move(c), std::move(d));
  return parts;
}

Vector controller_initial_state(const ControlDesign& ds, const ControllerParts& parts) {
  Vector s(parts.sys.state_dim(), 0.0);
  const auto& x0 = ds.plant().x0;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    if (parts.has_reference) s[parts.xn + i] = x0[i];
    s[parts.xi1 + i] = x0[i];
  }
  return s;
}

std::vector<std::size_t> state_inputs(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

LtiSystem plant_state_output(const PlantModel& plant) {
  return LtiSystem(plant.a, plant.b, Matrix::identity(plant.n()), Matrix(plant.n(), plant.m()));
}

void require_siso_loop(const ControlDesign& ds) {
  if (ds.m() != 1) throw DimensionError("margin analysis requires single-input loop");
}

}  // namespace

ControllerRealization realize_controller(const ControlDesign& design) {
  ControllerParts parts = build_controller(design, true);
  Vector s0 = controller_initial_state(design, parts);
  return {std::move(parts.sys), std::move(s0)};
}

ClosedLoopModel assemble_closed_loop(const ControlDesign& ds) {
  const ControllerParts ctl = build_controller(ds, true);
  const std::size_t n = ds.n();
  const std::size_t m = ds.m();
  const std::size_t p = ds.p_dim();
  const std::size_t q = ctl.sys.state_dim();
  const std::size_t nz = n + q;
  const Matrix& pa = ds.plant().a;
  const Matrix& pb = ds.plant().b;

  const Matrix ctl_bx = ctl.sys.b.block(0, 0, q, n);
  const Matrix ctl_br = ctl.sys.b.block(0, n, q, p);
  const Matrix ctl_dx = ctl.sys.d.block(0, 0, m, n);
  const Matrix ctl_dr = ctl.sys.d.block(0, n, m, p);

  // Input u = C_c s + D_x x + D_r r substituted into dx/dt = A x + B (u + d).
  Matrix a(nz, nz);
  a.set_block(0, 0, pa + pb * ctl_dx);
  a.set_block(0, n, pb * ctl.sys.c);
  a.set_block(n, 0, ctl_bx);
  a.set_block(n, n, ctl.sys.a);

  Matrix b(nz, p + m);
  b.set_block(0, 0, pb * ctl_dr);
  b.set_block(0, p, pb);
  b.set_block(n, 0, ctl_br);

  ClosedLoopModel model;
  model.variant = ds.config().variant;
  model.n = n;
  model.m = m;
  model.p = p;
  const std::array<std::size_t, static_cast<std::size_t>(Tap::Count)> widths{n, n, n, m, m, m, m, m, m};
  std::size_t rows = 0;
  for (std::size_t k = 0; k < widths.size(); ++k) {
    model.tap_offset[k] = rows;
    model.tap_width[k] = widths[k];
    rows += widths[k];
  }
  const Matrix eye_n = Matrix::identity(n);
  const Matrix eye_m = Matrix::identity(m);

  Matrix c(rows, nz), d(rows, p + m);
  const std::size_t xn = n + ctl.xn;
  c.set_block(model.offset(Tap::X), 0, eye_n);
  c.set_block(model.offset(Tap::Xn), xn, eye_n);
  c.set_block(model.offset(Tap::E), 0, eye_n);
  c.add_block(model.offset(Tap::E), xn, -1.0 * eye_n);
  c.set_block(model.offset(Tap::Un), 0, -1.0 * ds.gains().k1);
  d.set_block(model.offset(Tap::Un), 0, ds.gains().k2);
  c.set_block(model.offset(Tap::Uf), 0, ctl.fx);
  c.set_block(model.offset(Tap::Uf), n, ctl.fz);
  c.set_block(model.offset(Tap::Ua), n + ctl.dhat, -1.0 * eye_m);
  c.set_block(model.offset(Tap::U), 0, ctl_dx);
  c.set_block(model.offset(Tap::U), n, ctl.sys.c);
  d.set_block(model.offset(Tap::U), 0, ctl_dr);
  if (ctl.has_filter) c.set_block(model.offset(Tap::Ufl), n + ctl.ufl, eye_m);
  c.set_block(model.offset(Tap::Dhat), n + ctl.dhat, eye_m);

  model.system = LtiSystem(std::move(a), std::move(b), std::move(c), std::move(d));
  model.initial_state.assign(nz, 0.0);
  const Vector s0 = controller_initial_state(ds, ctl);
  for (std::size_t i = 0; i < n; ++i) model.initial_state[i] = ds.plant().x0[i];
  for (std::size_t i = 0; i < q; ++i) model.initial_state[n + i] = s0[i];
  return model;
}

LtiSystem open_loop_at_plant_input(const ControlDesign& design) {
  require_siso_loop(design);
  const ControllerParts ctl = build_controller(design, false);
  const LtiSystem ctl_x = select_inputs(ctl.sys, state_inputs(design.n()));
  return scale_output(series(plant_state_output(design.plant()), ctl_x), -1.0);
}

LtiSystem open_loop_with_reference_model(const ControlDesign& design) {
  require_siso_loop(design);
  const ControllerParts ctl = build_controller(design, true);
  const LtiSystem ctl_x = select_inputs(ctl.sys, state_inputs(design.n()));
  return scale_output(series(plant_state_output(design.plant()), ctl_x), -1.0);
}

}  // namespace symbiotic
