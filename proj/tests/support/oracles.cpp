#include "oracles.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

#include "symbiotic/linalg.hpp"

namespace oracle {

ControlDesign example_design(double alpha, FixedGainVariant variant, double eps1, double eps2, double mu1,
                           double mu2) {
  PlantModel plant{Matrix{{0.0, 1.0}, {0.0, 0.0}}, Matrix{{0.0}, {1.0}}, {0.0, 0.0}};
  NominalGains gains{Matrix{{0.16, 0.57}}, Matrix{{0.16}}};
  SymbioticConfig cfg;
  cfg.alpha = alpha;
  cfg.eps1 = eps1;
  cfg.eps2 = eps2;
  cfg.beta1 = 0.1;
  cfg.beta2 = 3.0;
  cfg.beta3 = 1.0;
  cfg.mu1 = mu1;
  cfg.mu2 = mu2;
  cfg.r_weight = Matrix::identity(2);
  cfg.variant = variant;
  return ControlDesign(plant, gains, cfg);
}

AnalysisForm analysis_form(const ControlDesign& ds) {
  const auto& c = ds.config();
  const bool nfg = c.variant == FixedGainVariant::New;
  const double e1 = nfg ? c.eps1 : 0.0;
  const std::size_t n = ds.n(), m = ds.m(), p = ds.p_dim();
  const std::size_t ix = 0, ixn = n, iuf = 2 * n, iufl = iuf + m, idh = iuf + (nfg ? 2 : 1) * m;
  const std::size_t q = idh + m;
  const Matrix& b = ds.plant().b;
  const Matrix im = Matrix::identity(m);

  Matrix a(q, q), bin(q, p + m), cout(m, q), dout(m, p + m);
  // plant with u = -K1 x + K2 r + u_f - d_hat
  a.set_block(ix, ix, ds.a_n());
  a.set_block(ix, iuf, b);
  a.set_block(ix, idh, -b);
  bin.set_block(ix, 0, ds.b_n());
  bin.set_block(ix, p, b);
  // reference model
  a.set_block(ixn, ixn, ds.a_n());
  bin.set_block(ixn, 0, ds.b_n());
  // u_f
  a.set_block(iuf, iuf, -(c.alpha + c.alpha * e1) * im);
  a.set_block(iuf, idh, c.alpha * im);
  bin.set_block(iuf, p, -c.alpha * im);
  if (nfg) {
    a.set_block(iuf, iufl, c.alpha * e1 * im);
    a.set_block(iufl, iuf, c.eps2 * im);
    a.set_block(iufl, iufl, -(c.eps2 + c.mu2) * im);
  }
  // adaptive law on e = x - x_n
  const Matrix g = (c.beta1 / c.beta3) * (b.transpose() * ds.p());
  a.set_block(idh, ix, g);
  a.set_block(idh, ixn, -g);
  a.set_block(idh, iuf, -(c.alpha * c.beta2 / c.beta3) * im);
  a.set_block(idh, idh, -c.mu1 * im);
  cout.set_block(0, iuf, im);

  AnalysisForm out{LtiSystem(a, bin, cout, dout), Vector(q, 0.0)};
  const auto& x0 = ds.plant().x0;
  for (std::size_t i = 0; i < n; ++i) out.initial_state[ix + i] = out.initial_state[ixn + i] = x0[i];
  return out;
}

LtiSystem reduced_loop(const ControlDesign& ds) {
  const auto& c = ds.config();
  const bool nfg = c.variant == FixedGainVariant::New;
  // Without leakage xi2 - u_fl / eps2 is conserved; that mode is dropped and
  // xi2 is read out as u_fl / eps2.
  const bool keep_xi2 = nfg && c.mu2 > 0.0;
  const std::size_t n = ds.n(), m = ds.m();
  const std::size_t ieta = n, ixi2 = n + m;
  const std::size_t iufl = ixi2 + (keep_xi2 ? m : 0);
  const std::size_t idh = iufl + (nfg ? m : 0);
  const std::size_t q = idh + m;
  const Matrix& b = ds.plant().b;
  const Matrix im = Matrix::identity(m);

  // u_f = -alpha B_i x + alpha eta - alpha eps1 xi2
  Matrix uf(m, q);
  uf.set_block(0, 0, -c.alpha * ds.b_i());
  uf.set_block(0, ieta, c.alpha * im);
  if (keep_xi2) {
    uf.set_block(0, ixi2, -c.alpha * c.eps1 * im);
  } else if (nfg) {
    uf.set_block(0, iufl, -(c.alpha * c.eps1 / c.eps2) * im);
  }
  // u = -K1 x + u_f - d_hat
  Matrix u = uf;
  u.add_block(0, 0, -ds.gains().k1);
  u.add_block(0, idh, -im);

  Matrix a(q, q), bin(q, m);
  a.set_block(0, 0, ds.plant().a);
  bin.set_block(0, 0, b);
  a.set_block(ieta, 0, ds.b_i() * ds.a_n());
  if (nfg) {
    if (keep_xi2) {
      Matrix row = uf;
      row.add_block(0, iufl, -im);
      a.set_block(ixi2, 0, row);
    }
    Matrix lag = c.eps2 * uf;
    lag.add_block(0, iufl, -(c.eps2 + c.mu2) * im);
    a.set_block(iufl, 0, lag);
  }
  Matrix adapt = -(c.alpha * c.beta2 / c.beta3) * uf;
  adapt.add_block(0, 0, (c.beta1 / c.beta3) * (b.transpose() * ds.p()));
  adapt.add_block(0, idh, -c.mu1 * im);
  a.set_block(idh, 0, adapt);
  return LtiSystem(a, bin, -u, Matrix(m, m));
}

LtiSystem pade_delay(double tau, std::size_t order) {
  // Unit-delay approximant, then time-scaled by tau; realizing the tau-scaled
  // polynomial directly leaves coefficients spanning tau^order.
  const std::size_t nn = order;
  std::vector<double> num(nn + 1), den(nn + 1);
  for (std::size_t k = 0; k <= nn; ++k) {
    const double c = std::exp(std::lgamma(2.0 * nn - k + 1) + std::lgamma(nn + 1.0) - std::lgamma(2.0 * nn + 1) -
                              std::lgamma(k + 1.0) - std::lgamma(nn - k + 1.0));
    num[nn - k] = c * (k % 2 ? -1.0 : 1.0);
    den[nn - k] = c;
  }
  LtiSystem unit = from_transfer_function(num, den);
  return LtiSystem(unit.a * (1.0 / tau), unit.b * (1.0 / tau), unit.c, unit.d);
}

double spectral_abscissa(const Matrix& a) {
  Eigen::MatrixXd e(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) e(i, j) = a(i, j);
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(e, false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue iteration failed");
  return solver.eigenvalues().real().maxCoeff();
}

bool delayed_loop_stable(const LtiSystem& loop, double tau, std::size_t order) {
  const LtiSystem cl = tau == 0.0 ? negative_feedback(loop) : negative_feedback(series(pade_delay(tau, order), loop));
  return spectral_abscissa(cl.a) < 0.0;
}

InputFunction exogenous(const SignalSpec& r, std::size_t p, const SignalSpec& d, std::size_t m) {
  return [=](double t, std::span<double> w) {
    const double rv = signal_value(r, t);
    const double dv = signal_value(d, t);
    for (std::size_t i = 0; i < p; ++i) w[i] = rv;
    for (std::size_t i = 0; i < m; ++i) w[p + i] = dv;
  };
}

}  // namespace oracle
