#include "symbiotic/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "symbiotic/csv.hpp"

namespace symbiotic {
namespace {

double max_row_sum(const Matrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (double v : a.row(i)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

// f = A z + B w
void derivative(const LtiSystem& sys, std::span<const double> z, std::span<const double> w, std::span<double> f) {
  std::fill(f.begin(), f.end(), 0.0);
  multiply_add(sys.a, z, f);
  multiply_add(sys.b, w, f);
}

void output(const LtiSystem& sys, std::span<const double> z, std::span<const double> w, std::span<double> y) {
  std::fill(y.begin(), y.end(), 0.0);
  multiply_add(sys.c, z, y);
  multiply_add(sys.d, w, y);
}

Series slice(const Series& all, std::size_t offset, std::size_t width) {
  Series s;
  s.width = width;
  const std::size_t rows = all.size();
  s.data.resize(rows * width);
  for (std::size_t k = 0; k < rows; ++k)
    for (std::size_t i = 0; i < width; ++i) s.data[k * width + i] = all(k, offset + i);
  return s;
}

}  // namespace

LtiRun simulate_lti(const LtiSystem& sys, std::span<const double> z0, const InputFunction& input, double t_final,
                    double dt, bool keep_states) {
  sys.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(t_final >= dt) || !std::isfinite(t_final)) throw ConfigError("t_final must be at least dt");
  const std::size_t nz = sys.state_dim();
  if (z0.size() != nz) throw DimensionError("initial state has wrong length");
  const std::size_t nw = sys.in_dim();
  const std::size_t ny = sys.out_dim();
  const auto steps = static_cast<std::size_t>(std::llround(t_final / dt));

  LtiRun run;
  const double stiffness = dt * max_row_sum(sys.a);
  if (stiffness >= 1.0) {
    std::ostringstream msg;
    msg << "dt * max row-sum |A| = " << stiffness << " >= 1; step may be too large";
    run.warnings.push_back(msg.str());
  }
  run.t.resize(steps + 1);
  run.y.width = ny;
  run.y.data.resize((steps + 1) * ny);
  if (keep_states) {
    run.z.width = nz;
    run.z.data.resize((steps + 1) * nz);
  }

  Vector z(z0.begin(), z0.end()), tmp(nz), k1(nz), k2(nz), k3(nz), k4(nz);
  Vector w0(nw), wh(nw), w1(nw);
  auto store = [&](std::size_t k, double t, std::span<const double> w) {
    run.t[k] = t;
    output(sys, z, w, std::span<double>(run.y.data).subspan(k * ny, ny));
    if (keep_states) std::copy(z.begin(), z.end(), run.z.data.begin() + static_cast<std::ptrdiff_t>(k * nz));
  };

  input(0.0, w0);
  store(0, 0.0, w0);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double t_next = static_cast<double>(k + 1) * dt;
    input(t + 0.5 * dt, wh);
    input(t_next, w1);

    derivative(sys, z, w0, k1);
    for (std::size_t i = 0; i < nz; ++i) tmp[i] = z[i] + 0.5 * dt * k1[i];
    derivative(sys, tmp, wh, k2);
    for (std::size_t i = 0; i < nz; ++i) tmp[i] = z[i] + 0.5 * dt * k2[i];
    derivative(sys, tmp, wh, k3);
    for (std::size_t i = 0; i < nz; ++i) tmp[i] = z[i] + dt * k3[i];
    derivative(sys, tmp, w1, k4);
    bool finite = true;
    for (std::size_t i = 0; i < nz; ++i) {
      z[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      finite = finite && std::isfinite(z[i]);
    }
    if (!finite) {
      std::ostringstream msg;
      msg << "divergence at t=" << t_next;
      throw NumericalError(msg.str());
    }
    store(k + 1, t_next, w1);
    std::swap(w0, w1);
  }
  return run;
}

Trajectory integrate(const ClosedLoopModel& model, const SignalSpec& r, const SignalSpec& d, double t_final,
                     double dt) {
  validate_signal(r);
  validate_signal(d);
  const std::size_t p = model.p;
  const std::size_t m = model.m;
  auto input = [&](double t, std::span<double> w) {
    const double rv = signal_value(r, t);
    const double dv = signal_value(d, t);
    std::fill(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p), rv);
    std::fill(w.begin() + static_cast<std::ptrdiff_t>(p), w.end(), dv);
  };
  LtiRun run = simulate_lti(model.system, model.initial_state, input, t_final, dt);

  Trajectory traj;
  traj.t = std::move(run.t);
  traj.warnings = std::move(run.warnings);
  traj.x = slice(run.y, model.offset(Tap::X), model.n);
  traj.x_n = slice(run.y, model.offset(Tap::Xn), model.n);
  traj.e = slice(run.y, model.offset(Tap::E), model.n);
  traj.u_n = slice(run.y, model.offset(Tap::Un), m);
  traj.u_f = slice(run.y, model.offset(Tap::Uf), m);
  traj.u_a = slice(run.y, model.offset(Tap::Ua), m);
  traj.u = slice(run.y, model.offset(Tap::U), m);
  traj.u_fl = slice(run.y, model.offset(Tap::Ufl), m);
  traj.d_hat = slice(run.y, model.offset(Tap::Dhat), m);

  const std::size_t rows = traj.t.size();
  traj.d.width = m;
  traj.r.width = p;
  traj.d.data.resize(rows * m);
  traj.r.data.resize(rows * p);
  for (std::size_t k = 0; k < rows; ++k) {
    const double dv = signal_value(d, traj.t[k]);
    const double rv = signal_value(r, traj.t[k]);
    std::fill_n(traj.d.data.begin() + static_cast<std::ptrdiff_t>(k * m), m, dv);
    std::fill_n(traj.r.data.begin() + static_cast<std::ptrdiff_t>(k * p), p, rv);
    for (std::size_t i = 0; i < model.n; ++i) {
      const double expect = traj.x(k, i) - traj.x_n(k, i);
      const double scale = std::max({1.0, std::abs(traj.x(k, i)), std::abs(traj.x_n(k, i))});
      if (std::abs(traj.e(k, i) - expect) > 1e-12 * scale) {
        throw NumericalError("trajectory tap e differs from x - x_n");
      }
    }
  }
  return traj;
}

double quadratic_cost(const Trajectory& traj, double t_end) {
  if (traj.t.empty()) throw ConfigError("quadratic_cost: empty trajectory");
  const double t0 = traj.t.front();
  const double t_last = traj.t.back();
  const double slack = 1e-9 * std::max(1.0, std::abs(t_last));
  if (t_end < t0 - slack || t_end > t_last + slack) {
    std::ostringstream msg;
    msg << "quadratic_cost: t_end=" << t_end << " outside trajectory [" << t0 << ", " << t_last << "]";
    throw ConfigError(msg.str());
  }
  auto ee = [&](std::size_t k) { return dot(traj.e.at(k), traj.e.at(k)); };
  double cost = 0.0;
  for (std::size_t k = 0; k + 1 < traj.t.size(); ++k) {
    const double ta = traj.t[k];
    const double tb = traj.t[k + 1];
    if (ta >= t_end - slack) break;
    const double fa = ee(k);
    const double fb = ee(k + 1);
    if (tb <= t_end + slack) {
      cost += 0.5 * (tb - ta) * (fa + fb);
    } else {
      const double h = t_end - ta;
      const double f_end = fa + (fb - fa) * h / (tb - ta);
      cost += 0.5 * h * (fa + f_end);
      break;
    }
  }
  return cost;
}

std::vector<std::string> trajectory_csv_header(const Trajectory& traj) {
  std::vector<std::string> cols{"t"};
  auto add = [&](const std::string& name, std::size_t width, bool always_index) {
    if (width == 1 && !always_index) {
      cols.push_back(name);
      return;
    }
    for (std::size_t i = 1; i <= width; ++i) cols.push_back(name + std::to_string(i));
  };
  add("x", traj.x.width, true);
  add("xn", traj.x_n.width, true);
  add("e", traj.e.width, true);
  add("u", traj.u.width, false);
  add("un", traj.u_n.width, false);
  add("uf", traj.u_f.width, false);
  add("ua", traj.u_a.width, false);
  add("ufl", traj.u_fl.width, false);
  add("dhat", traj.d_hat.width, false);
  add("d", traj.d.width, false);
  return cols;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const auto header = trajectory_csv_header(traj);
  csv::write_row(out, header);
  std::vector<std::string> cells;
  cells.reserve(header.size());
  const Series* order[] = {&traj.x, &traj.x_n, &traj.e, &traj.u, &traj.u_n,
                           &traj.u_f, &traj.u_a, &traj.u_fl, &traj.d_hat, &traj.d};
  for (std::size_t k = 0; k < traj.size(); ++k) {
    cells.clear();
    cells.push_back(csv::format(traj.t[k]));
    for (const Series* s : order)
      for (double v : s->at(k)) cells.push_back(csv::format(v));
    csv::write_row(out, cells);
  }
}

}  // namespace symbiotic
