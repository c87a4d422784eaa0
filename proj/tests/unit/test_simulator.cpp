#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "symbiotic/errors.hpp"
#include "symbiotic/simulator.hpp"

using namespace symbiotic;
using oracle::example_design;

namespace {

Trajectory manual_error(double t_end, double dt, double (*f)(double)) {
  Trajectory tr;
  tr.e.width = 2;
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    tr.t.push_back(t);
    tr.e.data.push_back(f(t));
    tr.e.data.push_back(0.0);
  }
  return tr;
}

double max_diff(const Series& a, const Series& b, std::size_t stride_a, std::size_t stride_b) {
  double worst = 0.0;
  const std::size_t rows = (a.size() - 1) / stride_a + 1;
  for (std::size_t k = 0; k < rows; ++k)
    for (std::size_t i = 0; i < a.width; ++i)
      worst = std::max(worst, std::abs(a(k * stride_a, i) - b(k * stride_b, i)));
  return worst;
}

}  // namespace

TEST_CASE("scalar decay converges at fourth order") {
  const LtiSystem sys(Matrix{{-1.0}}, Matrix{{0.0}}, Matrix{{1.0}}, Matrix{{0.0}});
  const Vector z0{1.0};
  auto none = [](double, std::span<double>) {};
  const double err1 = std::abs(simulate_lti(sys, z0, none, 1.0, 0.1).y.data.back() - std::exp(-1.0));
  const double err2 = std::abs(simulate_lti(sys, z0, none, 1.0, 0.05).y.data.back() - std::exp(-1.0));
  CHECK(err1 / err2 == doctest::Approx(16.0).epsilon(0.05));
  CHECK(err1 <= 1e-6);
}

TEST_CASE("zero inputs and zero initial state stay at zero") {
  const Trajectory tr = integrate(assemble_closed_loop(example_design()), ZeroSignal{}, ZeroSignal{}, 5.0, 1e-3);
  for (const Series* s : {&tr.x, &tr.x_n, &tr.e, &tr.u, &tr.u_f, &tr.u_fl, &tr.d_hat})
    for (double v : s->data) CHECK(v == 0.0);
  CHECK(tr.size() == 5001);
  CHECK(tr.t.back() == doctest::Approx(5.0));
}

TEST_CASE("channel bookkeeping along a trajectory") {
  const ControlDesign ds = example_design();
  const Trajectory tr = integrate(assemble_closed_loop(ds), FilteredSquareWave{}, ConstantSignal{10.0}, 30.0, 1e-3);
  // The row-sum stiffness proxy is conservative (about 1500 here, while the
  // fastest closed-loop pole is near 40 rad/s), so the default step warns.
  REQUIRE(tr.warnings.size() == 1);
  CHECK(tr.warnings[0].find("row-sum") != std::string::npos);
  for (std::size_t k = 0; k < tr.size(); k += 997) {
    CHECK(tr.u(k, 0) == doctest::Approx(tr.u_n(k, 0) + tr.u_f(k, 0) + tr.u_a(k, 0)));
    CHECK(tr.u_a(k, 0) == doctest::Approx(-tr.d_hat(k, 0)));
    CHECK(tr.u_n(k, 0) == doctest::Approx(-0.16 * tr.x(k, 0) - 0.57 * tr.x(k, 1) + 0.16 * tr.r(k, 0)));
    CHECK(tr.d(k, 0) == 10.0);
  }
}

TEST_CASE("error dynamics identity e' = A_n e + B (u_f - (d_hat - d))") {
  const ControlDesign ds = example_design();
  const Trajectory tr = integrate(assemble_closed_loop(ds), FilteredSquareWave{}, ConstantSignal{10.0}, 20.0, 1e-3);
  const double dt = tr.dt();
  double worst = 0.0;
  for (std::size_t k = 2; k + 2 < tr.size(); ++k) {
    for (std::size_t i = 0; i < 2; ++i) {
      const double num =
          (-tr.e(k + 2, i) + 8.0 * tr.e(k + 1, i) - 8.0 * tr.e(k - 1, i) + tr.e(k - 2, i)) / (12.0 * dt);
      double rhs = ds.a_n()(i, 0) * tr.e(k, 0) + ds.a_n()(i, 1) * tr.e(k, 1);
      rhs += ds.plant().b(i, 0) * (tr.u_f(k, 0) - (tr.d_hat(k, 0) - tr.d(k, 0)));
      worst = std::max(worst, std::abs(num - rhs));
    }
  }
  CHECK(worst <= 1e-7);
}

TEST_CASE("RK4 order on the closed loop (Richardson)") {
  const ClosedLoopModel cl = assemble_closed_loop(example_design());
  const SignalSpec r = SinusoidSignal{0.0, 1.0, 0.5, 0.0};
  const SignalSpec d = SinusoidSignal{10.0, 2.0, 1.0, 0.0};
  const Trajectory a = integrate(cl, r, d, 10.0, 4e-3);
  const Trajectory b = integrate(cl, r, d, 10.0, 2e-3);
  const Trajectory c = integrate(cl, r, d, 10.0, 1e-3);
  const double d1 = max_diff(a.u_f, b.u_f, 1, 2) + max_diff(a.x, b.x, 1, 2);
  const double d2 = max_diff(b.u_f, c.u_f, 1, 2) + max_diff(b.x, c.x, 1, 2);
  MESSAGE("observed order " << std::log2(d1 / d2));
  CHECK(std::log2(d1 / d2) >= 3.8);
}

TEST_CASE("divergence is reported with the time") {
  const LtiSystem sys(Matrix{{800.0}}, Matrix{{0.0}}, Matrix{{1.0}}, Matrix{{0.0}});
  const Vector z0{1.0};
  auto none = [](double, std::span<double>) {};
  CHECK_THROWS_WITH_AS(simulate_lti(sys, z0, none, 10.0, 0.1), doctest::Contains("divergence at t="), NumericalError);
}

TEST_CASE("stiff step warns") {
  const LtiSystem sys(Matrix{{-20.0}}, Matrix{{0.0}}, Matrix{{1.0}}, Matrix{{0.0}});
  const Vector z0{1.0};
  auto none = [](double, std::span<double>) {};
  CHECK(simulate_lti(sys, z0, none, 1.0, 0.1).warnings.size() == 1);
  CHECK(simulate_lti(sys, z0, none, 1.0, 0.01).warnings.empty());
}

TEST_CASE("argument checks") {
  const ClosedLoopModel cl = assemble_closed_loop(example_design());
  CHECK_THROWS_AS(integrate(cl, ZeroSignal{}, ZeroSignal{}, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(integrate(cl, ZeroSignal{}, ZeroSignal{}, 1e-4, 1e-3), ConfigError);
  CHECK_THROWS_AS(integrate(cl, FilteredSquareWave{1.0, -1.0, 0.5}, ZeroSignal{}, 1.0, 1e-3), ConfigError);
}

TEST_CASE("quadratic cost examples") {
  CHECK(quadratic_cost(manual_error(2.0, 1e-3, [](double) { return 0.0; }), 2.0) == 0.0);
  CHECK(quadratic_cost(manual_error(2.0, 1e-3, [](double) { return 1.0; }), 2.0) == doctest::Approx(2.0));
  const Trajectory s = manual_error(2.0 * std::numbers::pi, 1e-3, [](double t) { return std::sin(t); });
  CHECK(std::abs(quadratic_cost(s, s.t.back()) - std::numbers::pi) <= 1e-4);
  // partial last interval
  CHECK(quadratic_cost(manual_error(2.0, 1e-3, [](double) { return 1.0; }), 1.2345) == doctest::Approx(1.2345));
  CHECK_THROWS_AS(quadratic_cost(manual_error(2.0, 1e-3, [](double) { return 1.0; }), 3.0), ConfigError);
}

TEST_CASE("superposition") {
  const ClosedLoopModel cl = assemble_closed_loop(example_design());
  const SignalSpec r1 = FilteredSquareWave{1.0, 40.0, 0.5};
  const SignalSpec d1 = ConstantSignal{10.0};
  const SignalSpec r2 = SinusoidSignal{0.0, 0.3, 2.0, 0.0};
  const SignalSpec d2 = SinusoidSignal{1.0, 2.0, 1.0, 0.5};
  const Trajectory a = integrate(cl, r1, d1, 20.0, 1e-3);
  const Trajectory b = integrate(cl, r2, d2, 20.0, 1e-3);
  const Trajectory twice = integrate(cl, scaled(r1, 2.0), scaled(d1, 2.0), 20.0, 1e-3);
  const Trajectory both = integrate(
      cl, SinusoidSignal{0.0, 0.0, 1.0, 0.0}, SinusoidSignal{0.0, 0.0, 1.0, 0.0}, 20.0, 1e-3);
  double scale = 0.0, dev = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    for (const auto& [sa, s2] : {std::pair{&a.x, &twice.x}, std::pair{&a.u, &twice.u}, std::pair{&a.d_hat, &twice.d_hat}})
      for (std::size_t i = 0; i < sa->width; ++i) {
        scale = std::max(scale, std::abs((*s2)(k, i)));
        dev = std::max(dev, std::abs((*s2)(k, i) - 2.0 * (*sa)(k, i)));
      }
  CHECK(dev <= 1e-9 * scale);
  for (double v : both.x.data) CHECK(v == 0.0);

  // additivity through the raw LTI runner
  auto sum_in = [&](double t, std::span<double> w) {
    w[0] = signal_value(r1, t) + signal_value(r2, t);
    w[1] = signal_value(d1, t) + signal_value(d2, t);
  };
  const LtiRun sum = simulate_lti(cl.system, Vector(cl.system.state_dim(), 0.0), sum_in, 20.0, 1e-3);
  double dev2 = 0.0, scale2 = 0.0;
  const std::size_t ox = cl.offset(Tap::X);
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t i = 0; i < 2; ++i) {
      const double s = sum.y(k, ox + i);
      scale2 = std::max(scale2, std::abs(s));
      dev2 = std::max(dev2, std::abs(s - a.x(k, i) - b.x(k, i)));
    }
  CHECK(dev2 <= 1e-9 * scale2);
}

TEST_CASE("theorem 2 asymptotics in simulation") {
  const Trajectory tr =
      integrate(assemble_closed_loop(example_design()), ConstantSignal{1.0}, ConstantSignal{10.0}, 250.0, 1e-3);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    if (tr.t[k] < 200.0) continue;
    CHECK(std::hypot(tr.e(k, 0), tr.e(k, 1)) < 1e-3);
    CHECK(std::abs(tr.u_f(k, 0)) < 1e-3);
  }
}

TEST_CASE("boundedness with leakage and time-varying disturbance") {
  const Trajectory tr = integrate(assemble_closed_loop(example_design(10.0, FixedGainVariant::New, 3.0, 10.0, 0.1, 0.1)),
                                  FilteredSquareWave{}, SinusoidSignal{10.0, 2.0, 1.0, 0.0}, 500.0, 1e-3);
  double late = 0.0, early = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const double v = std::abs(tr.x(k, 0)) + std::abs(tr.x(k, 1)) + std::abs(tr.d_hat(k, 0)) + std::abs(tr.u_f(k, 0));
    double& bucket = tr.t[k] < 250.0 ? early : late;
    bucket = std::max(bucket, v);
  }
  CHECK(std::isfinite(late));
  CHECK(late <= 2.0 * early);
}

TEST_CASE("trajectory csv") {
  const Trajectory tr = integrate(assemble_closed_loop(example_design()), FilteredSquareWave{}, ConstantSignal{10.0},
                                  0.002, 1e-3);
  std::ostringstream out;
  write_trajectory_csv(out, tr);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,x1,x2,xn1,xn2,e1,e2,u,un,uf,ua,ufl,dhat,d");
  std::string row;
  int rows = 0;
  while (std::getline(in, row)) ++rows;
  CHECK(rows == 3);
}
