#include <doctest.h>

#include <cmath>
#include <random>

#include "symbiotic/errors.hpp"
#include "symbiotic/lti.hpp"

using namespace symbiotic;

namespace {

Complex tf(const std::vector<double>& num, const std::vector<double>& den, Complex s) {
  auto poly = [&](const std::vector<double>& c) {
    Complex v(0.0);
    for (double k : c) v = v * s + k;
    return v;
  };
  return poly(num) / poly(den);
}

}  // namespace

TEST_CASE("system validation") {
  CHECK_THROWS_AS(LtiSystem(Matrix(2, 3), Matrix(2, 1), Matrix(1, 2), Matrix(1, 1)), DimensionError);
  CHECK_THROWS_AS(LtiSystem(Matrix(2, 2), Matrix(3, 1), Matrix(1, 2), Matrix(1, 1)), DimensionError);
  CHECK_THROWS_AS(LtiSystem(Matrix(2, 2), Matrix(2, 1), Matrix(1, 3), Matrix(1, 1)), DimensionError);
  CHECK_THROWS_AS(LtiSystem(Matrix(2, 2), Matrix(2, 1), Matrix(1, 2), Matrix(2, 1)), DimensionError);
  const LtiSystem ok(Matrix(2, 2), Matrix(2, 1), Matrix(1, 2), Matrix(1, 1));
  CHECK(ok.is_siso());
  CHECK(ok.state_dim() == 2);
}

TEST_CASE("transfer function realization matches polynomial ratio") {
  const std::vector<double> num{0.57, 0.16};
  const std::vector<double> den{1.0, 0.0, 0.0};
  const LtiSystem sys = from_transfer_function(num, den);
  CHECK(sys.state_dim() == 2);
  for (double w : {0.1, 1.0, 7.0}) {
    const Complex s(0.0, w);
    CHECK(std::abs(evaluate_siso(sys, s) - tf(num, den, s)) <= 1e-12 * std::abs(tf(num, den, s)));
  }
  // value at w = 1 of (0.57 s + 0.16) / s^2
  const Complex at1 = evaluate_siso(sys, Complex(0.0, 1.0));
  CHECK(at1.real() == doctest::Approx(-0.16));
  CHECK(at1.imag() == doctest::Approx(-0.57));
}

TEST_CASE("biproper transfer function keeps feedthrough") {
  const LtiSystem sys = from_transfer_function({2.0, 3.0}, {1.0, 1.0});
  CHECK(sys.d(0, 0) == doctest::Approx(2.0));
  const Complex s(0.3, 2.0);
  CHECK(std::abs(evaluate_siso(sys, s) - tf({2.0, 3.0}, {1.0, 1.0}, s)) <= 1e-12);
  CHECK_THROWS_AS(from_transfer_function({1.0, 0.0, 0.0}, {1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(from_transfer_function({1.0}, {0.0, 1.0}), ConfigError);
}

TEST_CASE("series composes transfer functions") {
  const std::vector<double> n1{1.0}, d1{1.0, 2.0}, n2{3.0, 1.0}, d2{1.0, 0.5, 4.0};
  const LtiSystem g = series(from_transfer_function(n1, d1), from_transfer_function(n2, d2));
  CHECK(g.state_dim() == 3);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 20; ++k) {
    const Complex s(u(rng), u(rng));
    const Complex want = tf(n1, d1, s) * tf(n2, d2, s);
    CHECK(std::abs(evaluate_siso(g, s) - want) <= 1e-10 * std::max(1.0, std::abs(want)));
  }
  CHECK_THROWS_AS(series(static_gain(Matrix{{1.0, 2.0}}), static_gain(Matrix{{1.0, 2.0}})), DimensionError);
}

TEST_CASE("negative feedback closes the loop") {
  // 1/s in unity feedback is 1/(s+1)
  const LtiSystem cl = negative_feedback(from_transfer_function({1.0}, {1.0, 0.0}));
  CHECK(cl.a(0, 0) == doctest::Approx(-1.0));
  const Complex s(0.0, 2.0);
  CHECK(std::abs(evaluate_siso(cl, s) - 1.0 / (s + 1.0)) <= 1e-14);
  // with feedthrough: G = (s+2)/(s+1) -> G / (1 + G)
  const LtiSystem g = from_transfer_function({1.0, 2.0}, {1.0, 1.0});
  const Complex gv = evaluate_siso(g, s);
  CHECK(std::abs(evaluate_siso(negative_feedback(g), s) - gv / (1.0 + gv)) <= 1e-13);
}

TEST_CASE("select inputs and scale output") {
  const LtiSystem sys(Matrix{{-1.0}}, Matrix{{1.0, 2.0, 3.0}}, Matrix{{1.0}}, Matrix{{0.0, 0.0, 4.0}});
  const LtiSystem sel = select_inputs(sys, {2, 0});
  CHECK(sel.b == Matrix{{3.0, 1.0}});
  CHECK(sel.d == Matrix{{4.0, 0.0}});
  CHECK_THROWS_AS(select_inputs(sys, {3}), DimensionError);
  const LtiSystem neg = scale_output(sys, -2.0);
  CHECK(neg.c == Matrix{{-2.0}});
  CHECK(neg.d == Matrix{{-0.0, -0.0, -8.0}});
}

TEST_CASE("evaluate at a pole") {
  const LtiSystem integ = from_transfer_function({1.0}, {1.0, 0.0});
  CHECK_THROWS_AS(evaluate_siso(integ, Complex(0.0, 0.0)), NearPoleError);
}
