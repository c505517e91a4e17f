#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "mgsim/state_space.hpp"
#include "mgsim/transfer_function.hpp"
#include "test_util.hpp"

using mgsim::Polynomial;
using mgsim::StateSpaceModel;
using mgsim::TransferFunction;

namespace {
const std::complex<double> kJ(0.0, 1.0);
}

TEST_CASE("factories produce the expected ratios") {
  TransferFunction g = TransferFunction::gain(3.0);
  CHECK(g.dc_gain() == 3.0);
  CHECK(g.relative_degree() == 0);

  TransferFunction lag = TransferFunction::first_order_lag(2.0, 0.5);
  CHECK(lag.dc_gain() == doctest::Approx(2.0));
  CHECK(lag.relative_degree() == 1);
  // 2/(1 + 0.5 s) at s = 2j -> 2/(1+j) = 1 - j
  const auto v = lag.eval(2.0 * kJ);
  CHECK(v.real() == doctest::Approx(1.0));
  CHECK(v.imag() == doctest::Approx(-1.0));

  CHECK_THROWS_AS(TransferFunction::first_order_lag(1.0, 0.0),
                  std::invalid_argument);

  TransferFunction integ = TransferFunction::integrator(5.0);
  CHECK(std::isinf(integ.dc_gain()));
  CHECK(integ.eval(kJ) == std::complex<double>(0.0, -5.0));
}

TEST_CASE("denominator must not be identically zero") {
  CHECK_THROWS_AS(TransferFunction(Polynomial{1.0}, Polynomial{0.0}),
                  std::invalid_argument);
}

TEST_CASE("properness classification") {
  TransferFunction strictly(Polynomial{1.0}, Polynomial{1.0, 1.0});
  CHECK(strictly.proper());
  CHECK(strictly.strictly_proper());

  TransferFunction biproper(Polynomial{2.0, 1.0}, Polynomial{1.0, 1.0});
  CHECK(biproper.proper());
  CHECK_FALSE(biproper.strictly_proper());

  TransferFunction improper(Polynomial{0.0, 1.0}, Polynomial{1.0});  // s
  CHECK(improper.relative_degree() == -1);
  CHECK_FALSE(improper.proper());
}

TEST_CASE("normalized scales the denominator leading coefficient to one") {
  TransferFunction tf(Polynomial{2.0}, Polynomial{2.0, 4.0});
  TransferFunction n = tf.normalized();
  CHECK(n.den().leading() == doctest::Approx(1.0));
  CHECK(n.den().coeff(0) == doctest::Approx(0.5));
  CHECK(n.num().coeff(0) == doctest::Approx(0.5));
  // Same ratio at an arbitrary point.
  const auto s = std::complex<double>(0.3, 1.7);
  CHECK(std::abs(n.eval(s) - tf.eval(s)) < 1e-14);
}

TEST_CASE("inverse swaps numerator and denominator") {
  TransferFunction tf = TransferFunction::first_order_lag(2.0, 0.5);
  TransferFunction inv = tf.inverse();
  const auto s = std::complex<double>(0.1, 0.9);
  CHECK(std::abs(inv.eval(s) * tf.eval(s) - 1.0) < 1e-14);
  CHECK_THROWS_AS(TransferFunction().inverse(), std::invalid_argument);
}

TEST_CASE("series composition multiplies responses") {
  TransferFunction a = TransferFunction::first_order_lag(1.0, 0.1);
  TransferFunction b = TransferFunction::first_order_lag(2.0, 0.2);
  TransferFunction ab = compose_series(a, b);
  CHECK(ab.dc_gain() == doctest::Approx(2.0));
  CHECK(ab.den().leading() == doctest::Approx(1.0));  // normalized
  for (double w : {0.1, 1.0, 10.0}) {
    const auto s = w * kJ;
    CHECK(std::abs(ab.eval(s) - a.eval(s) * b.eval(s)) < 1e-12);
  }
}

TEST_CASE("negative feedback closure") {
  // G = 4/s under unity feedback -> 4/(s+4).
  TransferFunction g = TransferFunction::integrator(4.0);
  TransferFunction cl = compose_feedback(g, TransferFunction::gain(1.0));
  CHECK(cl.dc_gain() == doctest::Approx(1.0));
  const auto s = std::complex<double>(0.0, 2.0);
  CHECK(std::abs(cl.eval(s) - 4.0 / (s + 4.0)) < 1e-13);
}

TEST_CASE("eval equals num(s)/den(s)") {
  TransferFunction tf(Polynomial{1.0, 3.0}, Polynomial{2.0, 0.5, 1.0});
  const std::complex<double> s(0.7, -1.2);
  const auto expected = tf.num()(s) / tf.den()(s);
  CHECK(std::abs(tf.eval(s) - expected) < 1e-15);
}

TEST_CASE("state space realizes strictly proper blocks without feedthrough") {
  TransferFunction tf = TransferFunction::first_order_lag(2.0, 0.5);
  StateSpaceModel ss = StateSpaceModel::from_transfer_function(tf);
  CHECK(ss.order() == 1);
  CHECK(ss.d() == 0.0);

  // Unit step: y(t) = 2 (1 - exp(-2t)); RK4 at dt = 1e-3 tracks it to
  // solver accuracy.
  const double dt = 1e-3;
  double y = 0.0;
  for (int k = 0; k < 1000; ++k) y = ss.step_rk4(1.0, dt);
  CHECK(y == doctest::Approx(2.0 * (1.0 - std::exp(-2.0))).epsilon(1e-9));
}

TEST_CASE("state space biproper feedthrough") {
  TransferFunction tf(Polynomial{2.0, 1.0}, Polynomial{1.0, 1.0});
  StateSpaceModel ss = StateSpaceModel::from_transfer_function(tf);
  CHECK(ss.order() == 1);
  CHECK(ss.d() == doctest::Approx(1.0));
  // At t = 0+, y jumps by D * u.
  CHECK(ss.output(1.0) == doctest::Approx(1.0));
}

TEST_CASE("pure gains realize with order zero") {
  StateSpaceModel ss = mgsim::to_state_space(TransferFunction::gain(2.5));
  CHECK(ss.order() == 0);
  CHECK(ss.output(2.0) == doctest::Approx(5.0));
  CHECK(ss.step_rk4(2.0, 1e-3) == doctest::Approx(5.0));
}

TEST_CASE("improper blocks cannot be realized") {
  TransferFunction improper(Polynomial{0.0, 1.0}, Polynomial{1.0});
  CHECK_THROWS_AS(StateSpaceModel::from_transfer_function(improper),
                  std::invalid_argument);
}

TEST_CASE("response matches the transfer function on the imaginary axis") {
  TransferFunction tf(Polynomial{1.0, 0.2}, Polynomial{1.0, 0.8, 0.25, 1.0});
  StateSpaceModel ss = mgsim::to_state_space(tf);
  for (double w : {0.05, 0.7, 3.0, 40.0}) {
    const auto s = w * kJ;
    CHECK(std::abs(ss.response(s) - tf.eval(s)) < 1e-12);
  }
}

TEST_CASE("stateless derivative and output match stepping") {
  TransferFunction tf = TransferFunction::first_order_lag(1.0, 0.2);
  StateSpaceModel a = mgsim::to_state_space(tf);
  StateSpaceModel b = mgsim::to_state_space(tf);

  // Integrate b by hand with the same RK4 tableau.
  Eigen::VectorXd x = b.state();
  const double dt = 1e-3, u = 1.0;
  Eigen::VectorXd k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size());
  for (int i = 0; i < 100; ++i) {
    a.step_rk4(u, dt);
    b.derivative(x, u, k1);
    b.derivative(x + 0.5 * dt * k1, u, k2);
    b.derivative(x + 0.5 * dt * k2, u, k3);
    b.derivative(x + dt * k3, u, k4);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  CHECK(a.output(u) == doctest::Approx(b.output_at(x, u)).epsilon(1e-14));
}

TEST_CASE("set_state and reset") {
  StateSpaceModel ss =
      mgsim::to_state_space(TransferFunction::first_order_lag(1.0, 1.0));
  Eigen::VectorXd x(1);
  x << 0.7;
  ss.set_state(x);
  CHECK(ss.output(0.0) != 0.0);
  ss.reset();
  CHECK(ss.output(0.0) == 0.0);

  Eigen::VectorXd wrong(2);
  wrong << 1.0, 2.0;
  CHECK_THROWS_AS(ss.set_state(wrong), std::invalid_argument);
}

TEST_CASE("numerical blow-up raises a runtime error") {
  // 1/(s - 100) driven by a step grows as exp(100 t).
  TransferFunction unstable(Polynomial{1.0}, Polynomial{-100.0, 1.0});
  StateSpaceModel ss = mgsim::to_state_space(unstable);
  CHECK_THROWS_AS(
      [&] {
        for (int k = 0; k < 200000; ++k) ss.step_rk4(1.0, 1e-2);
      }(),
      std::runtime_error);
}
