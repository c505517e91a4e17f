#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "mgsim/analysis.hpp"
#include "test_util.hpp"

using namespace mgsim;

TEST_CASE("first-order lag response at the corner frequency") {
  TransferFunction lag = TransferFunction::first_order_lag(1.0, 1.0);
  FrequencyPoint p = frequency_response(lag, 1.0);
  CHECK(p.omega == 1.0);
  CHECK(p.gain_db == doctest::Approx(-10.0 * std::log10(2.0)).epsilon(1e-12));
  CHECK(p.phase_deg == doctest::Approx(-45.0).epsilon(1e-12));
}

TEST_CASE("phase is mapped into (-360, 0]") {
  CHECK(frequency_response(TransferFunction::gain(10.0), 1.0).phase_deg == 0.0);
  CHECK(frequency_response(TransferFunction::gain(10.0), 1.0).gain_db ==
        doctest::Approx(20.0));

  // 1/s^2: -180 degrees.
  TransferFunction dbl(Polynomial{1.0}, Polynomial{0.0, 0.0, 1.0});
  CHECK(frequency_response(dbl, 2.0).phase_deg == doctest::Approx(-180.0));

  // 1/s^3: -270 degrees.
  TransferFunction trpl(Polynomial{1.0}, Polynomial{0.0, 0.0, 0.0, 1.0});
  CHECK(frequency_response(trpl, 2.0).phase_deg == doctest::Approx(-270.0));

  // A differentiator leads by +90, which maps to -270.
  TransferFunction diff(Polynomial{0.0, 1.0}, Polynomial{1.0});
  CHECK(frequency_response(diff, 1.0).phase_deg == doctest::Approx(-270.0));
}

TEST_CASE("frequency_response rejects bad evaluation points") {
  TransferFunction lag = TransferFunction::first_order_lag(1.0, 1.0);
  CHECK_THROWS_AS(frequency_response(lag, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(frequency_response(lag, -1.0), std::invalid_argument);

  // Pole exactly on the evaluation frequency.
  TransferFunction osc(Polynomial{1.0}, Polynomial{1.0, 0.0, 1.0});
  CHECK_THROWS_AS(frequency_response(osc, 1.0), std::invalid_argument);
}

TEST_CASE("log_space spans the range inclusively") {
  const auto grid = log_space(1e-2, 1e3, 11);
  CHECK(grid.size() == 11);
  CHECK(grid.front() == 1e-2);
  CHECK(grid.back() == 1e3);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  CHECK(grid[2] / grid[1] == doctest::Approx(grid[1] / grid[0]).epsilon(1e-12));

  CHECK_THROWS_AS(log_space(0.0, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(log_space(1.0, 0.5, 5), std::invalid_argument);
  CHECK_THROWS_AS(log_space(1.0, 2.0, 1), std::invalid_argument);
}

TEST_CASE("frequency_sweep evaluates on the log grid") {
  TransferFunction lag = TransferFunction::first_order_lag(1.0, 1.0);
  const auto pts = frequency_sweep(lag, 0.1, 10.0, 21);
  CHECK(pts.size() == 21);
  CHECK(pts.front().omega == 0.1);
  CHECK(pts.back().omega == 10.0);
  // Low-pass: gain decreases monotonically with frequency.
  for (std::size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i].gain_db < pts[i - 1].gain_db);
  }
}

TEST_CASE("Routh-Hurwitz verdicts on hand-checked polynomials") {
  CHECK(routh_hurwitz_stable(Polynomial{1.0, 1.0}));            // s + 1
  CHECK_FALSE(routh_hurwitz_stable(Polynomial{-1.0, 1.0}));     // s - 1
  CHECK(routh_hurwitz_stable(Polynomial{1.0, 1.0, 1.0}));       // s^2+s+1
  CHECK_FALSE(routh_hurwitz_stable(Polynomial{1.0, 0.0, 1.0})); // s^2+1
  // (s+1)(s^2+1): marginal pair reports unstable.
  CHECK_FALSE(routh_hurwitz_stable(Polynomial{1.0, 1.0, 1.0, 1.0}));
  CHECK(routh_hurwitz_stable(Polynomial{1.0, 3.0, 2.0, 1.0}));
  // s^3 + s^2 + s + 2 has a right-half-plane pair.
  CHECK_FALSE(routh_hurwitz_stable(Polynomial{2.0, 1.0, 1.0, 1.0}));
}

TEST_CASE("Routh verdict is scale invariant") {
  Polynomial stable{1.0, 3.0, 2.0, 1.0};
  CHECK(routh_hurwitz_stable(3.0 * stable));
  CHECK(routh_hurwitz_stable(-2.5 * stable));
  Polynomial unstable{2.0, 1.0, 1.0, 1.0};
  CHECK_FALSE(routh_hurwitz_stable(-1.0 * unstable));
}

TEST_CASE("Routh rejects degenerate inputs") {
  CHECK_THROWS_AS(routh_hurwitz_stable(Polynomial{}), std::invalid_argument);
  CHECK_THROWS_AS(routh_hurwitz_stable(Polynomial{5.0}), std::invalid_argument);
}

TEST_CASE("polynomial roots are sorted and accurate") {
  // s^2 - 3s + 2 = (s-1)(s-2), sorted by real part descending.
  auto r = polynomial_roots(Polynomial{2.0, -3.0, 1.0});
  REQUIRE(r.size() == 2);
  CHECK(r[0].real() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r[1].real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(r[0].imag()) < 1e-12);

  // s^2 + 2s + 5 -> -1 +/- 2j, positive imaginary part first.
  auto c = polynomial_roots(Polynomial{5.0, 2.0, 1.0});
  REQUIRE(c.size() == 2);
  CHECK(c[0].real() == doctest::Approx(-1.0));
  CHECK(c[0].imag() == doctest::Approx(2.0));
  CHECK(c[1].imag() == doctest::Approx(-2.0));
}

TEST_CASE("poles of a transfer function are the denominator roots") {
  TransferFunction tf(Polynomial{1.0}, Polynomial{2.0, 3.0, 1.0});
  auto p = poles(tf);
  REQUIRE(p.size() == 2);
  CHECK(p[0].real() == doctest::Approx(-1.0));
  CHECK(p[1].real() == doctest::Approx(-2.0));
}

TEST_CASE("cutoff frequency of a unit lag sits at the corner") {
  TransferFunction lag = TransferFunction::first_order_lag(1.0, 1.0);
  CHECK(cutoff_frequency(lag) == doctest::Approx(1.0).epsilon(1e-4));
  // Scaling tau scales the corner.
  TransferFunction slow = TransferFunction::first_order_lag(1.0, 10.0);
  CHECK(cutoff_frequency(slow) == doctest::Approx(0.1).epsilon(1e-4));
}

TEST_CASE("Routh agrees with the eigenvalue oracle on random polynomials") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  int checked = 0;
  int disagreements = 0;
  while (checked < 1000) {
    const int degree = 1 + static_cast<int>(rng() % 8);
    std::vector<double> c(static_cast<std::size_t>(degree) + 1);
    for (auto& v : c) v = coeff(rng);
    if (std::abs(c.back()) < 0.2) c.back() = c.back() < 0 ? -0.5 : 0.5;
    const Polynomial p{std::vector<double>(c)};

    const auto roots = polynomial_roots(p);
    double max_re = -1e300, max_mag = 0.0;
    for (const auto& r : roots) {
      max_re = std::max(max_re, r.real());
      max_mag = std::max(max_mag, std::abs(r));
    }
    // Skip near-marginal draws where the verdict is ill-conditioned.
    if (std::abs(max_re) < 1e-8 * std::max(1.0, max_mag)) continue;

    const bool pole_stable = max_re < 0.0;
    if (routh_hurwitz_stable(p) != pole_stable) ++disagreements;
    ++checked;
  }
  CHECK(checked == 1000);
  CHECK(disagreements == 0);
}
