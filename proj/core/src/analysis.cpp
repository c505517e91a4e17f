#include "mgsim/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mgsim {

FrequencyPoint frequency_response(const TransferFunction& tf, double omega) {
  if (!(omega > 0.0)) {
    throw std::invalid_argument("frequency must be > 0");
  }
  const std::complex<double> s(0.0, omega);
  const std::complex<double> d = tf.den()(s);
  if (std::abs(d) == 0.0) {
    throw std::invalid_argument("pole on the imaginary axis at this frequency");
  }
  const std::complex<double> h = tf.num()(s) / d;

  FrequencyPoint pt;
  pt.omega = omega;
  pt.gain_db = 20.0 * std::log10(std::abs(h));
  double deg = std::arg(h) * 180.0 / M_PI;  // principal value (-180, 180]
  if (deg > 0.0) deg -= 360.0;
  pt.phase_deg = deg;
  return pt;
}

std::vector<double> log_space(double omega_min, double omega_max, int points) {
  if (!(omega_min > 0.0) || !(omega_max > omega_min)) {
    throw std::invalid_argument("need 0 < omega_min < omega_max");
  }
  if (points < 2) throw std::invalid_argument("need at least 2 grid points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double l0 = std::log10(omega_min);
  const double l1 = std::log10(omega_max);
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] =
        std::pow(10.0, l0 + (l1 - l0) * i / (points - 1));
  }
  grid.front() = omega_min;
  grid.back() = omega_max;
  return grid;
}

std::vector<FrequencyPoint> frequency_sweep(const TransferFunction& tf,
                                            double omega_min, double omega_max,
                                            int points) {
  std::vector<FrequencyPoint> out;
  out.reserve(static_cast<std::size_t>(points));
  for (double w : log_space(omega_min, omega_max, points)) {
    out.push_back(frequency_response(tf, w));
  }
  return out;
}

bool routh_hurwitz_stable(const Polynomial& charpoly) {
  if (charpoly.is_zero()) {
    throw std::invalid_argument("zero polynomial has no stability verdict");
  }
  const int n = charpoly.degree();
  if (n < 1) {
    throw std::invalid_argument("constant polynomial has no stability verdict");
  }

  // Descending coefficients, scaled so the leading coefficient is positive;
  // the verdict is invariant to any nonzero overall scale.
  std::vector<double> c(static_cast<std::size_t>(n) + 1);
  const double sign = charpoly.leading() > 0.0 ? 1.0 : -1.0;
  for (int k = 0; k <= n; ++k) {
    c[static_cast<std::size_t>(n - k)] = sign * charpoly.coeff(k);
  }

  // Necessary condition: every coefficient strictly positive. Zero or
  // negative entries (marginal cases included) report unstable.
  for (double v : c) {
    if (!(v > 0.0)) return false;
  }

  // A zero first-column entry anywhere in the array already rules out
  // strict Hurwitz stability, so each pivot must stay strictly positive;
  // that also keeps every division well defined.
  const std::size_t cols = static_cast<std::size_t>(n) / 2 + 1;
  std::vector<double> prev(cols, 0.0), curr(cols, 0.0), next(cols, 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    prev[j] = (2 * j <= static_cast<std::size_t>(n)) ? c[2 * j] : 0.0;
    curr[j] = (2 * j + 1 <= static_cast<std::size_t>(n)) ? c[2 * j + 1] : 0.0;
  }
  for (int row = 2; row <= n; ++row) {
    const double pivot = curr[0];
    if (!(pivot > 0.0)) return false;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      next[j] = (pivot * prev[j + 1] - prev[0] * curr[j + 1]) / pivot;
    }
    next[cols - 1] = 0.0;
    std::swap(prev, curr);
    std::swap(curr, next);
  }
  return curr[0] > 0.0;
}

std::vector<std::complex<double>> polynomial_roots(const Polynomial& p) {
  if (p.is_zero() || p.degree() < 1) {
    throw std::invalid_argument("roots need a polynomial of degree >= 1");
  }
  const int n = p.degree();
  const double lead = p.leading();

  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) comp(i + 1, i) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.coeff(i) / lead;

  Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  }
  std::sort(roots.begin(), roots.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() > b.real();
              return a.imag() > b.imag();
            });
  return roots;
}

std::vector<std::complex<double>> poles(const TransferFunction& tf) {
  return polynomial_roots(tf.den());
}

double cutoff_frequency(const TransferFunction& tf, double drop_db,
                        double omega_lo, double omega_hi) {
  const double dc = std::abs(tf.dc_gain());
  if (!std::isfinite(dc) || dc == 0.0) {
    throw std::invalid_argument("cutoff needs a finite nonzero DC gain");
  }
  const double target_db = 20.0 * std::log10(dc) - drop_db;
  auto gain_at = [&](double w) { return frequency_response(tf, w).gain_db; };

  if (gain_at(omega_lo) < target_db) {
    throw std::invalid_argument("gain already below target at omega_lo");
  }
  if (gain_at(omega_hi) > target_db) {
    throw std::invalid_argument("gain still above target at omega_hi");
  }
  double lo = omega_lo, hi = omega_hi;
  for (int i = 0; i < 200; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (gain_at(mid) > target_db) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

}  // namespace mgsim
