#include "mgsim/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mgsim {

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

Polynomial::Polynomial(std::initializer_list<double> coeffs)
    : Polynomial(std::vector<double>(coeffs)) {}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw std::invalid_argument("polynomial needs at least one coefficient");
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("polynomial coefficients must be finite");
    }
  }
  trim();
}

void Polynomial::trim() {
  const double tol = 1e-14 * max_abs(coeffs_);
  while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= tol) {
    coeffs_.pop_back();
  }
  if (coeffs_.size() == 1 && std::abs(coeffs_[0]) <= 0.0) {
    coeffs_[0] = 0.0;
  }
}

double Polynomial::coeff(int power) const {
  if (power < 0 || power >= static_cast<int>(coeffs_.size())) return 0.0;
  return coeffs_[static_cast<std::size_t>(power)];
}

double Polynomial::operator()(double s) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * s + *it;
  }
  return acc;
}

std::complex<double> Polynomial::operator()(const std::complex<double>& s) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * s + *it;
  }
  return acc;
}

Polynomial& Polynomial::operator*=(double factor) {
  for (double& c : coeffs_) c *= factor;
  trim();
  return *this;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  *this = *this + other;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial{};
  std::vector<double> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return Polynomial(std::move(out));
}

Polynomial operator*(double k, const Polynomial& p) {
  Polynomial out = p;
  out *= k;
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> out(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
  }
  return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  return a + (-1.0 * b);
}

std::string Polynomial::to_string(const std::string& var) const {
  std::string out;
  char buf[64];
  for (int k = degree(); k >= 0; --k) {
    const double c = coeff(k);
    if (c == 0.0 && degree() > 0) continue;
    if (!out.empty()) out += (c < 0 ? " - " : " + ");
    const double mag = out.empty() ? c : std::abs(c);
    std::snprintf(buf, sizeof(buf), "%.6g", mag);
    if (k == 0) {
      out += buf;
    } else {
      if (std::abs(mag) != 1.0) {
        out += buf;
        out += "*";
      } else if (mag == -1.0) {
        out += "-";
      }
      out += var;
      if (k > 1) {
        std::snprintf(buf, sizeof(buf), "^%d", k);
        out += buf;
      }
    }
  }
  if (out.empty()) out = "0";
  return out;
}

}  // namespace mgsim
