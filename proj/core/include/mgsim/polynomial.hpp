#pragma once

#include <complex>
#include <initializer_list>
#include <string>
#include <vector>

namespace mgsim {

// Real polynomial in s, coefficients stored in ascending power order
// (coeffs()[k] multiplies s^k). The representation is kept trimmed: the
// leading coefficient is nonzero unless the polynomial is identically zero,
// in which case a single zero coefficient remains.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  Polynomial(std::initializer_list<double> coeffs);
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial constant(double value) { return Polynomial{value}; }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }

  // Coefficient of s^power; zero outside the stored range.
  double coeff(int power) const;
  double leading() const { return coeffs_.back(); }
  const std::vector<double>& coeffs() const { return coeffs_; }

  // Horner evaluation.
  double operator()(double s) const;
  std::complex<double> operator()(const std::complex<double>& s) const;

  Polynomial& operator*=(double factor);
  Polynomial& operator+=(const Polynomial& other);

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double k, const Polynomial& p);
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

  std::string to_string(const std::string& var = "s") const;

 private:
  void trim();
  std::vector<double> coeffs_;
};

}  // namespace mgsim
