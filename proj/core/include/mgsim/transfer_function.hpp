#pragma once

#include <complex>

#include "mgsim/polynomial.hpp"

namespace mgsim {

// Rational SISO LTI block num(s)/den(s). The denominator must not be
// identically zero; improper ratios are representable (needed transiently
// for inverse-based compositions) but cannot be realized in state space.
class TransferFunction {
 public:
  TransferFunction()
      : num_(Polynomial::constant(0.0)), den_(Polynomial::constant(1.0)) {}
  TransferFunction(Polynomial num, Polynomial den);

  static TransferFunction gain(double k);
  // gain / (1 + tau s); tau must be > 0.
  static TransferFunction first_order_lag(double gain, double tau);
  static TransferFunction integrator(double gain);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }

  int relative_degree() const { return den_.degree() - num_.degree(); }
  bool proper() const { return relative_degree() >= 0; }
  bool strictly_proper() const { return relative_degree() > 0; }

  // num(0)/den(0); +/-inf on a pole at the origin.
  double dc_gain() const;

  std::complex<double> eval(const std::complex<double>& s) const;

  // Same ratio with the denominator scaled to unity leading coefficient.
  TransferFunction normalized() const;
  // den/num; throws std::invalid_argument if the numerator is zero.
  TransferFunction inverse() const;

  friend bool operator==(const TransferFunction& a, const TransferFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  Polynomial num_;
  Polynomial den_;
};

// a followed by b; the result is normalized.
TransferFunction compose_series(const TransferFunction& a,
                                const TransferFunction& b);

// Negative-feedback closure forward/(1 + forward*feedback); normalized.
// Throws std::invalid_argument if the closed-loop denominator vanishes.
TransferFunction compose_feedback(const TransferFunction& forward,
                                  const TransferFunction& feedback);

}  // namespace mgsim
