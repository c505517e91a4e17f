#include "mgsim/transfer_function.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mgsim {

TransferFunction::TransferFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) {
    throw std::invalid_argument("transfer function denominator is zero");
  }
}

TransferFunction TransferFunction::gain(double k) {
  return {Polynomial::constant(k), Polynomial::constant(1.0)};
}

TransferFunction TransferFunction::first_order_lag(double gain, double tau) {
  if (!(tau > 0.0)) {
    throw std::invalid_argument("first-order lag needs tau > 0");
  }
  return {Polynomial::constant(gain), Polynomial{1.0, tau}};
}

TransferFunction TransferFunction::integrator(double gain) {
  return {Polynomial::constant(gain), Polynomial{0.0, 1.0}};
}

double TransferFunction::dc_gain() const {
  const double n0 = num_(0.0);
  const double d0 = den_(0.0);
  if (d0 == 0.0) {
    if (n0 == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::copysign(std::numeric_limits<double>::infinity(), n0);
  }
  return n0 / d0;
}

std::complex<double> TransferFunction::eval(const std::complex<double>& s) const {
  return num_(s) / den_(s);
}

TransferFunction TransferFunction::normalized() const {
  const double lead = den_.leading();
  return {(1.0 / lead) * num_, (1.0 / lead) * den_};
}

TransferFunction TransferFunction::inverse() const {
  if (num_.is_zero()) {
    throw std::invalid_argument("cannot invert a zero transfer function");
  }
  return {den_, num_};
}

TransferFunction compose_series(const TransferFunction& a,
                                const TransferFunction& b) {
  return TransferFunction(a.num() * b.num(), a.den() * b.den()).normalized();
}

TransferFunction compose_feedback(const TransferFunction& forward,
                                  const TransferFunction& feedback) {
  // forward/(1 + forward*feedback) over a common denominator.
  Polynomial num = forward.num() * feedback.den();
  Polynomial den =
      forward.den() * feedback.den() + forward.num() * feedback.num();
  if (den.is_zero()) {
    throw std::invalid_argument("feedback composition cancels exactly");
  }
  return TransferFunction(std::move(num), std::move(den)).normalized();
}

}  // namespace mgsim
