#include "mgsim/qfilter.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mgsim {

QFilter design_q(double lambda, int order) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("q-filter lambda must be > 0");
  }
  if (order < 1) {
    throw std::invalid_argument("q-filter order must be >= 1");
  }

  // (lambda*s + 1)^order by binomial expansion: coeff of s^k is
  // C(order, k) * lambda^k.
  std::vector<double> den(static_cast<std::size_t>(order) + 1);
  double binom = 1.0;
  for (int k = 0; k <= order; ++k) {
    den[static_cast<std::size_t>(k)] = binom * std::pow(lambda, k);
    binom = binom * (order - k) / (k + 1);
  }

  QFilter q;
  q.lambda = lambda;
  q.order = order;
  q.tf = TransferFunction(Polynomial::constant(1.0), Polynomial(std::move(den)));
  return q;
}

double q_gain_db(const QFilter& q, double omega) {
  const double x = q.lambda * omega;
  return -10.0 * q.order * std::log10(1.0 + x * x);
}

double q_phase_deg(const QFilter& q, double omega) {
  return -q.order * std::atan(q.lambda * omega) * 180.0 / M_PI;
}

double q_cutoff(const QFilter& q) {
  return std::sqrt(std::pow(2.0, 1.0 / q.order) - 1.0) / q.lambda;
}

}  // namespace mgsim
