#pragma once

#include "mgsim/transfer_function.hpp"

namespace mgsim {

// Low-pass filter Q(s) = 1/(lambda*s + 1)^order. Unity DC gain by
// construction; order must cover the relative degree of the plant the
// filter is paired with so that Q*Gn^{-1} stays proper.
struct QFilter {
  double lambda = 0.01;  // s
  int order = 1;
  TransferFunction tf;
};

// Builds Q with the exact binomial denominator expansion.
// Throws std::invalid_argument on lambda <= 0 or order < 1.
QFilter design_q(double lambda, int order);

// Closed-form |Q(j omega)| in dB: -10*order*log10(1 + (lambda*omega)^2).
double q_gain_db(const QFilter& q, double omega);
// Closed-form phase in degrees: -order*atan(lambda*omega)*180/pi.
double q_phase_deg(const QFilter& q, double omega);
// -3 dB cutoff: sqrt(2^(1/order) - 1)/lambda.
double q_cutoff(const QFilter& q);

}  // namespace mgsim
