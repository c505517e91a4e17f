#pragma once

#include <complex>
#include <vector>

#include "mgsim/transfer_function.hpp"

namespace mgsim {

struct FrequencyPoint {
  double omega;      // rad/s, > 0
  double gain_db;    // 20 log10 |H(j omega)|
  double phase_deg;  // mapped into (-360, 0]
};

// Throws std::invalid_argument on omega <= 0 or a pole exactly on j*omega.
FrequencyPoint frequency_response(const TransferFunction& tf, double omega);

// Log-spaced grid from omega_min to omega_max inclusive, points >= 2.
std::vector<double> log_space(double omega_min, double omega_max, int points);

std::vector<FrequencyPoint> frequency_sweep(const TransferFunction& tf,
                                            double omega_min, double omega_max,
                                            int points);

// Routh-Hurwitz verdict on a characteristic polynomial (ascending
// coefficients). Marginal cases (zero first-column entries, all-zero rows)
// report unstable; the verdict is invariant to scaling by a nonzero
// constant. Throws std::invalid_argument on the zero polynomial or
// degree < 1.
bool routh_hurwitz_stable(const Polynomial& charpoly);

// Roots via the companion-matrix eigenproblem, sorted by real part
// descending (imaginary part descending on ties).
std::vector<std::complex<double>> polynomial_roots(const Polynomial& p);
std::vector<std::complex<double>> poles(const TransferFunction& tf);

// First frequency at which the gain falls drop_db below the DC gain,
// located by bisection on a log grid; intended for low-pass responses.
double cutoff_frequency(const TransferFunction& tf, double drop_db = 3.0103,
                        double omega_lo = 1e-4, double omega_hi = 1e6);

}  // namespace mgsim
