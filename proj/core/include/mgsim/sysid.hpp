#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "mgsim/transfer_function.hpp"

namespace mgsim {

// Uniformly sampled input/output record for identification.
struct IdDataset {
  double dt = 0.0;
  std::vector<double> u;
  std::vector<double> y;

  void validate() const;  // equal lengths, >= 30 samples, dt > 0
};

// Parses CSV with a header and time,u,y columns (by name when the header
// matches, positionally otherwise). Errors carry the 1-based line number.
IdDataset parse_id_dataset_csv(std::istream& is);
IdDataset load_id_dataset_csv(const std::string& path);

struct IdResult {
  TransferFunction model;  // b0 / (s^2 + a1 s + a0)
  double b0 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;
  double fit_percent = 0.0;  // 100*(1 - ||y - yhat|| / ||y - mean(y)||)
  bool stable = false;
};

// Continuous-time least squares for b0/(s^2 + a1 s + a0) using
// state-variable filtering: u and y pass through 1/(s/wf + 1)^2 style
// filters so the regression runs on smooth signals. svf_bandwidth = 0
// picks a bandwidth from the data and refines it once against the first
// fit's dominant pole. Throws std::runtime_error on rank deficiency.
IdResult fit_second_order(const IdDataset& data, double svf_bandwidth = 0.0);

struct StabilityCheck {
  bool stable = false;
  std::vector<std::complex<double>> closed_loop_poles;
};

// Closes the loop with an integral controller ki/s under unity feedback
// and reports the Routh verdict plus the closed-loop poles.
StabilityCheck verify_stability(const IdResult& result, double ki);

// Largest stable integral gain for b0/(s^2 + a1 s + a0): a1*a0/b0.
double critical_integral_gain(const IdResult& result);

}  // namespace mgsim
