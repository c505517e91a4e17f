#pragma once

#include <cstdint>

namespace mgsim {

// Piecewise-constant Gaussian load noise: a fresh zero-mean sample with
// standard deviation sigma is held over each hold_interval.
struct NoiseSpec {
  double sigma = 0.0;          // pu
  double hold_interval = 0.01; // s
  std::uint64_t seed = 0;

  void validate() const;
};

// base_load plus the held sample for time t. Pure in (spec, t): the sample
// is derived from the seed and the interval index with a counter-based
// generator, so evaluation order and parallelism cannot change results.
double inject_load_noise(const NoiseSpec& spec, double base_load, double t);

}  // namespace mgsim
