#include "mgsim/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace mgsim {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double to_unit(std::uint64_t h) {
  // 53 high bits -> [0, 1).
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

void NoiseSpec::validate() const {
  if (sigma < 0.0) throw std::invalid_argument("noise.sigma must be >= 0");
  if (!(hold_interval > 0.0)) {
    throw std::invalid_argument("noise.hold_interval must be > 0");
  }
}

double inject_load_noise(const NoiseSpec& spec, double base_load, double t) {
  if (spec.sigma == 0.0) return base_load;
  spec.validate();

  const double idx_f = std::floor(std::max(t, 0.0) / spec.hold_interval);
  const auto index = static_cast<std::uint64_t>(idx_f);

  // Counter-based draw: two uniforms from (seed, interval index), then
  // Box-Muller. Pure in (spec, t), so parallel evaluation order is moot.
  const std::uint64_t h0 = splitmix64(spec.seed ^ 0x6a09e667f3bcc908ULL);
  const std::uint64_t h1 = splitmix64(h0 ^ index);
  const std::uint64_t h2 = splitmix64(h1 ^ 0xbb67ae8584caa73bULL);
  double u1 = to_unit(h1);
  const double u2 = to_unit(h2);
  if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;

  const double z =
      std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  return base_load + spec.sigma * z;
}

}  // namespace mgsim
