#include "mgsim/pv.hpp"

#include <algorithm>
#include <stdexcept>

namespace mgsim {

void PVParams::validate() const {
  if (!(area_a > 0.0)) throw std::invalid_argument("pv.area_a must be > 0");
  if (!(eta_r > 0.0 && eta_r <= 1.0)) {
    throw std::invalid_argument("pv.eta_r must be in (0, 1]");
  }
  if (!(eta_i > 0.0 && eta_i <= 1.0)) {
    throw std::invalid_argument("pv.eta_i must be in (0, 1]");
  }
  if (n_temp < 0.0) throw std::invalid_argument("pv.n_temp must be >= 0");
}

double pv_cell_temp(double s_i, double t_ambient, const PVParams& params) {
  if (s_i < 0.0) throw std::invalid_argument("irradiance must be >= 0");
  return t_ambient + (params.noct - 20.0) / 800.0 * s_i;
}

double pv_power(double s_i, double t_ambient, const PVParams& params) {
  params.validate();
  const double t_pv = pv_cell_temp(s_i, t_ambient, params);
  const double eta_a =
      params.eta_r * params.eta_i * (1.0 - params.n_temp * (t_pv - params.t_ref));
  return s_i * std::max(eta_a, 0.0) * params.area_a;
}

}  // namespace mgsim
