#pragma once

namespace mgsim {

// Photovoltaic generator: power from irradiance and ambient temperature via
// the NOCT cell-temperature model and a linear efficiency derating.
struct PVParams {
  double area_a = 10.0;    // m^2
  double eta_r = 0.15;     // module reference efficiency
  double eta_i = 0.95;     // converter efficiency
  double n_temp = 0.004;   // 1/degC derating coefficient
  double t_ref = 25.0;     // degC reference cell temperature
  double noct = 45.0;      // degC nominal operating cell temperature

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Cell temperature T = T_ambient + (NOCT - 20)/800 * S_I.
double pv_cell_temp(double s_i, double t_ambient, const PVParams& params);

// P = S_I * eta_a * A with eta_a = eta_r * eta_i * (1 - n_temp*(T - T_ref)),
// clamped at zero when derating would drive the efficiency negative.
double pv_power(double s_i, double t_ambient, const PVParams& params);

}  // namespace mgsim
