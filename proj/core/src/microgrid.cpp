#include "mgsim/microgrid.hpp"

#include <stdexcept>

namespace mgsim {

void PowerSystemParams::validate() const {
  if (!(inertia_h > 0.0)) {
    throw std::invalid_argument("power_system.inertia_h must be > 0");
  }
  if (!(damping_d > 0.0)) {
    throw std::invalid_argument("power_system.damping_d must be > 0");
  }
  if (!(f_nominal > 0.0)) {
    throw std::invalid_argument("power_system.f_nominal must be > 0");
  }
}

double PowerSystemParams::t_p() const {
  return power_system_gains(inertia_h, damping_d, f_nominal, tp_form).second;
}

std::pair<double, double> power_system_gains(double h, double d, double f0,
                                             TpForm form) {
  if (!(h > 0.0 && d > 0.0 && f0 > 0.0)) {
    throw std::invalid_argument("power system parameters must be > 0");
  }
  const double k_p = 1.0 / d;
  const double t_p = form == TpForm::kSwing ? 2.0 * h / (f0 * d)
                                            : 2.0 * h * d / f0;
  return {k_p, t_p};
}

void LFCParams::validate() const {
  if (!(droop_r > 0.0)) throw std::invalid_argument("lfc.droop_r must be > 0");
  if (!(t_gov > 0.0)) throw std::invalid_argument("lfc.t_gov must be > 0");
  if (!(t_diesel > 0.0)) {
    throw std::invalid_argument("lfc.t_diesel must be > 0");
  }
  if (!(t_vsc > 0.0)) throw std::invalid_argument("lfc.t_vsc must be > 0");
  if (!(t_lc > 0.0)) throw std::invalid_argument("lfc.t_lc must be > 0");
  power_system.validate();
}

void AVRParams::validate() const {
  auto check = [](double v, const char* what) {
    if (!(v > 0.0)) {
      throw std::invalid_argument(std::string("avr.") + what + " must be > 0");
    }
  };
  check(k_a, "k_a");
  check(t_a, "t_a");
  check(k_e, "k_e");
  check(t_e, "t_e");
  check(k_g, "k_g");
  check(t_g, "t_g");
  check(k_r, "k_r");
  check(t_r, "t_r");
}

LFCParams lfc_params_default() { return LFCParams{}; }
AVRParams avr_params_default() { return AVRParams{}; }

TransferFunction LfcPlant::open_path() const {
  return compose_series(compose_series(governor, diesel), power_system);
}

TransferFunction LfcPlant::control_to_freq() const {
  return compose_feedback(open_path(), TransferFunction::gain(1.0 / droop_r));
}

TransferFunction LfcPlant::disturbance_to_freq() const {
  const TransferFunction droop_branch = compose_series(
      compose_series(governor, diesel), TransferFunction::gain(1.0 / droop_r));
  return compose_feedback(power_system, droop_branch);
}

TransferFunction LfcPlant::pv_path() const {
  return compose_series(vsc, lc_filter);
}

TransferFunction AvrPlant::forward_path() const {
  return compose_series(compose_series(amplifier, exciter), generator);
}

TransferFunction AvrPlant::open_loop() const {
  return compose_series(forward_path(), sensor);
}

TransferFunction AvrPlant::closed_loop_no_controller() const {
  return compose_feedback(forward_path(), sensor);
}

LfcPlant build_lfc(const LFCParams& params) {
  params.validate();
  const auto [k_p, t_p] = power_system_gains(
      params.power_system.inertia_h, params.power_system.damping_d,
      params.power_system.f_nominal, params.power_system.tp_form);

  LfcPlant plant;
  plant.governor = TransferFunction::first_order_lag(1.0, params.t_gov);
  plant.diesel = TransferFunction::first_order_lag(1.0, params.t_diesel);
  plant.vsc = TransferFunction::first_order_lag(1.0, params.t_vsc);
  plant.lc_filter = TransferFunction::first_order_lag(1.0, params.t_lc);
  plant.power_system = TransferFunction::first_order_lag(k_p, t_p);
  plant.droop_r = params.droop_r;
  return plant;
}

AvrPlant build_avr(const AVRParams& params) {
  params.validate();
  AvrPlant plant;
  plant.amplifier = TransferFunction::first_order_lag(params.k_a, params.t_a);
  plant.exciter = TransferFunction::first_order_lag(params.k_e, params.t_e);
  plant.generator = TransferFunction::first_order_lag(params.k_g, params.t_g);
  plant.sensor = TransferFunction::first_order_lag(params.k_r, params.t_r);
  return plant;
}

}  // namespace mgsim
