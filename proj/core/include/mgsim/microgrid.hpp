#pragma once

#include <utility>

#include "mgsim/transfer_function.hpp"

namespace mgsim {

// Choice of power-system time-constant formula. kSwing is the
// swing-equation form T_p = 2H/(f0*D), dimensionally consistent with
// K_p = 1/D. kProduct (T_p = 2*H*D/f0) is kept as an opt-in compatibility
// mode for sources that print the product form; with typical parameters it
// yields sub-millisecond time constants.
enum class TpForm { kSwing, kProduct };

struct PowerSystemParams {
  double inertia_h = 1.0;    // s
  double damping_d = 0.0067; // Hz / pu MW
  double f_nominal = 50.0;   // Hz
  TpForm tp_form = TpForm::kSwing;

  double k_p() const { return 1.0 / damping_d; }
  double t_p() const;

  void validate() const;
};

// (k_p, t_p) for the block K_p/(1 + s T_p).
std::pair<double, double> power_system_gains(double h, double d, double f0,
                                             TpForm form = TpForm::kSwing);

struct LFCParams {
  double droop_r = 2.4;     // Hz/pu
  double t_gov = 0.0728;    // s, governor
  double t_diesel = 0.273;  // s, diesel engine
  double t_vsc = 0.04;      // s, PV-side converter
  double t_lc = 0.004;      // s, interfacing L-C filter
  PowerSystemParams power_system;

  void validate() const;
};

struct AVRParams {
  double k_a = 10.0, t_a = 0.1;  // amplifier
  double k_e = 1.0, t_e = 0.4;   // exciter
  double k_g = 1.0, t_g = 1.0;   // generator field
  double k_r = 1.0, t_r = 0.01;  // sensor

  void validate() const;
};

LFCParams lfc_params_default();
AVRParams avr_params_default();

// Frequency-regulation block set. Signals are deviations from the
// operating point: governor reference u, PV power and load power
// disturbances in pu on the DG base, frequency deviation in Hz.
struct LfcPlant {
  TransferFunction governor;      // 1/(1 + s t_gov)
  TransferFunction diesel;        // 1/(1 + s t_diesel)
  TransferFunction vsc;           // 1/(1 + s t_vsc)
  TransferFunction lc_filter;     // 1/(1 + s t_lc)
  TransferFunction power_system;  // k_p/(1 + s t_p)
  double droop_r = 2.4;

  // Governor -> diesel -> power system, droop loop open.
  TransferFunction open_path() const;
  // Delta-f response to the governor reference with droop closed.
  TransferFunction control_to_freq() const;
  // Delta-f response to net power injected at the swing bus, droop closed.
  TransferFunction disturbance_to_freq() const;
  // VSC and filter cascade shaping the PV power input.
  TransferFunction pv_path() const;
};

// Voltage-regulation block set; all signals in pu.
struct AvrPlant {
  TransferFunction amplifier;  // k_a/(1 + s t_a)
  TransferFunction exciter;    // k_e/(1 + s t_e)
  TransferFunction generator;  // k_g/(1 + s t_g)
  TransferFunction sensor;     // k_r/(1 + s t_r)

  TransferFunction forward_path() const;  // amplifier*exciter*generator
  TransferFunction open_loop() const;     // forward_path * sensor
  // Terminal voltage response to V_ref with sensor feedback, no controller.
  TransferFunction closed_loop_no_controller() const;
};

LfcPlant build_lfc(const LFCParams& params);
AvrPlant build_avr(const AVRParams& params);

}  // namespace mgsim
