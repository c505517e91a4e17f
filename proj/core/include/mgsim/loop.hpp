#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mgsim/microgrid.hpp"
#include "mgsim/noise.hpp"
#include "mgsim/pid.hpp"
#include "mgsim/trace.hpp"

namespace mgsim {

enum class LoopKind { kLfc, kAvr };

// Where the LFC feed-forward correction and observer input tap sit
// relative to the droop summing junction. The two choices realize the
// same estimator algebraically (the nominal plants differ exactly by the
// droop term); both are kept selectable.
enum class LfcInjection { kGovernorReference, kGovernorInput };

// How the AVR estimate is formed. kVoltageMismatch treats the voltage
// mismatch as an output-referred disturbance and estimates its
// input-equivalent through the inverse nominal plant,
// d_hat = [Q Gn^{-1}](V_s - V_ref); the feed-forward u = u_pid - d_hat
// then supplies exactly the drive the mismatch calls for, which speeds
// reference tracking. kInputEquivalent runs the generic two-branch
// estimator d_hat = [Q Gn^{-1}](y) - [Q](u) on the sensor output, which
// cancels input-side disturbances and model mismatch but is inert on a
// matched plant under pure reference steps.
enum class AvrObserverMode { kVoltageMismatch, kInputEquivalent };

struct ObserverSettings {
  bool enabled = false;
  double lambda = 0.01;  // s
  int order = 0;         // 0 = minimum admissible for the nominal plant
  double saturation = 10.0;
  AvrObserverMode avr_mode = AvrObserverMode::kVoltageMismatch;
  LfcInjection lfc_injection = LfcInjection::kGovernorReference;
};

// External step inputs, applied from t >= t_step (held thereafter).
struct StepInputs {
  double t_step = 1.0;
  double pv_step = 0.0;    // pu change in PV output (LFC)
  double load_step = 0.0;  // pu change in load power (LFC)
  double vref_step = 0.0;  // pu change in reference voltage (AVR)
};

struct ClosedLoopSpec {
  LoopKind kind = LoopKind::kLfc;
  LFCParams lfc;
  AVRParams avr;
  PIDGains controller;
  ObserverSettings observer;
  double measurement_delay = 0.0;  // s, sensor-to-controller path
  std::optional<NoiseSpec> load_noise;
  double dt = 1e-3;
};

// One assembled closed loop. All blocks are integrated as a single state
// vector with classical RK4 so the closed-loop trajectory keeps the
// solver's full order of accuracy. Channels:
//   LFC: delta_f, dp_dg, dp_pv, dp_load, d_hat, d_net, u
//   AVR: v_t, v_s, v_ref, v_err, d_hat, u
// d_net is the filtered net power mismatch dp_pv - dp_load, the measurable
// counterpart of the lumped disturbance (they agree at DC).
class LoopSimulation {
 public:
  LoopSimulation(const ClosedLoopSpec& spec, const StepInputs& inputs);
  LoopSimulation(LoopSimulation&&) noexcept;
  LoopSimulation& operator=(LoopSimulation&&) noexcept;
  ~LoopSimulation();

  // Runs from the quiescent state. Throws std::runtime_error naming the
  // divergence time on numerical blow-up. Repeatable: each call restarts
  // from t = 0 and identical specs give identical traces.
  Trace run(double horizon);

  // Delay actually applied after rounding to the sample grid.
  double applied_delay() const;
  const std::vector<std::string>& warnings() const;
  // Nominal plant the observer was designed against (empty when the
  // observer is disabled).
  const TransferFunction& observer_nominal() const;
  int observer_order() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

LoopSimulation assemble(const ClosedLoopSpec& spec,
                        const StepInputs& inputs = {});

}  // namespace mgsim
