#include "mgsim/pid.hpp"

#include <stdexcept>

namespace mgsim {

void PIDGains::validate() const {
  if (ki < 0.0) throw std::invalid_argument("controller.ki must be >= 0");
  if (kd < 0.0) throw std::invalid_argument("controller.kd must be >= 0");
  if (kd > 0.0 && !(derivative_filter_n > 0.0)) {
    throw std::invalid_argument(
        "controller.derivative_filter_n must be > 0 when kd > 0");
  }
}

double pid_step(const PIDGains& gains, double error, PidState& state,
                double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("pid_step needs dt > 0");
  if (!state.primed) {
    state.prev_error = error;
    state.filtered = error;
    state.primed = true;
  }

  state.integral += 0.5 * dt * (error + state.prev_error);

  double derivative = 0.0;
  if (gains.kd > 0.0) {
    const double a = 0.5 * gains.derivative_filter_n * dt;
    state.filtered = ((1.0 - a) * state.filtered +
                      a * (error + state.prev_error)) /
                     (1.0 + a);
    derivative = gains.derivative_filter_n * (error - state.filtered);
  }

  state.prev_error = error;
  return gains.kp * error + gains.ki * state.integral + gains.kd * derivative;
}

}  // namespace mgsim
