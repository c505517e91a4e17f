#pragma once

namespace mgsim {

// Parallel-form PID: u = kp*e + ki*integral(e) + kd * d/dt(filtered e),
// derivative filtered by N/(s + N) with N = derivative_filter_n.
struct PIDGains {
  double kp = 0.0;
  double ki = 0.0;                   // 1/s
  double kd = 0.0;                   // s
  double derivative_filter_n = 100.0;

  void validate() const;
};

struct PidState {
  double integral = 0.0;
  double filtered = 0.0;
  double prev_error = 0.0;
  bool primed = false;
};

// One controller update: trapezoidal integrator, trapezoidal derivative
// filter. The first call primes the history with the current error so a
// constant error integrates exactly.
double pid_step(const PIDGains& gains, double error, PidState& state,
                double dt);

}  // namespace mgsim
