#include "mgsim/loop.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mgsim/observer.hpp"
#include "mgsim/qfilter.hpp"
#include "mgsim/state_space.hpp"

namespace mgsim {

namespace {

struct Block {
  StateSpaceModel ss;
  int off = 0;

  int order() const { return ss.order(); }
};

constexpr double kBlowUpBound = 1e12;

}  // namespace

struct LoopSimulation::Impl {
  ClosedLoopSpec spec;
  StepInputs inputs;

  // LFC chain.
  Block gov, diesel, vsc, lc, psys;
  double droop_r = 0.0;
  // AVR chain.
  Block amp, exc, gen, sensor;

  // Controller states inside the global vector.
  int i_int = -1;
  int i_flt = -1;
  bool has_flt = false;

  // Observer branches. Input-equivalent mode uses yq/xq; the AVR
  // voltage-mismatch mode uses the single Q branch qm.
  bool obs_on = false;
  bool mismatch_mode = false;
  Block oyq, oxq, oqm;
  double sat = 10.0;
  TransferFunction nominal;
  int obs_order = 0;

  int nx = 0;
  int delay_steps = 0;
  double applied_delay = 0.0;
  std::vector<std::string> warnings;

  struct Held {
    double pv = 0.0;
    double load = 0.0;
    double vref = 0.0;
    double meas = 0.0;
  };

  struct Signals {
    double e = 0.0;
    double u_pid = 0.0;
    double d_hat = 0.0;
    double u_cmd = 0.0;
    double df = 0.0, dp_dg = 0.0, dp_pv = 0.0;
    double v_t = 0.0, v_s = 0.0;
    double feedback = 0.0;  // the signal the delay line carries
    double meas = 0.0;      // what the controllers see (delayed when set)
  };

  double bout(const Block& b, const Eigen::VectorXd& x, double u = 0.0) const {
    return b.ss.output_at(x.segment(b.off, b.order()), u);
  }

  void bderiv(const Block& b, const Eigen::VectorXd& x, double u,
              Eigen::VectorXd& dx) const {
    if (b.order() == 0) return;
    dx.segment(b.off, b.order()) =
        b.ss.a() * x.segment(b.off, b.order()) + b.ss.b() * u;
  }

  double pid_output(const Eigen::VectorXd& x, double e) const {
    const PIDGains& g = spec.controller;
    double u = g.kp * e + g.ki * x[i_int];
    if (has_flt) {
      u += g.kd * g.derivative_filter_n * (e - x[i_flt]);
    }
    return u;
  }

  Signals signals(const Eigen::VectorXd& x, const Held& held) const {
    Signals s;
    if (spec.kind == LoopKind::kLfc) {
      s.df = bout(psys, x);
      s.feedback = s.df;
      s.meas = delay_steps > 0 ? held.meas : s.df;
      s.e = -s.meas;
      s.u_pid = pid_output(x, s.e);
      s.dp_pv = bout(lc, x);
      s.dp_dg = bout(diesel, x);
      if (obs_on) {
        const double raw = bout(oyq, x, s.df) - bout(oxq, x);
        s.d_hat = std::clamp(raw, -sat, sat);
      }
      s.u_cmd = feed_forward(s.u_pid, s.d_hat);
    } else {
      s.v_t = bout(gen, x);
      s.v_s = bout(sensor, x);
      s.feedback = s.v_s;
      s.meas = delay_steps > 0 ? held.meas : s.v_s;
      s.e = held.vref - s.meas;
      s.u_pid = pid_output(x, s.e);
      if (obs_on) {
        const double raw = mismatch_mode
                               ? bout(oqm, x, s.v_s - held.vref)
                               : bout(oyq, x, s.v_s) - bout(oxq, x);
        s.d_hat = std::clamp(raw, -sat, sat);
      }
      s.u_cmd = feed_forward(s.u_pid, s.d_hat);
    }
    return s;
  }

  void rhs(const Eigen::VectorXd& x, const Held& held,
           Eigen::VectorXd& dx) const {
    const Signals s = signals(x, held);
    if (spec.kind == LoopKind::kLfc) {
      // The droop acts on the same measured frequency the secondary
      // controller sees: one measurement channel feeds the whole LFC
      // side, so a measurement delay degrades both. The observer taps
      // the plant-local signals instead.
      const double gov_in = s.u_cmd - s.meas / droop_r;
      bderiv(gov, x, gov_in, dx);
      bderiv(diesel, x, bout(gov, x), dx);
      bderiv(vsc, x, held.pv, dx);
      bderiv(lc, x, bout(vsc, x), dx);
      bderiv(psys, x, s.dp_dg + s.dp_pv - held.load, dx);
      dx[i_int] = s.e;
      if (has_flt) {
        dx[i_flt] = spec.controller.derivative_filter_n * (s.e - x[i_flt]);
      }
      if (obs_on) {
        bderiv(oyq, x, s.df, dx);
        const bool at_reference =
            spec.observer.lfc_injection == LfcInjection::kGovernorReference;
        bderiv(oxq, x, at_reference ? s.u_cmd : gov_in, dx);
      }
    } else {
      bderiv(amp, x, s.u_cmd, dx);
      bderiv(exc, x, bout(amp, x), dx);
      bderiv(gen, x, bout(exc, x), dx);
      bderiv(sensor, x, s.v_t, dx);
      dx[i_int] = s.e;
      if (has_flt) {
        dx[i_flt] = spec.controller.derivative_filter_n * (s.e - x[i_flt]);
      }
      if (obs_on) {
        if (mismatch_mode) {
          bderiv(oqm, x, s.v_s - held.vref, dx);
        } else {
          bderiv(oyq, x, s.v_s, dx);
          bderiv(oxq, x, s.u_cmd, dx);
        }
      }
    }
  }

  Held sample_inputs(double t, const std::vector<double>& history,
                     std::size_t k) const {
    Held h;
    const bool stepped = t >= inputs.t_step - 1e-12;
    if (spec.kind == LoopKind::kLfc) {
      h.pv = stepped ? inputs.pv_step : 0.0;
      double load = stepped ? inputs.load_step : 0.0;
      if (spec.load_noise) {
        load = inject_load_noise(*spec.load_noise, load, t);
      }
      h.load = load;
    } else {
      h.vref = stepped ? inputs.vref_step : 0.0;
    }
    if (delay_steps > 0) {
      h.meas = k >= static_cast<std::size_t>(delay_steps)
                   ? history[k - static_cast<std::size_t>(delay_steps)]
                   : 0.0;
    }
    return h;
  }
};

LoopSimulation::LoopSimulation(const ClosedLoopSpec& spec,
                               const StepInputs& inputs)
    : impl_(std::make_unique<Impl>()) {
  impl_->spec = spec;
  impl_->inputs = inputs;
  if (!(spec.dt > 0.0)) throw std::invalid_argument("solver.dt must be > 0");
  if (spec.measurement_delay < 0.0) {
    throw std::invalid_argument("measurement_delay must be >= 0");
  }
  spec.controller.validate();
  if (spec.load_noise) {
    spec.load_noise->validate();
    if (spec.load_noise->hold_interval < spec.dt) {
      throw std::invalid_argument("noise.hold_interval must be >= dt");
    }
  }

  int off = 0;
  auto place = [&off](Block& b, const TransferFunction& tf) {
    b.ss = StateSpaceModel::from_transfer_function(tf);
    b.off = off;
    off += b.ss.order();
  };

  if (spec.kind == LoopKind::kLfc) {
    const LfcPlant plant = build_lfc(spec.lfc);
    impl_->droop_r = plant.droop_r;
    place(impl_->gov, plant.governor);
    place(impl_->diesel, plant.diesel);
    place(impl_->vsc, plant.vsc);
    place(impl_->lc, plant.lc_filter);
    place(impl_->psys, plant.power_system);
    impl_->nominal =
        spec.observer.lfc_injection == LfcInjection::kGovernorReference
            ? plant.control_to_freq()
            : plant.open_path();
  } else {
    const AvrPlant plant = build_avr(spec.avr);
    place(impl_->amp, plant.amplifier);
    place(impl_->exc, plant.exciter);
    place(impl_->gen, plant.generator);
    place(impl_->sensor, plant.sensor);
    impl_->nominal = plant.open_loop();
  }

  impl_->i_int = off++;
  impl_->has_flt = spec.controller.kd > 0.0;
  if (impl_->has_flt) impl_->i_flt = off++;

  if (spec.observer.enabled) {
    impl_->obs_on = true;
    impl_->sat = spec.observer.saturation;
    const int rel = impl_->nominal.relative_degree();
    const int order = spec.observer.order > 0 ? spec.observer.order : rel;
    impl_->obs_order = order;
    impl_->mismatch_mode =
        spec.kind == LoopKind::kAvr &&
        spec.observer.avr_mode == AvrObserverMode::kVoltageMismatch;
    const QFilter q = design_q(spec.observer.lambda, order);
    // Every estimator realizes Q*Gn^{-1} as a single proper block;
    // make_observer also enforces the order rule and the saturation
    // contract. The voltage-mismatch form feeds that block with the
    // tracking mismatch instead of pairing it with a Q branch on the
    // plant input.
    const DisturbanceObserver obs =
        make_observer(impl_->nominal, q, spec.observer.saturation);
    if (impl_->mismatch_mode) {
      impl_->oqm.ss = obs.branch_yq();
      impl_->oqm.off = off;
      off += impl_->oqm.order();
    } else {
      impl_->oyq.ss = obs.branch_yq();
      impl_->oyq.off = off;
      off += impl_->oyq.order();
      impl_->oxq.ss = obs.branch_xq();
      impl_->oxq.off = off;
      off += impl_->oxq.order();
    }
  }
  impl_->nx = off;

  const double dt = spec.dt;
  if (spec.measurement_delay > 0.0) {
    auto steps = static_cast<long long>(std::llround(spec.measurement_delay / dt));
    if (steps < 1) {
      steps = 1;
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "measurement delay %g s is shorter than dt %g s; "
                    "rounded up to one sample",
                    spec.measurement_delay, dt);
      impl_->warnings.emplace_back(buf);
    } else if (std::abs(static_cast<double>(steps) * dt -
                        spec.measurement_delay) > 1e-9 * dt) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "measurement delay %g s rounded to %lld samples (%g s)",
                    spec.measurement_delay, steps,
                    static_cast<double>(steps) * dt);
      impl_->warnings.emplace_back(buf);
    }
    impl_->delay_steps = static_cast<int>(steps);
    impl_->applied_delay = static_cast<double>(steps) * dt;
  }
}

LoopSimulation::LoopSimulation(LoopSimulation&&) noexcept = default;
LoopSimulation& LoopSimulation::operator=(LoopSimulation&&) noexcept = default;
LoopSimulation::~LoopSimulation() = default;

double LoopSimulation::applied_delay() const { return impl_->applied_delay; }

const std::vector<std::string>& LoopSimulation::warnings() const {
  return impl_->warnings;
}

const TransferFunction& LoopSimulation::observer_nominal() const {
  return impl_->nominal;
}

int LoopSimulation::observer_order() const { return impl_->obs_order; }

Trace LoopSimulation::run(double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  Impl& im = *impl_;
  const double dt = im.spec.dt;
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  if (steps < 1) throw std::invalid_argument("horizon shorter than dt");

  const bool lfc = im.spec.kind == LoopKind::kLfc;
  Trace trace(dt, lfc ? std::vector<std::string>{"delta_f", "dp_dg", "dp_pv",
                                                 "dp_load", "d_hat", "d_net",
                                                 "u"}
                      : std::vector<std::string>{"v_t", "v_s", "v_ref",
                                                 "v_err", "d_hat", "u"});

  Eigen::VectorXd x = Eigen::VectorXd::Zero(im.nx);
  Eigen::VectorXd k1(im.nx), k2(im.nx), k3(im.nx), k4(im.nx), xs(im.nx);
  k1.setZero();
  k2.setZero();
  k3.setZero();
  k4.setZero();

  std::vector<double> history;
  history.reserve(steps + 1);

  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Impl::Held held = im.sample_inputs(t, history, k);
    const Impl::Signals s = im.signals(x, held);

    if (lfc) {
      const double row[] = {s.df,    s.dp_dg, s.dp_pv,
                            held.load, s.d_hat, s.dp_pv - held.load,
                            s.u_cmd};
      trace.append_row(row);
    } else {
      const double row[] = {s.v_t, s.v_s, held.vref, s.e, s.d_hat, s.u_cmd};
      trace.append_row(row);
    }
    history.push_back(s.feedback);
    if (k == steps) break;

    im.rhs(x, held, k1);
    xs = x + (0.5 * dt) * k1;
    im.rhs(xs, held, k2);
    xs = x + (0.5 * dt) * k2;
    im.rhs(xs, held, k3);
    xs = x + dt * k3;
    im.rhs(xs, held, k4);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kBlowUpBound) {
      char buf[96];
      std::snprintf(buf, sizeof(buf),
                    "simulation diverged at t = %.6g s", t + dt);
      throw std::runtime_error(buf);
    }
  }
  return trace;
}

LoopSimulation assemble(const ClosedLoopSpec& spec, const StepInputs& inputs) {
  return LoopSimulation(spec, inputs);
}

}  // namespace mgsim
