#include "mgsim/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace mgsim {

void UncertaintyBudget::validate() const {
  if (!(zeta_l > 0.0 && zeta_l <= 1.0)) {
    throw std::invalid_argument("budget zeta_l must be in (0, 1]");
  }
  if (!(zeta_u >= 1.0)) {
    throw std::invalid_argument("budget zeta_u must be >= 1");
  }
  if (forecast_pf < 0.0) {
    throw std::invalid_argument("budget forecast level must be >= 0");
  }
  if (p_min > p_max) {
    throw std::invalid_argument("budget bounds must satisfy p_min <= p_max");
  }
  // The extreme admissible levels must stay inside the absolute bounds.
  constexpr double kTol = 1e-12;
  if (zeta_l * forecast_pf < p_min - kTol ||
      zeta_u * forecast_pf > p_max + kTol) {
    throw std::invalid_argument(
        "budget-scaled forecast leaves the [p_min, p_max] interval");
  }
}

double budget_to_step(const UncertaintyBudget& budget) {
  budget.validate();
  return (budget.zeta_u - 1.0) * budget.forecast_pf;
}

ExperimentConfig default_experiment_config() {
  ExperimentConfig cfg;
  cfg.lfc = lfc_params_default();
  cfg.avr = avr_params_default();

  // Baseline secondary controller for the frequency loop: integral only.
  // The published study leaves the gain unprinted; this value is calibrated
  // so the integral baseline settles inside the 40 s study window and is
  // visibly delay-sensitive, see docs/defaults.md.
  cfg.lfc_gains.kp = 0.0;
  cfg.lfc_gains.ki = 0.2;
  cfg.lfc_gains.kd = 0.0;

  // Voltage-loop PID profile: a moderately aggressive tuning from the
  // calibration study in docs/defaults.md (the published gains are not
  // printed); it keeps the terminal-voltage step inside a 5 s window.
  cfg.avr_gains.kp = 0.8;
  cfg.avr_gains.ki = 0.5;
  cfg.avr_gains.kd = 0.25;
  cfg.avr_gains.derivative_filter_n = 100.0;

  cfg.lfc_observer.enabled = true;
  cfg.lfc_observer.lambda = 0.01;
  cfg.lfc_observer.order = 0;  // minimum admissible (relative degree)
  cfg.lfc_observer.saturation = 10.0;
  cfg.lfc_observer.lfc_injection = LfcInjection::kGovernorReference;

  // The voltage-loop estimator trades bandwidth for a soft inverse-plant
  // kick: at this lambda the mismatch feed-forward improves ISE and IAE
  // for every PID profile in the tuning study (docs/defaults.md) without
  // touching the saturation guard.
  cfg.avr_observer.enabled = true;
  cfg.avr_observer.lambda = 0.05;
  cfg.avr_observer.order = 0;
  cfg.avr_observer.saturation = 10.0;
  cfg.avr_observer.avr_mode = AvrObserverMode::kVoltageMismatch;

  cfg.noise.sigma = 0.01;
  cfg.noise.hold_interval = 0.01;
  return cfg;
}

std::vector<Scenario> generate_test_grid(const ExperimentConfig& config) {
  static constexpr double kBudgets[4][2] = {
      {0.9, 1.1}, {0.8, 1.2}, {0.7, 1.3}, {0.6, 1.4}};

  std::vector<Scenario> grid;
  grid.reserve(16);
  int test_no = 1;
  for (const auto& lb : kBudgets) {      // load budget, outer
    for (const auto& pb : kBudgets) {    // PV budget, fastest-varying
      Scenario sc;
      sc.test_no = test_no;
      char name[16];
      std::snprintf(name, sizeof(name), "test-%02d", test_no);
      sc.name = name;
      sc.pv_budget = {pb[0], pb[1], config.pf_pv, 0.0, 1.0};
      sc.load_budget = {lb[0], lb[1], config.pf_load, 0.0, 1.0};
      sc.pv_step = budget_to_step(sc.pv_budget);
      sc.load_step = budget_to_step(sc.load_budget);
      sc.t_step = config.t_step;
      sc.horizon = config.lfc_horizon;
      grid.push_back(std::move(sc));
      ++test_no;
    }
  }
  return grid;
}

ClosedLoopSpec lfc_spec_for(const Scenario& scenario,
                            const ExperimentConfig& config) {
  ClosedLoopSpec spec;
  spec.kind = LoopKind::kLfc;
  spec.lfc = config.lfc;
  spec.avr = config.avr;
  spec.controller = config.lfc_gains;
  spec.observer = config.lfc_observer;
  spec.measurement_delay = scenario.delay;
  spec.load_noise = scenario.noise;
  spec.dt = config.dt;
  return spec;
}

PerformanceReport report_for_trace(const Trace& trace, LoopKind kind,
                                   double t0, double band_fraction,
                                   double band_scale) {
  if (kind == LoopKind::kLfc) {
    return compute_indices(trace.channel("delta_f"), trace.dt(), t0,
                           band_fraction, band_scale);
  }
  // Voltage loop: integral indices on the tracking error, peak and
  // settling on the terminal voltage itself.
  PerformanceReport r = compute_indices(trace.channel("v_err"), trace.dt(),
                                        t0, band_fraction);
  const auto vt = trace.channel("v_t");
  const auto i0 = static_cast<std::size_t>(
      std::min<double>(std::ceil(t0 / trace.dt() - 1e-9),
                       static_cast<double>(vt.size() - 1)));
  double peak = 0.0;
  for (std::size_t i = i0; i < vt.size(); ++i) {
    peak = std::max(peak, vt[i]);
  }
  const double tail = final_value_estimate(vt, trace.dt(), t0);
  const double ref = band_scale > 0.0
                         ? band_scale
                         : peak_excursion(vt, tail, trace.dt(), t0);
  r.max_overshoot = peak;
  if (ref == 0.0) {
    r.settling_time = 0.0;
    r.settled = true;
  } else {
    r.settling_time = settling_time_abs(vt, tail, band_fraction * ref,
                                        trace.dt(), t0, &r.settled);
  }
  return r;
}

CaseComparison run_case_comparison(const std::string& case_id,
                                   const ExperimentConfig& config) {
  const bool is_avr = case_id.rfind("avr", 0) == 0;

  ExperimentConfig base = config;
  ExperimentConfig with = config;
  (is_avr ? base.avr_observer : base.lfc_observer).enabled = false;
  (is_avr ? with.avr_observer : with.lfc_observer).enabled = true;

  CaseComparison cmp;
  cmp.case_id = case_id;
  cmp.baseline_trace = run_paper_case(case_id, base).first;
  cmp.dobc_trace = run_paper_case(case_id, with).first;

  // Both controllers face the same scenario, so both are judged against
  // the same absolute settling tolerance: the band is anchored to the
  // baseline controller's excursion instead of each trace's own.
  const LoopKind kind = is_avr ? LoopKind::kAvr : LoopKind::kLfc;
  const char* channel = is_avr ? "v_t" : "delta_f";
  const auto sig = cmp.baseline_trace.channel(channel);
  const double t0 = config.t_step;
  const double final_b =
      final_value_estimate(sig, cmp.baseline_trace.dt(), t0);
  cmp.band_scale = peak_excursion(sig, final_b, cmp.baseline_trace.dt(), t0);
  cmp.baseline =
      report_for_trace(cmp.baseline_trace, kind, t0, 0.05, cmp.band_scale);
  cmp.dobc = report_for_trace(cmp.dobc_trace, kind, t0, 0.05, cmp.band_scale);
  return cmp;
}

namespace {

ScenarioOutcome run_scenario(const Scenario& scenario,
                             const ExperimentConfig& config) {
  ScenarioOutcome out;
  out.scenario = scenario;
  try {
    const ClosedLoopSpec spec = lfc_spec_for(scenario, config);
    StepInputs inputs;
    inputs.t_step = scenario.t_step;
    inputs.pv_step = -scenario.pv_step;   // generation deficit
    inputs.load_step = scenario.load_step;  // load surplus
    Trace trace = assemble(spec, inputs).run(scenario.horizon);
    out.report =
        report_for_trace(trace, LoopKind::kLfc, scenario.t_step, 0.05);
    out.df_max = out.report.max_overshoot;
  } catch (const std::exception& e) {
    out.diverged = true;
    out.error = e.what();
  }
  return out;
}

}  // namespace

SweepResult worst_case_scan(const std::vector<Scenario>& grid,
                            const ExperimentConfig& config, int workers) {
  if (grid.empty()) {
    throw std::invalid_argument("worst-case scan needs a nonempty grid");
  }
  SweepResult result;
  result.outcomes.resize(grid.size());

  const int n_workers = std::clamp<int>(workers, 1,
                                        static_cast<int>(grid.size()));
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      result.outcomes[i] = run_scenario(grid[i], config);
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= grid.size()) return;
        result.outcomes[i] = run_scenario(grid[i], config);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < result.outcomes.size(); ++i) {
    const auto& out = result.outcomes[i];
    if (out.diverged) continue;
    if (result.argmax_index < 0 ||
        out.df_max >
            result.outcomes[static_cast<std::size_t>(result.argmax_index)]
                .df_max) {
      result.argmax_index = static_cast<int>(i);
    }
  }
  return result;
}

StepInputs worst_case_inputs(const ExperimentConfig& config) {
  const UncertaintyBudget pv{0.6, 1.4, config.pf_pv, 0.0, 1.0};
  const UncertaintyBudget load{0.6, 1.4, config.pf_load, 0.0, 1.0};
  StepInputs inputs;
  inputs.t_step = config.t_step;
  inputs.pv_step = -budget_to_step(pv);
  inputs.load_step = budget_to_step(load);
  return inputs;
}

std::vector<std::string> paper_case_ids() {
  return {"avr-a", "avr-b", "lfc-a", "lfc-b", "lfc-c", "lfc-d"};
}

std::pair<Trace, PerformanceReport> run_grid_test(
    int test_no, const ExperimentConfig& config) {
  const std::vector<Scenario> grid = generate_test_grid(config);
  if (test_no < 1 || static_cast<std::size_t>(test_no) > grid.size()) {
    throw std::invalid_argument(
        "test number " + std::to_string(test_no) + " outside the grid (1.." +
        std::to_string(grid.size()) + ")");
  }
  const Scenario& sc = grid[static_cast<std::size_t>(test_no - 1)];
  StepInputs inputs;
  inputs.t_step = sc.t_step;
  inputs.pv_step = -sc.pv_step;
  inputs.load_step = sc.load_step;
  Trace trace = assemble(lfc_spec_for(sc, config), inputs).run(sc.horizon);
  PerformanceReport report =
      report_for_trace(trace, LoopKind::kLfc, sc.t_step, 0.05);
  return {std::move(trace), report};
}

std::pair<Trace, PerformanceReport> run_paper_case(
    const std::string& case_id, const ExperimentConfig& config) {
  if (case_id == "avr-a" || case_id == "avr-b") {
    ClosedLoopSpec spec;
    spec.kind = LoopKind::kAvr;
    spec.lfc = config.lfc;
    spec.avr = config.avr;
    spec.controller = config.avr_gains;
    spec.observer = config.avr_observer;
    spec.measurement_delay = case_id == "avr-b" ? config.case_delay : 0.0;
    spec.dt = config.dt;
    StepInputs inputs;
    inputs.t_step = config.t_step;
    inputs.vref_step = 1.0;
    Trace trace = assemble(spec, inputs).run(config.avr_horizon);
    PerformanceReport report =
        report_for_trace(trace, LoopKind::kAvr, config.t_step, 0.05);
    return {std::move(trace), report};
  }

  if (case_id == "lfc-a") {
    // The uncertainty sweep itself; returns the worst case it finds.
    const SweepResult sweep =
        worst_case_scan(generate_test_grid(config), config, 1);
    if (sweep.argmax_index < 0) {
      throw std::runtime_error("every sweep scenario diverged");
    }
    const Scenario& worst =
        sweep.outcomes[static_cast<std::size_t>(sweep.argmax_index)].scenario;
    StepInputs inputs;
    inputs.t_step = worst.t_step;
    inputs.pv_step = -worst.pv_step;
    inputs.load_step = worst.load_step;
    Trace trace =
        assemble(lfc_spec_for(worst, config), inputs).run(worst.horizon);
    PerformanceReport report =
        report_for_trace(trace, LoopKind::kLfc, worst.t_step, 0.05);
    return {std::move(trace), report};
  }

  if (case_id == "lfc-b" || case_id == "lfc-c" || case_id == "lfc-d") {
    Scenario sc;
    sc.name = case_id;
    sc.test_no = 16;
    sc.pv_budget = {0.6, 1.4, config.pf_pv, 0.0, 1.0};
    sc.load_budget = {0.6, 1.4, config.pf_load, 0.0, 1.0};
    sc.pv_step = budget_to_step(sc.pv_budget);
    sc.load_step = budget_to_step(sc.load_budget);
    sc.t_step = config.t_step;
    sc.horizon = config.lfc_horizon;
    if (case_id == "lfc-c") sc.delay = config.case_delay;
    if (case_id == "lfc-d") {
      NoiseSpec noise = config.noise;
      noise.seed = config.seed;
      sc.noise = noise;
    }
    StepInputs inputs;
    inputs.t_step = sc.t_step;
    inputs.pv_step = -sc.pv_step;
    inputs.load_step = sc.load_step;
    Trace trace = assemble(lfc_spec_for(sc, config), inputs).run(sc.horizon);
    PerformanceReport report =
        report_for_trace(trace, LoopKind::kLfc, sc.t_step, 0.05);
    return {std::move(trace), report};
  }

  std::string valid;
  for (const auto& id : paper_case_ids()) {
    if (!valid.empty()) valid += ", ";
    valid += id;
  }
  throw std::invalid_argument("unknown case id '" + case_id +
                              "' (valid: " + valid + ")");
}

}  // namespace mgsim
