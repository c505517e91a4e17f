#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mgsim/loop.hpp"
#include "mgsim/metrics.hpp"

namespace mgsim {

// Interval-plus-budget uncertainty description for one resource: the
// realized power stays within [zeta_l, zeta_u] times the forecast level
// and inside the absolute bounds [p_min, p_max].
struct UncertaintyBudget {
  double zeta_l = 1.0;
  double zeta_u = 1.0;
  double forecast_pf = 0.0;  // pu on the DG base
  double p_min = 0.0;        // pu
  double p_max = 1.0;        // pu

  void validate() const;
};

// Extreme admissible step relative to forecast: (zeta_u - 1)*forecast_pf.
double budget_to_step(const UncertaintyBudget& budget);

struct Scenario {
  std::string name;
  int test_no = 0;
  UncertaintyBudget pv_budget;
  UncertaintyBudget load_budget;
  double pv_step = 0.0;    // pu magnitude (applied as a generation drop)
  double load_step = 0.0;  // pu magnitude (applied as a load rise)
  double t_step = 1.0;     // s
  double delay = 0.0;      // s
  std::optional<NoiseSpec> noise;
  double horizon = 40.0;   // s
};

// Simulation-wide defaults for the scripted experiments.
struct ExperimentConfig {
  LFCParams lfc;
  AVRParams avr;
  PIDGains lfc_gains;      // defaulted by default_experiment_config()
  PIDGains avr_gains;
  ObserverSettings lfc_observer;
  ObserverSettings avr_observer;
  double dt = 1e-3;
  double t_step = 1.0;
  double lfc_horizon = 40.0;
  double avr_horizon = 5.0;
  double case_delay = 0.02;      // s, delayed variants
  NoiseSpec noise;               // sigma/hold defaults for noisy variants
  double pf_pv = 1.0 / 6.0;      // pu forecast levels reproducing the
  double pf_load = 1.0 / 3.0;    // published test-grid step magnitudes
  std::uint64_t seed = 1;
};

ExperimentConfig default_experiment_config();

// The 4x4 cross product of per-resource budgets {(0.9,1.1), (0.8,1.2),
// (0.7,1.3), (0.6,1.4)}; load budget outermost, PV budget varying fastest,
// numbered 1..16.
std::vector<Scenario> generate_test_grid(const ExperimentConfig& config);

struct ScenarioOutcome {
  Scenario scenario;
  double df_max = 0.0;  // Hz, max |delta_f| after the step
  PerformanceReport report;
  bool diverged = false;
  std::string error;
};

struct SweepResult {
  std::vector<ScenarioOutcome> outcomes;  // grid order
  int argmax_index = -1;                  // into outcomes; -1 if all failed
};

// Runs every scenario with the same loop configuration and finds the
// worst case by peak |delta_f|; ties break toward the lower test number.
// Diverging scenarios are flagged and excluded from the argmax. workers
// bounds the thread count; results are identical for any worker count.
SweepResult worst_case_scan(const std::vector<Scenario>& grid,
                            const ExperimentConfig& config, int workers = 1);

// Scripted experiments. AVR: "avr-a" unit reference step, "avr-b" the same
// under measurement delay. LFC: "lfc-a" the full uncertainty sweep
// (returns the worst case's trace), "lfc-b" the worst-case step, "lfc-c"
// adds the delay, "lfc-d" adds load noise. Throws std::invalid_argument on
// an unknown id.
std::pair<Trace, PerformanceReport> run_paper_case(
    const std::string& case_id, const ExperimentConfig& config);

// Simulate one scenario of the generated uncertainty grid (1-based test
// number, 1..16 for the default 4x4 budget grid).
std::pair<Trace, PerformanceReport> run_grid_test(
    int test_no, const ExperimentConfig& config);

std::vector<std::string> paper_case_ids();

// Worst-case step inputs (generation drop + load rise) for a config.
StepInputs worst_case_inputs(const ExperimentConfig& config);

// Loop-appropriate report: frequency loops integrate and peak the
// delta_f channel; voltage loops integrate the tracking error but take
// peak and settling from the terminal voltage.
// Indices for one trace. band_scale = 0 anchors the settling band to the
// trace's own excursion; a positive value is an absolute anchor (see
// compute_indices).
PerformanceReport report_for_trace(const Trace& trace, LoopKind kind,
                                   double t0, double band_fraction = 0.05,
                                   double band_scale = 0.0);

// The published comparison protocol: the same case run twice, observer
// disabled (baseline controller alone) and enabled, both reports banded
// against the baseline's excursion so settling times are comparable.
struct CaseComparison {
  std::string case_id;
  Trace baseline_trace;
  Trace dobc_trace;
  PerformanceReport baseline;
  PerformanceReport dobc;
  double band_scale = 0.0;  // shared settling anchor
};

CaseComparison run_case_comparison(const std::string& case_id,
                                   const ExperimentConfig& config);

// Loop spec for one scenario (shared by the sweep and the case runner).
ClosedLoopSpec lfc_spec_for(const Scenario& scenario,
                            const ExperimentConfig& config);

}  // namespace mgsim
