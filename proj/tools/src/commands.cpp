#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mgsim/analysis.hpp"
#include "mgsim/metrics.hpp"
#include "mgsim/microgrid.hpp"
#include "mgsim/qfilter.hpp"
#include "mgsim/scenario.hpp"
#include "mgsim/sysid.hpp"
#include "mgsim/trace.hpp"

namespace fs = std::filesystem;

namespace mgsim::cli {

namespace {

// The reference lambda schedule for the Q-filter study.
const std::vector<double> kReferenceLambdas = {5.0,  4.0, 3.0,  2.0,  1.0, 0.5,
                                               0.2, 0.15, 0.1, 0.05, 0.01};

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  os << content;
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

fs::path prepare_out_dir(const RunConfig& config) {
  fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory '" +
                             dir.string() + "': " + ec.message());
  }
  return dir;
}

void write_manifest(const RunConfig& config, const std::string& command,
                    const fs::path& dir) {
  write_text_file(dir / "manifest.json", run_manifest(config, command));
}

std::string trace_csv(const Trace& trace) {
  std::ostringstream os;
  trace.write_csv(os);
  return os.str();
}

std::string trace_csv(const Trace& trace,
                      const std::vector<std::string>& channels) {
  std::ostringstream os;
  trace.write_csv(os, channels);
  return os.str();
}

bool is_avr_case(const std::string& case_id) {
  return case_id.rfind("avr", 0) == 0;
}

// test-NN case ids run one grid scenario; everything else is a named case.
std::optional<int> grid_test_number(const std::string& case_id) {
  if (case_id.rfind("test-", 0) != 0) return std::nullopt;
  return std::stoi(case_id.substr(5));
}

std::string baseline_label(const std::string& case_id,
                           const RunConfig& config) {
  if (is_avr_case(case_id)) return "pid";
  const PIDGains& g = config.experiment.lfc_gains;
  return (g.kp == 0.0 && g.kd == 0.0) ? "integral" : "pid";
}

std::string format_number(double v) { return format_csv_value(v); }

}  // namespace

RunConfig resolve_config(const CommonArgs& args) {
  RunConfig config;
  if (args.config_path) {
    // Accepts a profile name ("paper-hardware-b"), a profile in the
    // MGSIM_PROFILE_DIR directory, or a JSON file path.
    config = resolve_profile(*args.config_path);
  }
  if (args.case_id) config.case_id = *args.case_id;
  if (args.seed) config.experiment.seed = *args.seed;
  if (args.dt) config.experiment.dt = *args.dt;
  if (args.horizon) {
    config.experiment.lfc_horizon = *args.horizon;
    config.experiment.avr_horizon = *args.horizon;
  }
  if (args.workers) config.workers = *args.workers;
  if (args.out_dir) config.out_dir = *args.out_dir;
  config.validate();
  return config;
}

int cmd_simulate(const CommonArgs& common) {
  const RunConfig config = resolve_config(common);
  const ExperimentConfig& exp = config.experiment;

  Trace trace;
  PerformanceReport report;
  if (const auto test_no = grid_test_number(config.case_id)) {
    std::tie(trace, report) = run_grid_test(*test_no, exp);
  } else {
    std::tie(trace, report) = run_paper_case(config.case_id, exp);
  }

  const bool avr = is_avr_case(config.case_id);
  const fs::path dir = prepare_out_dir(config);
  write_text_file(dir / "trace.csv", trace_csv(trace));
  write_text_file(dir / "dhat.csv",
                  avr ? trace_csv(trace, {"d_hat"})
                      : trace_csv(trace, {"d_hat", "d_net"}));

  const std::vector<ReportRow> rows = {{config.case_id, report}};
  write_text_file(dir / "report.csv", render_report_csv(rows));
  write_manifest(config, "simulate", dir);

  std::printf("%s", render_report_text(rows, avr ? "MO" : "df_max").c_str());
  std::printf("artifacts: %s\n", dir.string().c_str());
  return 0;
}

int cmd_sweep(const CommonArgs& common) {
  const RunConfig config = resolve_config(common);
  const std::vector<Scenario> grid = generate_test_grid(config.experiment);
  if (grid.empty()) {
    throw std::invalid_argument("scenario grid is empty");
  }
  const SweepResult result =
      worst_case_scan(grid, config.experiment, config.workers);

  std::string csv =
      "test,zeta_l_pv,zeta_u_pv,dp_pv,zeta_l_load,zeta_u_load,dp_load,"
      "df_max,settled,diverged\n";
  int failures = 0;
  for (const auto& out : result.outcomes) {
    const Scenario& sc = out.scenario;
    csv += std::to_string(sc.test_no);
    for (double v : {sc.pv_budget.zeta_l, sc.pv_budget.zeta_u, sc.pv_step,
                     sc.load_budget.zeta_l, sc.load_budget.zeta_u,
                     sc.load_step, out.df_max}) {
      csv += ',';
      csv += format_number(v);
    }
    csv += out.report.settled && !out.diverged ? ",1" : ",0";
    csv += out.diverged ? ",1\n" : ",0\n";
    if (out.diverged) ++failures;
  }

  std::string summary;
  if (result.argmax_index >= 0) {
    const auto& worst =
        result.outcomes[static_cast<std::size_t>(result.argmax_index)];
    summary = "worst case: test-" +
              (worst.scenario.test_no < 10 ? std::string("0") : std::string()) +
              std::to_string(worst.scenario.test_no) +
              " (df_max " + format_number(worst.df_max) + " Hz)\n" +
              "scenarios: " + std::to_string(result.outcomes.size()) +
              ", diverged: " + std::to_string(failures) + "\n";
  }

  const fs::path dir = prepare_out_dir(config);
  write_text_file(dir / "sweep.csv", csv);
  write_text_file(dir / "summary.txt", summary);
  write_manifest(config, "sweep", dir);

  std::printf("%s", summary.c_str());
  std::printf("artifacts: %s\n", dir.string().c_str());
  if (result.argmax_index < 0) {
    throw std::runtime_error("every sweep scenario diverged");
  }
  return 0;
}

int cmd_bode(const CommonArgs& common, const BodeArgs& args) {
  const RunConfig config = resolve_config(common);
  if (!(args.omega_min > 0.0) || args.omega_max <= args.omega_min ||
      args.points < 2) {
    throw std::invalid_argument(
        "frequency range needs 0 < omega-min < omega-max and points >= 2");
  }

  const fs::path dir = prepare_out_dir(config);
  auto sweep_csv = [&](const TransferFunction& tf) {
    std::string csv = "omega,gain_db,phase_deg\n";
    for (const FrequencyPoint& p :
         frequency_sweep(tf, args.omega_min, args.omega_max, args.points)) {
      csv += format_number(p.omega);
      csv += ',';
      csv += format_number(p.gain_db);
      csv += ',';
      csv += format_number(p.phase_deg);
      csv += '\n';
    }
    return csv;
  };

  if (args.channel == "q") {
    const std::vector<double>& lambdas =
        args.lambdas.empty() ? kReferenceLambdas : args.lambdas;
    std::string table =
        "lambda,gain_db_at_0.1,phase_deg_at_0.1,cutoff_rad_s\n";
    for (double lambda : lambdas) {
      const QFilter q = design_q(lambda, args.order);
      char name[64];
      std::snprintf(name, sizeof(name), "bode_q_%g.csv", lambda);
      write_text_file(dir / name, sweep_csv(q.tf));
      table += format_number(lambda);
      table += ',';
      table += format_number(q_gain_db(q, 0.1));
      table += ',';
      table += format_number(q_phase_deg(q, 0.1));
      table += ',';
      table += format_number(q_cutoff(q));
      table += '\n';
    }
    write_text_file(dir / "qfilter_table.csv", table);
    write_manifest(config, "bode", dir);
    std::printf("%s", table.c_str());
    std::printf("artifacts: %s\n", dir.string().c_str());
    return 0;
  }

  TransferFunction tf;
  if (args.channel == "lfc") {
    tf = build_lfc(config.experiment.lfc).control_to_freq();
  } else if (args.channel == "avr") {
    tf = build_avr(config.experiment.avr).open_loop();
  } else if (args.channel == "model") {
    if (!config.plant_model) {
      throw std::invalid_argument(
          "config field plant.model: required for --channel model");
    }
    tf = *config.plant_model;
  } else {
    throw std::invalid_argument("unknown bode channel '" + args.channel +
                                "' (valid: q, lfc, avr, model)");
  }
  write_text_file(dir / ("bode_" + args.channel + ".csv"), sweep_csv(tf));
  write_manifest(config, "bode", dir);
  std::printf("artifacts: %s\n", dir.string().c_str());
  return 0;
}

int cmd_sysid(const CommonArgs& common, const SysidArgs& args) {
  const RunConfig config = resolve_config(common);
  const IdDataset data = load_id_dataset_csv(args.dataset_path);
  const IdResult result = fit_second_order(data, args.svf_bandwidth);

  // Config-ready plant profile: loadable on top of any base profile.
  nlohmann::json profile;
  profile["plant"]["model"]["num"] = {result.b0};
  profile["plant"]["model"]["den"] = {result.a0, result.a1, 1.0};

  std::string report = "b0,a1,a0,fit_percent,stable,critical_ki\n";
  for (double v : {result.b0, result.a1, result.a0, result.fit_percent}) {
    report += format_number(v) + ",";
  }
  report += result.stable ? "1," : "0,";
  report += format_number(critical_integral_gain(result));
  report += '\n';

  std::string poles_csv = "re,im\n";
  for (const auto& p : poles(result.model)) {
    poles_csv += format_number(p.real()) + "," + format_number(p.imag()) + "\n";
  }

  const fs::path dir = prepare_out_dir(config);
  write_text_file(dir / "sysid_profile.json", profile.dump(2) + "\n");
  write_text_file(dir / "sysid_report.csv", report);
  write_text_file(dir / "sysid_poles.csv", poles_csv);

  std::printf("model: %s / (s^2 + %s s + %s)\n",
              format_number(result.b0).c_str(),
              format_number(result.a1).c_str(),
              format_number(result.a0).c_str());
  std::printf("fit: %.4g%%  open-loop %s\n", result.fit_percent,
              result.stable ? "stable" : "unstable");
  if (args.ki) {
    const StabilityCheck check = verify_stability(result, *args.ki);
    std::string verdict = "ki," + format_number(*args.ki) +
                          ",closed_loop_stable," +
                          (check.stable ? "1" : "0") + "\n";
    write_text_file(dir / "sysid_verdict.csv", verdict);
    std::printf("closed loop with ki = %g: %s\n", *args.ki,
                check.stable ? "stable" : "unstable");
  }
  write_manifest(config, "sysid", dir);
  std::printf("artifacts: %s\n", dir.string().c_str());
  return 0;
}

int cmd_report(const CommonArgs& common) {
  const RunConfig config = resolve_config(common);
  if (grid_test_number(config.case_id)) {
    throw std::invalid_argument(
        "report compares the named cases (avr-a, avr-b, lfc-a..d), not grid "
        "tests; got '" + config.case_id + "'");
  }
  const CaseComparison cmp =
      run_case_comparison(config.case_id, config.experiment);

  const std::vector<ReportRow> rows = {
      {baseline_label(config.case_id, config), cmp.baseline},
      {"dobc", cmp.dobc},
  };
  const bool avr = is_avr_case(config.case_id);

  const fs::path dir = prepare_out_dir(config);
  write_text_file(dir / "comparison.csv", render_report_csv(rows));
  write_text_file(dir / "baseline_trace.csv", trace_csv(cmp.baseline_trace));
  write_text_file(dir / "dobc_trace.csv", trace_csv(cmp.dobc_trace));
  write_manifest(config, "report", dir);

  std::printf("%s", render_report_text(rows, avr ? "MO" : "df_max").c_str());
  std::printf("settling band: 5%% of %s (baseline excursion)\n",
              format_number(cmp.band_scale).c_str());
  std::printf("artifacts: %s\n", dir.string().c_str());
  return 0;
}

}  // namespace mgsim::cli
