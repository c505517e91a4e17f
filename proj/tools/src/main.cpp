// mgsim — microgrid frequency/voltage control simulator.
//
// Subcommands: simulate, sweep, bode, sysid, report. Exit codes: 0 on
// success, 1 on runtime failures (I/O, diverging simulations), 2 on
// configuration or usage errors.

#include <cstdio>
#include <exception>
#include <stdexcept>

#include <CLI11.hpp>

#include "commands.hpp"
#include "mgsim/config.hpp"

namespace {

void add_common_flags(CLI::App& sub, mgsim::cli::CommonArgs& common) {
  sub.add_option("--config", common.config_path,
                 "Profile name or JSON config file (see MGSIM_PROFILE_DIR)");
  sub.add_option("--case", common.case_id,
                 "Case id: avr-a, avr-b, lfc-a..lfc-d, or test-01..test-16");
  sub.add_option("--seed", common.seed, "Noise generator seed");
  sub.add_option("--dt", common.dt, "Integration step [s]");
  sub.add_option("--horizon", common.horizon, "Simulation horizon [s]");
  sub.add_option("--workers", common.workers, "Worker threads for sweeps");
  sub.add_option("--out", common.out_dir, "Artifact output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Microgrid frequency/voltage control simulator"};
  app.set_version_flag("--version", std::string(mgsim::kToolVersion));
  app.require_subcommand(1);

  mgsim::cli::CommonArgs common;
  mgsim::cli::BodeArgs bode;
  mgsim::cli::SysidArgs sysid;

  CLI::App* sim = app.add_subcommand(
      "simulate", "Run one case and write trace, estimate, and report CSVs");
  add_common_flags(*sim, common);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Scan the uncertainty grid for the worst frequency deviation");
  add_common_flags(*sweep, common);

  CLI::App* bode_cmd = app.add_subcommand(
      "bode", "Frequency responses of the Q filter or the plant channels");
  add_common_flags(*bode_cmd, common);
  bode_cmd->add_option("--lambda", bode.lambdas,
                       "Filter time constants [s] (repeatable; default: the "
                       "reference schedule)");
  bode_cmd->add_option("--order", bode.order, "Filter order")
      ->capture_default_str();
  bode_cmd
      ->add_option("--channel", bode.channel,
                   "q | lfc (control path) | avr (open loop) | model "
                   "(configured plant)")
      ->capture_default_str();
  bode_cmd->add_option("--omega-min", bode.omega_min, "Lowest omega [rad/s]")
      ->capture_default_str();
  bode_cmd->add_option("--omega-max", bode.omega_max, "Highest omega [rad/s]")
      ->capture_default_str();
  bode_cmd->add_option("--points", bode.points, "Samples per decade sweep")
      ->capture_default_str();

  CLI::App* sysid_cmd = app.add_subcommand(
      "sysid", "Fit a second-order model to a step-response dataset");
  add_common_flags(*sysid_cmd, common);
  sysid_cmd
      ->add_option("dataset", sysid.dataset_path,
                   "CSV with time,u,y columns")
      ->required();
  sysid_cmd->add_option(
      "--wf", sysid.svf_bandwidth,
      "State-variable filter bandwidth [rad/s] (0 = choose from data)");
  sysid_cmd->add_option("--ki", sysid.ki,
                        "Also report closed-loop stability at this "
                        "integral gain");

  CLI::App* report = app.add_subcommand(
      "report", "Compare the baseline controller against the DOBC variant");
  add_common_flags(*report, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit 0; usage errors exit 2
  }

  try {
    if (app.got_subcommand(sim)) return mgsim::cli::cmd_simulate(common);
    if (app.got_subcommand(sweep)) return mgsim::cli::cmd_sweep(common);
    if (app.got_subcommand(bode_cmd)) return mgsim::cli::cmd_bode(common, bode);
    if (app.got_subcommand(sysid_cmd)) {
      return mgsim::cli::cmd_sysid(common, sysid);
    }
    if (app.got_subcommand(report)) return mgsim::cli::cmd_report(common);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
