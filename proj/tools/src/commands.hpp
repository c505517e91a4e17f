#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mgsim/config.hpp"

namespace mgsim::cli {

// Flags shared by every subcommand; unset fields keep the config value.
struct CommonArgs {
  std::optional<std::string> config_path;
  std::optional<std::string> case_id;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> horizon;  // applies to the loop the case runs
  std::optional<int> workers;
  std::optional<std::string> out_dir;
};

// Base profile -> optional config file -> command-line overrides, then
// validated. The returned config is what the manifest records, so a rerun
// from the manifest alone reproduces the artifacts byte for byte.
RunConfig resolve_config(const CommonArgs& args);

struct BodeArgs {
  std::vector<double> lambdas;  // empty = reference list
  int order = 4;
  std::string channel = "q";  // q | lfc | avr | model
  double omega_min = 1e-3;
  double omega_max = 1e3;
  int points = 400;
};

struct SysidArgs {
  std::string dataset_path;
  double svf_bandwidth = 0.0;  // 0 = auto
  std::optional<double> ki;    // closed-loop verdict requested for this gain
};

int cmd_simulate(const CommonArgs& common);
int cmd_sweep(const CommonArgs& common);
int cmd_bode(const CommonArgs& common, const BodeArgs& args);
int cmd_sysid(const CommonArgs& common, const SysidArgs& args);
int cmd_report(const CommonArgs& common);

}  // namespace mgsim::cli
