#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mgsim/scenario.hpp"

namespace mgsim {

inline constexpr const char* kToolVersion = "0.1.0";

// Environment variable naming a directory searched for <name>.json
// profile files before the built-in profiles.
inline constexpr const char* kProfileDirEnv = "MGSIM_PROFILE_DIR";

// Complete, resolved description of one tool run: experiment parameters,
// what to execute, and where artifacts go. Profiles and config files fill
// this structure; command line flags override individual fields.
struct RunConfig {
  std::string profile = "paper-appendix-a";
  ExperimentConfig experiment = default_experiment_config();

  // Identified plant shipped by hardware-style profiles; used by the
  // analysis commands (bode, stability checks). Simulation always runs
  // the block-diagram loops.
  std::optional<TransferFunction> plant_model;

  // Scripted case id ("lfc-b", "avr-a", ...) or a grid member "test-07".
  std::string case_id = "lfc-b";
  std::string out_dir = "out";
  int workers = 1;

  // Free-form hardware/provenance notes carried into the manifest.
  std::map<std::string, std::string> metadata;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

std::vector<std::string> builtin_profile_names();

// Built-in profile by name; throws std::invalid_argument listing the
// known names when unresolvable.
RunConfig builtin_profile(const std::string& name);

// Profile resolution: a name containing '/' or ending in ".json" is
// treated as a file path; otherwise <dir>/<name>.json under the
// MGSIM_PROFILE_DIR directory wins over the built-in of the same name.
RunConfig resolve_profile(const std::string& name);

// Applies a JSON config document on top of `base`. Sections: solver,
// plant, controller, observer, scenario, plus optional top-level
// "profile" (re-bases onto that profile first), "out_dir", "workers",
// "metadata". The case id lives in the scenario section. Unknown keys
// and malformed values raise std::invalid_argument naming the full
// field path. Line comments (//, /* */) are permitted.
RunConfig parse_run_config(const std::string& json_text,
                           const RunConfig& base);
RunConfig load_run_config(const std::string& path, const RunConfig& base);

// Full resolved configuration as canonical JSON (stable key order, LF
// endings); parse_run_config(to_json(c), {}) round-trips.
std::string to_json(const RunConfig& config);

// Reproduction manifest: tool version, the executed command line, and the
// full resolved configuration. Contains no timestamps so repeated runs
// emit identical bytes.
std::string run_manifest(const RunConfig& config, const std::string& command);

}  // namespace mgsim
