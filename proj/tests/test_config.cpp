#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "mgsim/config.hpp"
#include "test_util.hpp"

using namespace mgsim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("mgsim-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream os(path / name);
    os << text;
  }
};

struct EnvGuard {
  explicit EnvGuard(const std::string& value) {
    ::setenv(kProfileDirEnv, value.c_str(), 1);
  }
  ~EnvGuard() { ::unsetenv(kProfileDirEnv); }
};

}  // namespace

TEST_CASE("built-in profiles") {
  CHECK(builtin_profile_names() ==
        std::vector<std::string>{"paper-appendix-a", "paper-hardware-b"});

  const RunConfig a = builtin_profile("paper-appendix-a");
  CHECK(a.profile == "paper-appendix-a");
  CHECK(a.case_id == "lfc-b");
  CHECK(a.experiment.lfc_gains.ki == 0.2);
  CHECK(a.experiment.lfc_gains.kp == 0.0);
  CHECK(a.experiment.avr_gains.kp == 0.8);
  CHECK(a.experiment.avr_gains.ki == 0.5);
  CHECK(a.experiment.avr_gains.kd == 0.25);
  CHECK(a.experiment.lfc_observer.enabled);
  CHECK(a.experiment.lfc_observer.lambda == 0.01);
  CHECK(a.experiment.avr_observer.enabled);
  CHECK(a.experiment.avr_observer.lambda == 0.05);
  CHECK(a.experiment.dt == 1e-3);
  CHECK_FALSE(a.plant_model.has_value());
  CHECK_NOTHROW(a.validate());

  const RunConfig b = builtin_profile("paper-hardware-b");
  CHECK(b.profile == "paper-hardware-b");
  REQUIRE(b.plant_model.has_value());
  CHECK(b.plant_model->num().coeff(0) == 2.68e5);
  CHECK(b.plant_model->den().coeff(0) == 4661.0);
  CHECK(b.plant_model->den().coeff(1) == 303.4);
  CHECK(b.plant_model->den().coeff(2) == 1.0);
  CHECK(b.experiment.lfc_gains.ki == 0.01);
  CHECK(b.experiment.lfc_observer.lambda == 0.02);
  CHECK(b.metadata.count("synchronous_machine") == 1);
  CHECK_NOTHROW(b.validate());

  CHECK(contains(message_of<std::invalid_argument>(
                     [] { builtin_profile("nope"); }),
                 "unknown profile \"nope\" (built-in profiles: "
                 "paper-appendix-a, paper-hardware-b)"));
}

TEST_CASE("config documents override individual fields") {
  const RunConfig base;
  const RunConfig cfg = parse_run_config(R"({
    // line comments are fine
    "solver": {"dt": 5e-4},
    "plant": {"lfc": {"droop_r": 3.0}},
    "controller": {"lfc": {"ki": 0.3}},
    "observer": {"avr": {"lambda": 0.1, "mode": "input-equivalent"}},
    "scenario": {"case": "avr-a", "seed": 7},
    "workers": 2,
    "metadata": {"rig": "bench"}
  })",
                                         base);
  CHECK(cfg.experiment.dt == 5e-4);
  CHECK(cfg.experiment.lfc.droop_r == 3.0);
  CHECK(cfg.experiment.lfc_gains.ki == 0.3);
  CHECK(cfg.experiment.avr_observer.lambda == 0.1);
  CHECK(cfg.experiment.avr_observer.avr_mode ==
        AvrObserverMode::kInputEquivalent);
  CHECK(cfg.case_id == "avr-a");
  CHECK(cfg.experiment.seed == 7);
  CHECK(cfg.workers == 2);
  CHECK(cfg.metadata.at("rig") == "bench");
  // Untouched fields keep the base values.
  CHECK(cfg.experiment.avr_gains.kp == base.experiment.avr_gains.kp);
  CHECK(cfg.experiment.lfc.t_gov == base.experiment.lfc.t_gov);
}

TEST_CASE("config errors name the full field path") {
  const RunConfig base;
  CHECK(contains(message_of<std::invalid_argument>([&] {
          parse_run_config(R"({"scenario": {"czse": "lfc-b"}})", base);
        }),
        "config field scenario.czse: unrecognized key"));
  CHECK(contains(message_of<std::invalid_argument>([&] {
          parse_run_config(R"({"solver": {"dt": "fast"}})", base);
        }),
        "config field solver.dt: expected a number"));
  CHECK(contains(message_of<std::invalid_argument>([&] {
          parse_run_config(R"({"observer": {"avr": {"mode": "bogus"}}})",
                           base);
        }),
        "expected one of: voltage-mismatch, input-equivalent"));
  CHECK(contains(message_of<std::invalid_argument>([&] {
          parse_run_config(R"({"plant": {"model": {"num": [1.0]}}})", base);
        }),
        "config field plant.model: needs both num and den"));
  CHECK(contains(message_of<std::invalid_argument>([&] {
          parse_run_config("[1, 2]", base);
        }),
        "config root must be a JSON object"));
  CHECK(contains(message_of<std::invalid_argument>([&] {
          parse_run_config("{not json", base);
        }),
        "config is not valid JSON"));
}

TEST_CASE("a null plant model clears an inherited one") {
  const RunConfig base = builtin_profile("paper-hardware-b");
  const RunConfig cfg =
      parse_run_config(R"({"plant": {"model": null}})", base);
  CHECK_FALSE(cfg.plant_model.has_value());
}

TEST_CASE("canonical json round-trips") {
  for (const auto& name : builtin_profile_names()) {
    const RunConfig cfg = builtin_profile(name);
    const RunConfig back = parse_run_config(to_json(cfg), RunConfig{});
    CHECK(to_json(back) == to_json(cfg));
  }
}

TEST_CASE("profile resolution order") {
  TempDir dir;

  SUBCASE("explicit paths win") {
    dir.write("custom.json", R"({"scenario": {"case": "avr-b"}})");
    const RunConfig cfg =
        resolve_profile((dir.path / "custom.json").string());
    CHECK(cfg.case_id == "avr-b");
    CHECK(contains(cfg.profile, "custom.json"));
  }
  SUBCASE("the profile directory wins over built-ins") {
    dir.write("paper-appendix-a.json", R"({"workers": 7})");
    EnvGuard env(dir.path.string());
    const RunConfig cfg = resolve_profile("paper-appendix-a");
    CHECK(cfg.workers == 7);
    CHECK(cfg.profile == "paper-appendix-a");
  }
  SUBCASE("directory profiles resolve by bare name") {
    dir.write("bench.json",
              R"({"scenario": {"case": "test-03"}, "workers": 3})");
    EnvGuard env(dir.path.string());
    const RunConfig cfg = resolve_profile("bench");
    CHECK(cfg.case_id == "test-03");
    CHECK(cfg.workers == 3);
    CHECK(cfg.profile == "bench");
  }
  SUBCASE("unknown names fall through to the built-in error") {
    EnvGuard env(dir.path.string());
    CHECK_THROWS_AS(resolve_profile("bench"), std::invalid_argument);
  }
  SUBCASE("mutually re-basing profiles are caught") {
    dir.write("a.json", R"({"profile": "b"})");
    dir.write("b.json", R"({"profile": "a"})");
    EnvGuard env(dir.path.string());
    CHECK(contains(message_of<std::invalid_argument>(
                       [] { resolve_profile("a"); }),
                   "cycle suspected"));
  }
}

TEST_CASE("rebasing onto another profile before overrides") {
  const RunConfig cfg = parse_run_config(
      R"({"profile": "paper-hardware-b", "workers": 5})", RunConfig{});
  CHECK(cfg.profile == "paper-hardware-b");
  CHECK(cfg.workers == 5);
  CHECK(cfg.plant_model.has_value());
}

TEST_CASE("validation names the offending config field") {
  RunConfig cfg;

  cfg.workers = 0;
  CHECK(contains(message_of<std::invalid_argument>([&] { cfg.validate(); }),
                 "config field workers: must be >= 1"));
  cfg.workers = 1;

  cfg.out_dir.clear();
  CHECK(contains(message_of<std::invalid_argument>([&] { cfg.validate(); }),
                 "out_dir"));
  cfg.out_dir = "out";

  cfg.experiment.dt = 0.0;
  CHECK(contains(message_of<std::invalid_argument>([&] { cfg.validate(); }),
                 "solver.dt"));
  cfg.experiment.dt = 1e-3;

  cfg.experiment.lfc_observer.lambda = 0.0;
  CHECK(contains(message_of<std::invalid_argument>([&] { cfg.validate(); }),
                 "observer.lfc.lambda"));
  cfg.experiment.lfc_observer.lambda = 0.01;

  cfg.experiment.avr_observer.order = -1;
  CHECK(contains(message_of<std::invalid_argument>([&] { cfg.validate(); }),
                 "observer.avr.order"));
  cfg.experiment.avr_observer.order = 0;

  cfg.case_id = "bogus";
  CHECK(contains(message_of<std::invalid_argument>([&] { cfg.validate(); }),
                 "or test-01..test-16"));
  cfg.case_id = "test-07";
  CHECK_NOTHROW(cfg.validate());
  cfg.case_id = "test-17";  // outside the 4x4 grid
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.case_id = "lfc-b";

  cfg.plant_model = TransferFunction({0.0, 1.0}, {1.0});  // improper
  CHECK(contains(message_of<std::invalid_argument>([&] { cfg.validate(); }),
                 "must be a proper transfer function"));
}

TEST_CASE("manifest embeds version, command, and resolved config") {
  RunConfig cfg;
  cfg.metadata["note"] = "x";
  const std::string m = run_manifest(cfg, "mgsim simulate --case lfc-b");
  CHECK(contains(m, "\"tool\": \"mgsim\""));
  CHECK(contains(m, std::string("\"version\": \"") + kToolVersion + "\""));
  CHECK(contains(m, "\"command\": \"mgsim simulate --case lfc-b\""));
  CHECK(contains(m, "\"profile\": \"paper-appendix-a\""));
  CHECK(contains(m, "\"note\": \"x\""));
  // Byte-stable: repeated renderings are identical (nothing time-like).
  CHECK(run_manifest(cfg, "mgsim simulate --case lfc-b") == m);
}
