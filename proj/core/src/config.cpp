#include "mgsim/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mgsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config field " + path + ": " + what);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return item.key() == a; });
    if (!known) fail(path + "." + item.key(), "unrecognized key");
  }
}

const json* section(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) return nullptr;
  const json& s = j.at(key);
  if (!s.is_object()) fail(path + "." + key, "expected an object");
  return &s;
}

void get_number(const json& j, const std::string& path, const char* key,
                double& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  out = v.get<double>();
}

void get_int(const json& j, const std::string& path, const char* key,
             int& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  out = v.get<int>();
}

void get_uint64(const json& j, const std::string& path, const char* key,
                std::uint64_t& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_number_unsigned() && !v.is_number_integer()) {
    fail(path + "." + key, "expected a non-negative integer");
  }
  if (v.is_number_integer() && v.get<long long>() < 0) {
    fail(path + "." + key, "expected a non-negative integer");
  }
  out = v.get<std::uint64_t>();
}

void get_bool(const json& j, const std::string& path, const char* key,
              bool& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "expected true or false");
  out = v.get<bool>();
}

void get_string(const json& j, const std::string& path, const char* key,
                std::string& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  out = v.get<std::string>();
}

std::vector<double> number_array(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) fail(path, "expected numbers only");
    out.push_back(e.get<double>());
  }
  return out;
}

template <typename Enum>
struct EnumName {
  Enum value;
  const char* name;
};

constexpr EnumName<TpForm> kTpForms[] = {
    {TpForm::kSwing, "swing"}, {TpForm::kProduct, "product"}};
constexpr EnumName<LfcInjection> kInjections[] = {
    {LfcInjection::kGovernorReference, "governor-reference"},
    {LfcInjection::kGovernorInput, "governor-input"}};
constexpr EnumName<AvrObserverMode> kAvrModes[] = {
    {AvrObserverMode::kVoltageMismatch, "voltage-mismatch"},
    {AvrObserverMode::kInputEquivalent, "input-equivalent"}};

template <typename Enum, std::size_t N>
void get_enum(const json& j, const std::string& path, const char* key,
              const EnumName<Enum> (&names)[N], Enum& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  const std::string s = v.get<std::string>();
  for (const auto& entry : names) {
    if (s == entry.name) {
      out = entry.value;
      return;
    }
  }
  std::string options;
  for (const auto& entry : names) {
    if (!options.empty()) options += ", ";
    options += entry.name;
  }
  fail(path + "." + key, "unknown value \"" + s + "\" (expected one of: " +
                             options + ")");
}

template <typename Enum, std::size_t N>
const char* enum_name(Enum value, const EnumName<Enum> (&names)[N]) {
  for (const auto& entry : names) {
    if (entry.value == value) return entry.name;
  }
  return "?";
}

void apply_pid(const json& j, const std::string& path, PIDGains& gains) {
  check_keys(j, path, {"kp", "ki", "kd", "derivative_filter_n"});
  get_number(j, path, "kp", gains.kp);
  get_number(j, path, "ki", gains.ki);
  get_number(j, path, "kd", gains.kd);
  get_number(j, path, "derivative_filter_n", gains.derivative_filter_n);
}

void apply_observer(const json& j, const std::string& path,
                    ObserverSettings& obs) {
  check_keys(j, path,
             {"enabled", "lambda", "order", "saturation", "injection", "mode"});
  get_bool(j, path, "enabled", obs.enabled);
  get_number(j, path, "lambda", obs.lambda);
  get_int(j, path, "order", obs.order);
  get_number(j, path, "saturation", obs.saturation);
  get_enum(j, path, "injection", kInjections, obs.lfc_injection);
  get_enum(j, path, "mode", kAvrModes, obs.avr_mode);
}

void apply_document(const json& root, RunConfig& cfg) {
  check_keys(root, "config",
             {"profile", "solver", "plant", "controller", "observer",
              "scenario", "out_dir", "workers", "metadata"});

  if (const json* solver = section(root, "config", "solver")) {
    check_keys(*solver, "solver", {"dt"});
    get_number(*solver, "solver", "dt", cfg.experiment.dt);
  }

  if (const json* plant = section(root, "config", "plant")) {
    check_keys(*plant, "plant", {"lfc", "avr", "model"});
    if (const json* lfc = section(*plant, "plant", "lfc")) {
      const std::string path = "plant.lfc";
      check_keys(*lfc, path,
                 {"droop_r", "t_gov", "t_diesel", "t_vsc", "t_lc", "inertia_h",
                  "damping_d", "f_nominal", "tp_form"});
      LFCParams& p = cfg.experiment.lfc;
      get_number(*lfc, path, "droop_r", p.droop_r);
      get_number(*lfc, path, "t_gov", p.t_gov);
      get_number(*lfc, path, "t_diesel", p.t_diesel);
      get_number(*lfc, path, "t_vsc", p.t_vsc);
      get_number(*lfc, path, "t_lc", p.t_lc);
      get_number(*lfc, path, "inertia_h", p.power_system.inertia_h);
      get_number(*lfc, path, "damping_d", p.power_system.damping_d);
      get_number(*lfc, path, "f_nominal", p.power_system.f_nominal);
      get_enum(*lfc, path, "tp_form", kTpForms, p.power_system.tp_form);
    }
    if (const json* avr = section(*plant, "plant", "avr")) {
      const std::string path = "plant.avr";
      check_keys(*avr, path,
                 {"k_a", "t_a", "k_e", "t_e", "k_g", "t_g", "k_r", "t_r"});
      AVRParams& p = cfg.experiment.avr;
      get_number(*avr, path, "k_a", p.k_a);
      get_number(*avr, path, "t_a", p.t_a);
      get_number(*avr, path, "k_e", p.k_e);
      get_number(*avr, path, "t_e", p.t_e);
      get_number(*avr, path, "k_g", p.k_g);
      get_number(*avr, path, "t_g", p.t_g);
      get_number(*avr, path, "k_r", p.k_r);
      get_number(*avr, path, "t_r", p.t_r);
    }
    if (plant->contains("model")) {
      const json& m = plant->at("model");
      if (m.is_null()) {
        cfg.plant_model.reset();
      } else if (m.is_object()) {
        check_keys(m, "plant.model", {"num", "den"});
        if (!m.contains("num") || !m.contains("den")) {
          fail("plant.model", "needs both num and den coefficient arrays");
        }
        const auto num = number_array(m.at("num"), "plant.model.num");
        const auto den = number_array(m.at("den"), "plant.model.den");
        try {
          cfg.plant_model = TransferFunction(Polynomial(num), Polynomial(den));
        } catch (const std::exception& e) {
          fail("plant.model", e.what());
        }
      } else {
        fail("plant.model", "expected an object or null");
      }
    }
  }

  if (const json* ctl = section(root, "config", "controller")) {
    check_keys(*ctl, "controller", {"lfc", "avr"});
    if (const json* lfc = section(*ctl, "controller", "lfc")) {
      apply_pid(*lfc, "controller.lfc", cfg.experiment.lfc_gains);
    }
    if (const json* avr = section(*ctl, "controller", "avr")) {
      apply_pid(*avr, "controller.avr", cfg.experiment.avr_gains);
    }
  }

  if (const json* obs = section(root, "config", "observer")) {
    check_keys(*obs, "observer", {"lfc", "avr"});
    if (const json* lfc = section(*obs, "observer", "lfc")) {
      apply_observer(*lfc, "observer.lfc", cfg.experiment.lfc_observer);
    }
    if (const json* avr = section(*obs, "observer", "avr")) {
      apply_observer(*avr, "observer.avr", cfg.experiment.avr_observer);
    }
  }

  if (const json* sc = section(root, "config", "scenario")) {
    check_keys(*sc, "scenario",
               {"case", "t_step", "lfc_horizon", "avr_horizon", "case_delay",
                "noise", "pf_pv", "pf_load", "seed"});
    get_string(*sc, "scenario", "case", cfg.case_id);
    get_number(*sc, "scenario", "t_step", cfg.experiment.t_step);
    get_number(*sc, "scenario", "lfc_horizon", cfg.experiment.lfc_horizon);
    get_number(*sc, "scenario", "avr_horizon", cfg.experiment.avr_horizon);
    get_number(*sc, "scenario", "case_delay", cfg.experiment.case_delay);
    if (const json* noise = section(*sc, "scenario", "noise")) {
      check_keys(*noise, "scenario.noise", {"sigma", "hold_interval"});
      get_number(*noise, "scenario.noise", "sigma",
                 cfg.experiment.noise.sigma);
      get_number(*noise, "scenario.noise", "hold_interval",
                 cfg.experiment.noise.hold_interval);
    }
    get_number(*sc, "scenario", "pf_pv", cfg.experiment.pf_pv);
    get_number(*sc, "scenario", "pf_load", cfg.experiment.pf_load);
    get_uint64(*sc, "scenario", "seed", cfg.experiment.seed);
  }

  get_string(root, "config", "out_dir", cfg.out_dir);
  get_int(root, "config", "workers", cfg.workers);

  if (root.contains("metadata")) {
    const json& meta = root.at("metadata");
    if (!meta.is_object()) fail("metadata", "expected an object");
    for (const auto& item : meta.items()) {
      if (!item.value().is_string()) {
        fail("metadata." + item.key(), "expected a string");
      }
      cfg.metadata[item.key()] = item.value().get<std::string>();
    }
  }
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text, nullptr, /*allow_exceptions=*/true,
                       /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                e.what());
  }
}

// Guards against profile files that re-base onto each other in a cycle.
thread_local int g_profile_depth = 0;

struct DepthGuard {
  DepthGuard() {
    if (++g_profile_depth > 8) {
      --g_profile_depth;
      throw std::invalid_argument(
          "profile inheritance deeper than 8 levels; cycle suspected");
    }
  }
  ~DepthGuard() { --g_profile_depth; }
};

bool looks_like_path(const std::string& name) {
  return name.find('/') != std::string::npos ||
         (name.size() > 5 && name.compare(name.size() - 5, 5, ".json") == 0);
}

}  // namespace

void RunConfig::validate() const {
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0)) fail(field, "must be > 0");
  };
  auto non_negative = [](double v, const char* field) {
    if (!(v >= 0.0)) fail(field, "must be >= 0");
  };

  experiment.lfc.validate();
  experiment.avr.validate();
  experiment.lfc_gains.validate();
  experiment.avr_gains.validate();
  experiment.noise.validate();

  positive(experiment.dt, "solver.dt");
  positive(experiment.lfc_horizon, "scenario.lfc_horizon");
  positive(experiment.avr_horizon, "scenario.avr_horizon");
  non_negative(experiment.t_step, "scenario.t_step");
  non_negative(experiment.case_delay, "scenario.case_delay");
  non_negative(experiment.pf_pv, "scenario.pf_pv");
  non_negative(experiment.pf_load, "scenario.pf_load");

  auto check_observer = [](const ObserverSettings& obs, const std::string& p) {
    if (!(obs.lambda > 0.0)) fail(p + ".lambda", "must be > 0");
    if (obs.order < 0) fail(p + ".order", "must be >= 0 (0 = automatic)");
    if (!(obs.saturation > 0.0)) {
      fail(p + ".saturation", "must be > 0 (use a large value to disable)");
    }
  };
  check_observer(experiment.lfc_observer, "observer.lfc");
  check_observer(experiment.avr_observer, "observer.avr");

  if (workers < 1) fail("workers", "must be >= 1");
  if (out_dir.empty()) fail("out_dir", "must not be empty");

  if (plant_model && !plant_model->proper()) {
    fail("plant.model", "must be a proper transfer function");
  }

  static const std::regex test_id("test-(0[1-9]|1[0-6])");
  const auto ids = paper_case_ids();
  const bool known_case =
      std::find(ids.begin(), ids.end(), case_id) != ids.end() ||
      std::regex_match(case_id, test_id);
  if (!known_case) {
    std::string valid;
    for (const auto& id : ids) {
      if (!valid.empty()) valid += ", ";
      valid += id;
    }
    fail("scenario.case", "unknown case \"" + case_id +
                              "\" (expected one of: " + valid +
                              ", or test-01..test-16)");
  }
}

std::vector<std::string> builtin_profile_names() {
  return {"paper-appendix-a", "paper-hardware-b"};
}

RunConfig builtin_profile(const std::string& name) {
  if (name == "paper-appendix-a") {
    return RunConfig{};
  }
  if (name == "paper-hardware-b") {
    RunConfig cfg;
    cfg.profile = name;
    // Identified second-order plant from the hardware rig, with the
    // integral gain and filter constant used there.
    cfg.plant_model = TransferFunction(Polynomial{2.68e5},
                                       Polynomial{4661.0, 303.4, 1.0});
    cfg.experiment.lfc_gains = PIDGains{0.0, 0.01, 0.0, 100.0};
    cfg.experiment.avr_gains = PIDGains{0.0, 0.01, 0.0, 100.0};
    cfg.experiment.lfc_observer.lambda = 0.02;
    cfg.experiment.avr_observer.lambda = 0.02;
    cfg.metadata = {
        {"synchronous_machine", "415 V L-L, 50 Hz, 3 kVA, 3-phase, 1500 rpm"},
        {"solar_pv_stc",
         "Voc 150.0 V, Vmp 130.35 V, Isc 8.83 A, Imp 8.41 A, Pmp 1096.36 W"},
        {"boost_inductor", "1.6 mH"},
        {"vsc_interfacing_inductance", "7.5 mH"},
        {"vsc_ripple_filter", "25 uF"},
        {"dc_link", "250 V, 4500 uF"},
        {"plant_identification",
         "second-order least-squares fit of logged duty-cycle vs frequency "
         "data, 98.3% fit"},
    };
    return cfg;
  }
  std::string names;
  for (const auto& n : builtin_profile_names()) {
    if (!names.empty()) names += ", ";
    names += n;
  }
  throw std::invalid_argument("unknown profile \"" + name +
                              "\" (built-in profiles: " + names + ")");
}

RunConfig resolve_profile(const std::string& name) {
  DepthGuard guard;
  if (looks_like_path(name)) {
    RunConfig base;
    base.profile = name;
    return load_run_config(name, base);
  }
  if (const char* dir = std::getenv(kProfileDirEnv)) {
    const std::string path = std::string(dir) + "/" + name + ".json";
    if (std::ifstream probe(path); probe.good()) {
      RunConfig base;
      base.profile = name;
      return load_run_config(path, base);
    }
  }
  return builtin_profile(name);
}

RunConfig parse_run_config(const std::string& json_text,
                           const RunConfig& base) {
  const json root = parse_document(json_text);
  if (!root.is_object()) {
    throw std::invalid_argument("config root must be a JSON object");
  }
  RunConfig cfg = base;
  if (root.contains("profile")) {
    std::string profile;
    get_string(root, "config", "profile", profile);
    if (profile != base.profile) {
      cfg = resolve_profile(profile);
    }
    cfg.profile = profile;
  }
  apply_document(root, cfg);
  return cfg;
}

RunConfig load_run_config(const std::string& path, const RunConfig& base) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return parse_run_config(buffer.str(), base);
}

namespace {

json pid_json(const PIDGains& g) {
  return json{{"kp", g.kp},
              {"ki", g.ki},
              {"kd", g.kd},
              {"derivative_filter_n", g.derivative_filter_n}};
}

json observer_json(const ObserverSettings& o, bool lfc) {
  json j{{"enabled", o.enabled},
         {"lambda", o.lambda},
         {"order", o.order},
         {"saturation", o.saturation}};
  if (lfc) {
    j["injection"] = enum_name(o.lfc_injection, kInjections);
  } else {
    j["mode"] = enum_name(o.avr_mode, kAvrModes);
  }
  return j;
}

json config_json(const RunConfig& cfg) {
  const ExperimentConfig& e = cfg.experiment;
  json plant{
      {"lfc",
       {{"droop_r", e.lfc.droop_r},
        {"t_gov", e.lfc.t_gov},
        {"t_diesel", e.lfc.t_diesel},
        {"t_vsc", e.lfc.t_vsc},
        {"t_lc", e.lfc.t_lc},
        {"inertia_h", e.lfc.power_system.inertia_h},
        {"damping_d", e.lfc.power_system.damping_d},
        {"f_nominal", e.lfc.power_system.f_nominal},
        {"tp_form", enum_name(e.lfc.power_system.tp_form, kTpForms)}}},
      {"avr",
       {{"k_a", e.avr.k_a},
        {"t_a", e.avr.t_a},
        {"k_e", e.avr.k_e},
        {"t_e", e.avr.t_e},
        {"k_g", e.avr.k_g},
        {"t_g", e.avr.t_g},
        {"k_r", e.avr.k_r},
        {"t_r", e.avr.t_r}}}};
  if (cfg.plant_model) {
    plant["model"] = {{"num", cfg.plant_model->num().coeffs()},
                      {"den", cfg.plant_model->den().coeffs()}};
  } else {
    plant["model"] = nullptr;
  }

  return json{
      {"profile", cfg.profile},
      {"solver", {{"dt", e.dt}}},
      {"plant", plant},
      {"controller", {{"lfc", pid_json(e.lfc_gains)},
                      {"avr", pid_json(e.avr_gains)}}},
      {"observer", {{"lfc", observer_json(e.lfc_observer, true)},
                    {"avr", observer_json(e.avr_observer, false)}}},
      {"scenario",
       {{"case", cfg.case_id},
        {"t_step", e.t_step},
        {"lfc_horizon", e.lfc_horizon},
        {"avr_horizon", e.avr_horizon},
        {"case_delay", e.case_delay},
        {"noise",
         {{"sigma", e.noise.sigma}, {"hold_interval", e.noise.hold_interval}}},
        {"pf_pv", e.pf_pv},
        {"pf_load", e.pf_load},
        {"seed", e.seed}}},
      {"out_dir", cfg.out_dir},
      {"workers", cfg.workers},
      {"metadata", cfg.metadata}};
}

}  // namespace

std::string to_json(const RunConfig& config) {
  return config_json(config).dump(2) + "\n";
}

std::string run_manifest(const RunConfig& config, const std::string& command) {
  json manifest{{"tool", "mgsim"},
                {"version", kToolVersion},
                {"command", command},
                {"config", config_json(config)}};
  return manifest.dump(2) + "\n";
}

}  // namespace mgsim
