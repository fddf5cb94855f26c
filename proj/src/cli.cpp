#include "pairsrc/cli.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "pairsrc/characterize.hpp"
#include "pairsrc/control.hpp"

namespace pairsrc::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kConfigKeys = {"gamma", "p1",    "p2",      "p2_negative",
                                           "theta1", "theta2", "n",      "delta",
                                           "J",      "B1",     "B2",     "max_den",
                                           "shots",  "seed"};

double number_field(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return number_field(j, key);
}

std::int64_t integer_field(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) {
    throw ConfigError(std::string("field '") + key + "' must be an integer");
  }
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > INT64_MAX) {
    throw ConfigError(std::string("field '") + key + "' is out of range");
  }
  return v.get<std::int64_t>();
}

json populations_json(const Populations& p) {
  return {{"f00", p.f00}, {"f01", p.f01}, {"f10", p.f10}, {"f11", p.f11}};
}

json knob_json(const ControlKnob& knob) {
  json k = {{"n", knob.n()}, {"delta", knob.delta()}, {"ndelta", knob.ndelta()}};
  if (const auto& prov = knob.provenance()) {
    k["j"] = prov->j;
    k["q_num"] = prov->q_num;
    k["q_den"] = prov->q_den;
  }
  return k;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct Prepared {
  ExperimentConfig config;
  SourceSpec spec;
  ControlKnob knob;
};

Prepared prepare(const json& raw) {
  auto config = ExperimentConfig::from_json(raw);
  return {config, config.source_spec(), config.knob()};
}

json base_report(const Prepared& p, const EmissionState& emission, std::uint64_t seed) {
  const auto analytic = populations_analytic(p.spec, p.knob);
  const auto exact = populations_exact(emission.state);
  const auto m = species_moments(p.spec);
  json report;
  report["config"] = p.config.to_json();
  report["knob"] = knob_json(p.knob);
  report["populations_raw"] = populations_json(analytic.raw);
  report["populations_normalized"] = populations_json(analytic.normalized);
  report["populations_exact"] = populations_json(exact.normalized);
  report["moments"] = {{"C", m.C}, {"S", m.S}};
  report["raw_norm"] = emission.raw_norm;
  report["histogram"] = nullptr;
  report["seed"] = seed;
  return report;
}

CommandResult config_failure(const std::string& what) {
  return {kExitConfig, "", "config error: " + what + "\n"};
}

CommandResult domain_failure(const std::string& what) {
  return {kExitDomain, "", "domain error: " + what + "\n"};
}

CommandResult infeasible(json diag) {
  const std::string msg = diag.value("error", std::string("infeasible"));
  return {kExitInfeasible, dump(diag), "infeasible: " + msg + "\n"};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
}

template <typename Fn>
CommandResult with_config(const std::filesystem::path& path, Fn&& fn) {
  json raw;
  try {
    raw = read_json_file(path);
  } catch (const ConfigError& e) {
    return config_failure(e.what());
  }
  return fn(raw);
}

}  // namespace

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

// ---------------------------------------------------------------------------
// ExperimentConfig

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kConfigKeys.contains(key)) throw ConfigError("unknown config field '" + key + "'");
  }
  for (const char* key : {"gamma", "p1", "theta1", "n"}) {
    if (!j.contains(key)) throw ConfigError(std::string("missing required field '") + key + "'");
  }

  ExperimentConfig c;
  c.gamma = number_field(j, "gamma");
  c.p1 = number_field(j, "p1");
  c.p2 = optional_number(j, "p2");
  c.theta1 = number_field(j, "theta1");
  c.theta2 = optional_number(j, "theta2");
  if (j.contains("p2_negative")) {
    if (!j["p2_negative"].is_boolean()) throw ConfigError("field 'p2_negative' must be a boolean");
    c.p2_negative = j["p2_negative"].get<bool>();
  } else if (c.p2) {
    c.p2_negative = *c.p2 < 0.0;
  }
  if (c.p2 && *c.p2 != 0.0 && (*c.p2 < 0.0) != c.p2_negative) {
    throw ConfigError("sign of p2 disagrees with p2_negative");
  }

  const auto n = integer_field(j, "n");
  if (n < 0) throw ConfigError("field 'n' must be a non-negative integer");
  c.n = static_cast<std::uint64_t>(n);

  const bool has_delta = j.contains("delta");
  const int field_keys = static_cast<int>(j.contains("J")) + j.contains("B1") +
                         j.contains("B2") + j.contains("max_den");
  if (has_delta == (field_keys > 0)) {
    throw ConfigError("exactly one knob form required: {n, delta} or {n, J, B1, B2, max_den}");
  }
  if (has_delta) {
    c.delta = number_field(j, "delta");
  } else {
    if (field_keys != 4) throw ConfigError("field knob needs all of J, B1, B2, max_den");
    c.fields = FieldParams{number_field(j, "J"), number_field(j, "B1"), number_field(j, "B2")};
    c.max_den = integer_field(j, "max_den");
  }

  if (j.contains("shots")) c.shots = integer_field(j, "shots");
  if (j.contains("seed")) {
    const auto& s = j["seed"];
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() &&
                                   s.get<std::int64_t>() < 0)) {
      throw ConfigError("field 'seed' must be a non-negative 64-bit integer");
    }
    c.seed = s.get<std::uint64_t>();
  }

  // Surface source and knob violations at load time.
  c.source_spec();
  c.knob();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  return from_json(read_json_file(path));
}

json ExperimentConfig::to_json() const {
  const auto spec = source_spec();
  json j = {{"gamma", gamma},   {"p1", p1},         {"p2", spec.p2},
            {"p2_negative", p2_negative}, {"theta1", theta1}, {"theta2", spec.theta2},
            {"n", n}};
  if (delta) {
    j["delta"] = *delta;
  } else {
    j["J"] = fields->J;
    j["B1"] = fields->B1;
    j["B2"] = fields->B2;
    j["max_den"] = *max_den;
  }
  if (shots) j["shots"] = *shots;
  if (seed) j["seed"] = *seed;
  return j;
}

SourceSpec ExperimentConfig::source_spec() const {
  SourceSpec spec;
  try {
    spec = SourceSpec::from_primary(gamma, p1, theta1, p2_negative);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (p2) spec.p2 = *p2;
  if (theta2) spec.theta2 = *theta2;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

ControlKnob ExperimentConfig::knob() const {
  try {
    if (delta) return ControlKnob(n, *delta);
    return ControlKnob::from_fields(n, *fields, *max_den);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid knob: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Commands

CommandResult cmd_simulate(const json& raw) {
  try {
    auto p = prepare(raw);
    const auto emission = controlled_emission(p.spec, p.knob);
    return {kExitOk, dump(base_report(p, emission, p.config.seed.value_or(0))), ""};
  } catch (const ConfigError& e) {
    return config_failure(e.what());
  } catch (const std::domain_error& e) {
    return domain_failure(e.what());
  }
}

CommandResult cmd_simulate(const std::filesystem::path& config) {
  return with_config(config, [](const json& raw) { return cmd_simulate(raw); });
}

CommandResult cmd_sample(const json& raw, std::optional<std::int64_t> shots,
                         std::optional<std::uint64_t> seed) {
  try {
    auto p = prepare(raw);
    if (shots) p.config.shots = shots;
    if (seed) p.config.seed = seed;
    if (!p.config.shots) return domain_failure("shot count required (--shots or 'shots')");
    if (*p.config.shots < 1) {
      return domain_failure("shot count must be >= 1, got " + std::to_string(*p.config.shots));
    }
    const std::uint64_t used_seed = p.config.seed.value_or(0);
    p.config.seed = used_seed;

    const auto emission = controlled_emission(p.spec, p.knob);
    Rng rng(used_seed);
    std::array<std::uint64_t, 4> counts{};
    for (std::int64_t s = 0; s < *p.config.shots; ++s) {
      ++counts[nonlocal_bell_measurement(emission.state, rng).outcome.index()];
    }
    auto report = base_report(p, emission, used_seed);
    report["histogram"] = {
        {"00", counts[0]}, {"01", counts[1]}, {"10", counts[2]}, {"11", counts[3]}};
    return {kExitOk, dump(report), ""};
  } catch (const ConfigError& e) {
    return config_failure(e.what());
  } catch (const std::domain_error& e) {
    return domain_failure(e.what());
  }
}

CommandResult cmd_sample(const std::filesystem::path& config, std::optional<std::int64_t> shots,
                         std::optional<std::uint64_t> seed) {
  return with_config(config, [&](const json& raw) { return cmd_sample(raw, shots, seed); });
}

CommandResult cmd_region(double gamma, int resolution) {
  if (resolution < 2) return config_failure("--resolution must be >= 2");
  std::vector<RegionPoint> grid;
  try {
    grid = region_grid(gamma, resolution);
  } catch (const std::invalid_argument& e) {
    return config_failure(e.what());
  }
  std::string out = "f00,f11,feasible,s_squared,ndelta\n";
  out.reserve(out.size() + grid.size() * 48);
  for (const auto& pt : grid) {
    out += format_number(pt.f00_target);
    out += ',';
    out += format_number(pt.f11_target);
    if (pt.solution) {
      out += ",1,";
      out += format_number(pt.solution->s_squared);
      out += ',';
      out += format_number(pt.solution->ndelta_principal);
    } else {
      out += ",0,,";
    }
    out += '\n';
  }
  return {kExitOk, std::move(out), ""};
}

CommandResult cmd_solve(double gamma, double f00, double f11) {
  SteeringResult r = SteeringResult::fail(SteeringFailure::kDegenerate, "");
  try {
    r = solve_ndelta(gamma, f00, f11);
  } catch (const std::invalid_argument& e) {
    return domain_failure(e.what());
  }
  if (!r) {
    return infeasible({{"feasible", false},
                       {"error", "infeasible steering target"},
                       {"violated", to_string(r.failure())},
                       {"detail", r.detail()}});
  }
  const auto& s = r.solution();
  json j = {{"gamma", gamma},
            {"f00", f00},
            {"f11", f11},
            {"feasible", true},
            {"s_squared", s.s_squared},
            {"ndelta", s.ndelta_principal},
            {"required_C_squared", s.required_C_squared},
            {"required_S_squared", s.required_S_squared}};
  return {kExitOk, dump(j), ""};
}

CommandResult cmd_infer(double f00, double f01, double f11, double ndelta) {
  try {
    const auto e = infer_parameters(f00, f01, f11, ndelta);
    json j = {{"sin2_gamma", e.sin2_gamma},
              {"C_squared", e.C_squared},
              {"S_squared", e.S_squared},
              {"residual", e.residual}};
    return {kExitOk, dump(j), ""};
  } catch (const SingularSystemError& e) {
    return infeasible({{"error", "singular system"}, {"detail", e.what()}});
  } catch (const UnidentifiableError& e) {
    return infeasible({{"error", "unidentifiable parameters"}, {"detail", e.what()}});
  } catch (const std::invalid_argument& e) {
    return domain_failure(e.what());
  }
}

// ---------------------------------------------------------------------------
// Argument parsing

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entangled-pair source simulator: populations, sampling, steering, inference"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::int64_t> shots;
  std::optional<std::uint64_t> seed;
  double gamma = 0.0, f00 = 0.0, f01 = 0.0, f11 = 0.0, ndelta = 0.0;
  int resolution = 0;

  auto* simulate = app.add_subcommand("simulate", "Analytic and exact populations as JSON");
  simulate->add_option("config", config_path, "Experiment config (JSON)")->required();

  auto* sample = app.add_subcommand("sample", "Finite-shot Bell readout histogram as JSON");
  sample->add_option("config", config_path, "Experiment config (JSON)")->required();
  sample->add_option("--shots", shots, "Number of shots (overrides config)");
  sample->add_option("--seed", seed, "RNG seed (overrides config; default 0)");

  auto* region = app.add_subcommand("region", "Steering feasibility grid as CSV");
  region->add_option("--gamma", gamma, "Source angle gamma (radians)")->required();
  region->add_option("--resolution", resolution, "Grid points per axis (>= 2)")->required();

  auto* solve = app.add_subcommand("solve", "Mismatch that steers f00 and f11");
  solve->add_option("--gamma", gamma, "Source angle gamma (radians)")->required();
  solve->add_option("--f00", f00, "Target f00")->required();
  solve->add_option("--f11", f11, "Target f11")->required();

  auto* infer = app.add_subcommand("infer", "Emission parameters from measured populations");
  infer->add_option("--f00", f00, "Measured f00")->required();
  infer->add_option("--f01", f01, "Measured f01")->required();
  infer->add_option("--f11", f11, "Measured f11")->required();
  infer->add_option("--ndelta", ndelta, "Known n*delta")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "flag error: " << e.what() << "\n";
    return kExitConfig;
  }

  CommandResult result;
  if (*simulate) {
    result = cmd_simulate(std::filesystem::path(config_path));
  } else if (*sample) {
    result = cmd_sample(std::filesystem::path(config_path), shots, seed);
  } else if (*region) {
    result = cmd_region(gamma, resolution);
  } else if (*solve) {
    result = cmd_solve(gamma, f00, f11);
  } else {
    result = cmd_infer(f00, f01, f11, ndelta);
  }
  out << result.out;
  err << result.err;
  return result.exit_code;
}

}  // namespace pairsrc::cli
