// Command-line surface: experiment configs, JSON reports, CSV region export.
//
// Exit codes: 0 success, 2 config/flag validation, 3 domain precondition,
// 4 mathematical infeasibility or singularity.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pairsrc/distortion.hpp"
#include "pairsrc/source.hpp"

namespace pairsrc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitInfeasible = 4;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat JSON experiment description. The knob is either {n, delta} or
/// {n, J, B1, B2, max_den}; p2 and theta2 are derived unless given, in which
/// case they must satisfy the source constraints.
struct ExperimentConfig {
  double gamma = 0.0;
  double p1 = 1.0;
  std::optional<double> p2;
  bool p2_negative = false;
  double theta1 = 0.0;
  std::optional<double> theta2;

  std::uint64_t n = 0;
  std::optional<double> delta;
  std::optional<FieldParams> fields;
  std::optional<std::int64_t> max_den;

  std::optional<std::int64_t> shots;
  std::optional<std::uint64_t> seed;

  /// Throws ConfigError with a one-line message naming the violated rule.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);

  /// Echo that from_json accepts and that reproduces the same run.
  nlohmann::json to_json() const;

  SourceSpec source_spec() const;
  ControlKnob knob() const;
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string out;
  std::string err;
};

CommandResult cmd_simulate(const std::filesystem::path& config);
CommandResult cmd_simulate(const nlohmann::json& config);

/// shots/seed override the config values; seed falls back to 0.
CommandResult cmd_sample(const std::filesystem::path& config,
                         std::optional<std::int64_t> shots,
                         std::optional<std::uint64_t> seed);
CommandResult cmd_sample(const nlohmann::json& config, std::optional<std::int64_t> shots,
                         std::optional<std::uint64_t> seed);

CommandResult cmd_region(double gamma, int resolution);
CommandResult cmd_solve(double gamma, double f00, double f11);
CommandResult cmd_infer(double f00, double f01, double f11, double ndelta);

/// Parses argv and dispatches; writes the command output to `out` and
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

}  // namespace pairsrc::cli
