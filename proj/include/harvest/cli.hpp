#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "harvest/dispersion.hpp"
#include "harvest/harvesting.hpp"
#include "harvest/quadrature.hpp"
#include "harvest/sweep.hpp"
#include "harvest/units.hpp"

namespace harvest::cli {

enum class Command { Dispersion, Stability, Harvest, Sweep, Validate };
enum class OutputFormat { Csv, Json };

std::string_view to_string(Command c);
Command parse_command(std::string_view name);

/// Everything a run can be told, before defaults. Flags and config files both
/// fill one of these; explicit flags win when the two are merged.
struct Settings {
  std::optional<Command> command;
  std::optional<double> R, A;
  std::optional<double> m, omega_z, g_c, g_d, rho0;
  std::optional<std::string> kind;
  std::optional<double> omega_gap, sigma, separation;
  std::vector<std::string> axes;  // "name:min:max:count[:log]" or "name=v1,v2,..."
  std::optional<double> rel_tol, abs_tol, envelope_cutoff;
  std::optional<int> max_subdivisions, tail_lobes;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<int> workers;
  std::optional<double> x_max;
  std::optional<int> points;
  std::optional<std::string> config;
};

/// One fully resolved unit of work.
struct RunConfig {
  Command command = Command::Harvest;
  double R = 0.0;
  double A = 0.0;
  std::optional<CondensateParams> physical;
  DispersionKind kind = DispersionKind::DipolarBogoliubov;
  DetectorPair pair;
  std::vector<sweep::SweepAxis> axes;
  quadrature::QuadratureSpec spec;
  std::optional<std::string> out;
  OutputFormat format = OutputFormat::Json;
  std::optional<int> workers;
  double x_max = 10.0;
  int points = 201;
};

/// Parses one "--axis" argument.
sweep::SweepAxis parse_axis(const std::string& text);

/// Reads a config object (flag names with underscores; "_"-prefixed keys are
/// comments). A "panels" array expands into one Settings per panel.
std::vector<Settings> settings_from_json(const nlohmann::json& j);

/// Overlays `top` on `base` field by field.
Settings merge(const Settings& base, const Settings& top);

/// Applies defaults and cross-field checks. Throws UsageError / ConfigError.
RunConfig resolve(const Settings& s);

/// Flags only; the --config file is not read here. Throws UsageError, or
/// returns nullopt after printing help.
std::optional<Settings> parse_flags(const std::vector<std::string>& args, std::ostream& out);

/// Flags plus config file, resolved. One RunConfig per panel.
std::vector<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out);

/// Executes one run; returns the exit code (0 ok, 1 computation error).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full entry point with the exit-code taxonomy: 0 success, 1 computation
/// error, 2 validation / usage / config error.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace harvest::cli
