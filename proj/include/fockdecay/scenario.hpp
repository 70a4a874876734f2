// SPDX-License-Identifier: Apache-2.0

// Declarative scenario runs: a JSON document (schema_version 1, see
// docs/config_schema.md) describes modes, optional mixing, the initial state,
// a uniform time grid, the routes to evaluate and the observables to record.

#pragma once

#include <complex>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fockdecay/fock.hpp"
#include "fockdecay/mixing.hpp"

namespace fockdecay {

inline constexpr int kSchemaVersion = 1;

const char* library_version() noexcept;

enum class Route { Kraus, Ode, Heisenberg };
enum class Observable { Number, Strangeness, QPlus, QMinus, Occupations };

std::string_view to_string(Route r) noexcept;
std::string_view to_string(Observable o) noexcept;
Route parse_route(std::string_view name);

struct NumberInit {
  Occupation occupations;
  bool operator==(const NumberInit&) const = default;
};
struct CoherentInit {
  std::size_t mode = 0;
  std::complex<double> alpha;
  bool operator==(const CoherentInit&) const = default;
};
struct PoissonInit {
  std::size_t mode = 0;
  double nbar = 0.0;
  bool operator==(const PoissonInit&) const = default;
};
struct MixtureInit {
  std::vector<std::pair<double, Occupation>> terms;
  bool operator==(const MixtureInit&) const = default;
};
using InitialState = std::variant<NumberInit, CoherentInit, PoissonInit, MixtureInit>;

struct TimeGrid {
  double start = 0.0;
  double end = 0.0;
  int count = 1;

  std::vector<double> points() const;
  bool operator==(const TimeGrid&) const = default;
};

struct ScenarioConfig {
  std::string name;
  std::vector<ModeSpec> modes;
  std::optional<MixingParams> mixing;
  /// Mixing angles to sweep; empty means the single mixing.theta.
  std::vector<double> theta_sweep;
  InitialState initial_state;
  TimeGrid time_grid;
  std::vector<Route> routes;
  std::vector<Observable> observables;
  std::string output_path;
  /// RK4 step; unset means 1e-3 / largest width.
  std::optional<double> ode_step;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses and validates. Throws Error with ErrorKind::Config and a code such
/// as CONFIG_JSON_MALFORMED, CONFIG_MISSING_FIELD, CONFIG_TYPE_MISMATCH or
/// CONFIG_WIDTH_NEGATIVE; messages start with the JSON path of the offending
/// value.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical JSON (sorted keys, compact).
std::string to_json(const ScenarioConfig& config);

/// Builds the space, initial state and models without evolving anything.
/// Failures are reported as ErrorKind::Config.
void validate_scenario(const ScenarioConfig& config);

struct RunReport {
  std::vector<std::filesystem::path> files;
  std::filesystem::path manifest;
  /// "kraus_vs_ode" etc. -> largest absolute difference over all recorded values.
  std::map<std::string, double> deviations;
  double max_deviation = 0.0;
};

/// Evaluates every (sweep point, route, observable) and writes one CSV per
/// combination plus `manifest.txt` into `out_dir`.
RunReport run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir);

}  // namespace fockdecay
