// SPDX-License-Identifier: Apache-2.0

#include "fockdecay/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fockdecay/channel.hpp"
#include "fockdecay/error.hpp"
#include "fockdecay/flavour.hpp"
#include "fockdecay/heisenberg.hpp"
#include "fockdecay/master.hpp"

namespace fockdecay {

using json = nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& code, const std::string& path,
                               const std::string& what) {
  throw Error(ErrorKind::Config, code, path + ": " + what);
}

// Typed access to a JSON object with path-qualified errors.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const json& value() const { return value_; }
  const std::string& path() const { return path_; }

  void require_object(std::initializer_list<std::string_view> allowed) const {
    if (!value_.is_object()) config_error("CONFIG_TYPE_MISMATCH", path_, "expected an object");
    for (const auto& [key, _] : value_.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        config_error("CONFIG_UNKNOWN_FIELD", path_ + "." + key, "unknown field");
      }
    }
  }

  bool has(const std::string& key) const { return value_.contains(key); }

  Node at(const std::string& key) const {
    if (!value_.contains(key)) config_error("CONFIG_MISSING_FIELD", path_ + "." + key, "required field is missing");
    return {value_.at(key), path_ + "." + key};
  }

  Node at(std::size_t i) const { return {value_.at(i), path_ + "[" + std::to_string(i) + "]"}; }

  std::size_t array_size() const {
    if (!value_.is_array()) config_error("CONFIG_TYPE_MISMATCH", path_, "expected an array");
    return value_.size();
  }

  double number() const {
    if (!value_.is_number()) config_error("CONFIG_TYPE_MISMATCH", path_, "expected a number");
    const double x = value_.get<double>();
    if (!std::isfinite(x)) config_error("CONFIG_TYPE_MISMATCH", path_, "expected a finite number");
    return x;
  }

  long long integer() const {
    if (!value_.is_number_integer()) config_error("CONFIG_TYPE_MISMATCH", path_, "expected an integer");
    return value_.get<long long>();
  }

  std::string string() const {
    if (!value_.is_string()) config_error("CONFIG_TYPE_MISMATCH", path_, "expected a string");
    return value_.get<std::string>();
  }

 private:
  const json& value_;
  std::string path_;
};

Occupation read_occupation(const Node& node) {
  Occupation occ;
  for (std::size_t i = 0; i < node.array_size(); ++i) {
    const long long n = node.at(i).integer();
    if (n < 0) config_error("CONFIG_OCCUPATION_NEGATIVE", node.at(i).path(), "occupation must be >= 0");
    occ.push_back(static_cast<int>(n));
  }
  return occ;
}

void check_occupation(const Occupation& occ, const std::vector<ModeSpec>& modes,
                      const std::string& path) {
  if (occ.size() != modes.size()) {
    config_error("CONFIG_OCCUPATION_LENGTH", path,
                 "expected " + std::to_string(modes.size()) + " occupations, got " +
                     std::to_string(occ.size()));
  }
  for (std::size_t j = 0; j < occ.size(); ++j) {
    const int cutoff = modes[j].statistics == Statistics::Fermion ? 1 : modes[j].cutoff;
    if (occ[j] > cutoff) {
      config_error("CONFIG_OCCUPATION_EXCEEDS_CUTOFF", path + "[" + std::to_string(j) + "]",
                   "occupation " + std::to_string(occ[j]) + " exceeds cutoff " +
                       std::to_string(cutoff));
    }
  }
}

std::size_t read_mode_index(const Node& node, std::size_t mode_count) {
  const long long m = node.integer();
  if (m < 0 || static_cast<std::size_t>(m) >= mode_count) {
    config_error("CONFIG_MODE_OUT_OF_RANGE", node.path(),
                 "mode index must be in [0, " + std::to_string(mode_count) + ")");
  }
  return static_cast<std::size_t>(m);
}

Observable parse_observable(const Node& node) {
  const std::string s = node.string();
  if (s == "N") return Observable::Number;
  if (s == "S") return Observable::Strangeness;
  if (s == "Qplus") return Observable::QPlus;
  if (s == "Qminus") return Observable::QMinus;
  if (s == "occupations") return Observable::Occupations;
  config_error("CONFIG_OBSERVABLE_UNKNOWN", node.path(), "unknown observable '" + s + "'");
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json occupation_json(const Occupation& occ) { return json(occ); }

// Per-scenario-point evaluation: values[route][observable column] over time.
using Series = std::vector<std::vector<double>>;  // [column][time]

struct PreparedPoint {
  SpacePtr space;
  std::optional<DecayModel> model;
  std::optional<DensityOperator> rho0;
  std::optional<TwoFlavourParams> flavour;
};

DensityOperator build_initial_state(const SpacePtr& space, const InitialState& init) {
  return std::visit(
      [&](const auto& s) -> DensityOperator {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NumberInit>) {
          return number_state(space, s.occupations);
        } else if constexpr (std::is_same_v<T, CoherentInit>) {
          return coherent_state(space, s.mode, s.alpha).state;
        } else if constexpr (std::is_same_v<T, PoissonInit>) {
          return poisson_mixture(space, s.mode, s.nbar).state;
        } else {
          return number_mixture(space, s.terms);
        }
      },
      init);
}

std::vector<double> sweep_thetas(const ScenarioConfig& config) {
  if (!config.mixing) return {0.0};
  if (config.theta_sweep.empty()) return {config.mixing->theta};
  return config.theta_sweep;
}

PreparedPoint prepare(const ScenarioConfig& config, double theta) {
  PreparedPoint p;
  try {
    p.space = FockSpace::make(config.modes);
    p.rho0 = build_initial_state(p.space, config.initial_state);
    if (config.mixing) {
      TwoFlavourParams f;
      f.mixing = *config.mixing;
      f.mixing.theta = theta;
      f.mixing = f.mixing.canonical();
      f.masses = {config.modes[0].mass, config.modes[1].mass};
      f.widths = {config.modes[0].width, config.modes[1].width};
      p.flavour = f;
      p.model = build_mixed_model(p.space, f);
    } else {
      p.model = DecayModel::unmixed(p.space);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    throw Error(ErrorKind::Config, "CONFIG_" + e.code(), e.what());
  }
  return p;
}

struct Columns {
  std::vector<std::string> names;
  std::vector<CMatrix> operators;  // Schroedinger-picture operators, empty for occupations
};

Columns observable_columns(const PreparedPoint& p, Observable obs, double phi) {
  Columns c;
  const SpacePtr& space = p.space;
  switch (obs) {
    case Observable::Number:
      c.names = {"N"};
      c.operators = {build_total_number(space).matrix};
      break;
    case Observable::Strangeness:
    case Observable::QPlus:
    case Observable::QMinus: {
      const auto f = build_flavour_observables(space, phi);
      if (obs == Observable::Strangeness) {
        c.names = {"S"};
        c.operators = {f.strangeness.matrix};
      } else if (obs == Observable::QPlus) {
        c.names = {"Qplus"};
        c.operators = {f.q_plus.matrix};
      } else {
        c.names = {"Qminus"};
        c.operators = {f.q_minus.matrix};
      }
      break;
    }
    case Observable::Occupations:
      for (std::size_t i = 0; i < space->dimension(); ++i) {
        std::string name = "p";
        for (int n : space->occupation_of(i)) name += "_" + std::to_string(n);
        c.names.push_back(name);
        CMatrix proj = CMatrix::Zero(static_cast<Eigen::Index>(space->dimension()),
                                     static_cast<Eigen::Index>(space->dimension()));
        proj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
        c.operators.push_back(std::move(proj));
      }
      break;
  }
  return c;
}

double trace_real(const CMatrix& rho, const CMatrix& obs) { return (rho * obs).trace().real(); }

// Heisenberg-picture operator for a Schroedinger operator of the given
// observable at time t.
std::vector<CMatrix> heisenberg_operators(const PreparedPoint& p, Observable obs,
                                          const Columns& cols, double phi, double t) {
  const DecayModel& model = *p.model;
  bool bosonic = true;
  for (const auto& ch : model.channels()) bosonic = bosonic && ch.statistics == Statistics::Boson;
  if (bosonic && obs != Observable::Occupations) {
    const auto ladder = evolve_ladder(model, t);
    auto bilinear = [&](std::size_t i, std::size_t l) -> CMatrix {
      return ladder[i].creator.matrix * ladder[l].annihilator.matrix;
    };
    switch (obs) {
      case Observable::Number: {
        CMatrix n = bilinear(0, 0);
        for (std::size_t i = 1; i < ladder.size(); ++i) n += bilinear(i, i);
        return {n};
      }
      case Observable::Strangeness:
        return {CMatrix(bilinear(0, 0) - bilinear(1, 1))};
      case Observable::QPlus: {
        const CMatrix hop = std::polar(1.0, phi) * bilinear(0, 1);
        return {CMatrix(hop + hop.adjoint())};
      }
      case Observable::QMinus: {
        const CMatrix hop = std::polar(1.0, phi) * bilinear(0, 1);
        return {CMatrix(Complex(0.0, 1.0) * (hop - hop.adjoint()))};
      }
      default:
        break;
    }
  }
  const HeisenbergMap map(model, t);
  std::vector<CMatrix> out;
  for (const auto& op : cols.operators) {
    out.push_back(evolve_observable(map, {p.space, op}).matrix);
  }
  return out;
}

std::vector<DensityOperator> ode_trajectory(const DecayModel& model, const DensityOperator& rho0,
                                            const std::vector<double>& times,
                                            std::optional<double> configured_step) {
  const GeneratorAction gen(model);
  const double base = configured_step.value_or(default_step(gen));
  if (times.empty()) return {};
  const double start = times.front();
  DensityOperator from = rho0;
  if (start > 0.0) {
    const double n = std::ceil(start / base - 1e-9);
    const double lead[] = {start};
    from = integrate(gen, rho0, lead, start / n).front();
  }
  std::vector<double> shifted;
  for (double t : times) shifted.push_back(t - start);
  double step = base;
  if (times.size() > 1) {
    const double spacing = shifted[1];
    step = spacing / std::ceil(spacing / base - 1e-9);
    // Re-express the grid as exact multiples of the step.
    for (std::size_t i = 0; i < shifted.size(); ++i) {
      shifted[i] = step * std::round(shifted[i] / step);
    }
  }
  return integrate(gen, from, shifted, step);
}

}  // namespace

const char* library_version() noexcept { return FOCKDECAY_VERSION; }

std::string_view to_string(Route r) noexcept {
  switch (r) {
    case Route::Kraus: return "kraus";
    case Route::Ode: return "ode";
    case Route::Heisenberg: return "heisenberg";
  }
  return "?";
}

std::string_view to_string(Observable o) noexcept {
  switch (o) {
    case Observable::Number: return "N";
    case Observable::Strangeness: return "S";
    case Observable::QPlus: return "Qplus";
    case Observable::QMinus: return "Qminus";
    case Observable::Occupations: return "occupations";
  }
  return "?";
}

Route parse_route(std::string_view name) {
  if (name == "kraus") return Route::Kraus;
  if (name == "ode") return Route::Ode;
  if (name == "heisenberg") return Route::Heisenberg;
  throw Error(ErrorKind::Config, "CONFIG_ROUTE_UNKNOWN", "unknown route '" + std::string(name) + "'");
}

std::vector<double> TimeGrid::points() const {
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(count));
  if (count == 1) return {start};
  for (int i = 0; i < count; ++i) {
    t.push_back(i == count - 1 ? end : start + (end - start) * i / (count - 1));
  }
  return t;
}

ScenarioConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, "CONFIG_JSON_MALFORMED", std::string("$: ") + e.what());
  }
  const Node root(doc, "$");
  root.require_object({"schema_version", "name", "modes", "mixing", "initial_state", "time_grid",
                       "routes", "observables", "output_path", "ode_step"});
  const long long version = root.at("schema_version").integer();
  if (version != kSchemaVersion) {
    config_error("CONFIG_SCHEMA_VERSION", "$.schema_version",
                 "unsupported schema version " + std::to_string(version));
  }

  ScenarioConfig cfg;
  cfg.name = root.has("name") ? root.at("name").string() : std::string("scenario");

  const Node modes = root.at("modes");
  if (modes.array_size() == 0) config_error("CONFIG_MODES_EMPTY", modes.path(), "at least one mode is required");
  for (std::size_t j = 0; j < modes.array_size(); ++j) {
    const Node m = modes.at(j);
    m.require_object({"statistics", "mass", "width", "cutoff"});
    ModeSpec spec;
    const std::string stats = m.has("statistics") ? m.at("statistics").string() : "boson";
    if (stats == "boson") {
      spec.statistics = Statistics::Boson;
    } else if (stats == "fermion") {
      spec.statistics = Statistics::Fermion;
      spec.cutoff = 1;
    } else {
      config_error("CONFIG_STATISTICS_UNKNOWN", m.at("statistics").path(),
                   "expected 'boson' or 'fermion'");
    }
    spec.mass = m.has("mass") ? m.at("mass").number() : 0.0;
    spec.width = m.at("width").number();
    if (spec.width < 0.0) config_error("CONFIG_WIDTH_NEGATIVE", m.at("width").path(), "width must be >= 0");
    if (m.has("cutoff")) {
      const long long c = m.at("cutoff").integer();
      if (c < 0) config_error("CONFIG_CUTOFF_NEGATIVE", m.at("cutoff").path(), "cutoff must be >= 0");
      if (spec.statistics == Statistics::Fermion && c != 1) {
        config_error("CONFIG_FERMION_CUTOFF", m.at("cutoff").path(), "fermionic modes have cutoff 1");
      }
      spec.cutoff = static_cast<int>(c);
    }
    cfg.modes.push_back(spec);
  }

  if (root.has("mixing")) {
    const Node mx = root.at("mixing");
    mx.require_object({"theta", "phi", "psi", "chi", "theta_sweep"});
    if (cfg.modes.size() != 2) config_error("CONFIG_MIXING_MODES", mx.path(), "mixing requires exactly 2 modes");
    if (cfg.modes[0].cutoff != cfg.modes[1].cutoff || cfg.modes[0].statistics != cfg.modes[1].statistics) {
      config_error("CONFIG_MIXING_CUTOFFS", mx.path(),
                   "mixed modes need equal statistics and equal cutoffs");
    }
    MixingParams p;
    p.theta = mx.has("theta") ? mx.at("theta").number() : 0.0;
    p.phi = mx.has("phi") ? mx.at("phi").number() : 0.0;
    p.psi = mx.has("psi") ? mx.at("psi").number() : 0.0;
    p.chi = mx.has("chi") ? mx.at("chi").number() : 0.0;
    cfg.mixing = p.canonical();
    if (mx.has("theta_sweep")) {
      const Node sw = mx.at("theta_sweep");
      if (sw.array_size() == 0) config_error("CONFIG_SWEEP_EMPTY", sw.path(), "sweep must not be empty");
      for (std::size_t i = 0; i < sw.array_size(); ++i) {
        cfg.theta_sweep.push_back(MixingParams{sw.at(i).number(), 0, 0, 0}.canonical().theta);
      }
    }
  }

  const Node init = root.at("initial_state");
  init.require_object({"type", "occupations", "mode", "alpha", "nbar", "terms"});
  const std::string type = init.at("type").string();
  if (type == "number") {
    NumberInit s{read_occupation(init.at("occupations"))};
    check_occupation(s.occupations, cfg.modes, init.at("occupations").path());
    cfg.initial_state = s;
  } else if (type == "coherent" || type == "poisson") {
    const std::size_t mode = read_mode_index(init.at("mode"), cfg.modes.size());
    if (cfg.modes[mode].statistics != Statistics::Boson) {
      config_error("CONFIG_MODE_NOT_BOSONIC", init.at("mode").path(), "target mode must be bosonic");
    }
    if (type == "coherent") {
      const Node a = init.at("alpha");
      std::complex<double> alpha;
      if (a.value().is_array()) {
        if (a.array_size() != 2) config_error("CONFIG_TYPE_MISMATCH", a.path(), "expected [re, im]");
        alpha = {a.at(std::size_t{0}).number(), a.at(std::size_t{1}).number()};
      } else {
        alpha = a.number();
      }
      cfg.initial_state = CoherentInit{mode, alpha};
    } else {
      const double nbar = init.at("nbar").number();
      if (nbar < 0.0) config_error("CONFIG_NBAR_NEGATIVE", init.at("nbar").path(), "nbar must be >= 0");
      cfg.initial_state = PoissonInit{mode, nbar};
    }
  } else if (type == "mixture") {
    const Node terms = init.at("terms");
    MixtureInit mix;
    double total = 0.0;
    for (std::size_t i = 0; i < terms.array_size(); ++i) {
      const Node term = terms.at(i);
      term.require_object({"weight", "occupations"});
      const double w = term.at("weight").number();
      if (w < 0.0) config_error("CONFIG_MIXTURE_WEIGHTS", term.at("weight").path(), "weight must be >= 0");
      Occupation occ = read_occupation(term.at("occupations"));
      check_occupation(occ, cfg.modes, term.at("occupations").path());
      total += w;
      mix.terms.emplace_back(w, std::move(occ));
    }
    if (mix.terms.empty() || std::abs(total - 1.0) > 1e-12) {
      config_error("CONFIG_MIXTURE_WEIGHTS", terms.path(), "weights must sum to 1");
    }
    cfg.initial_state = std::move(mix);
  } else {
    config_error("CONFIG_STATE_TYPE_UNKNOWN", init.at("type").path(), "unknown state type '" + type + "'");
  }

  const Node grid = root.at("time_grid");
  grid.require_object({"start", "end", "count"});
  cfg.time_grid.start = grid.has("start") ? grid.at("start").number() : 0.0;
  cfg.time_grid.end = grid.at("end").number();
  const long long count = grid.at("count").integer();
  if (cfg.time_grid.start < 0.0) config_error("CONFIG_TIME_GRID", grid.path() + ".start", "start must be >= 0");
  if (cfg.time_grid.end < cfg.time_grid.start) config_error("CONFIG_TIME_GRID", grid.path() + ".end", "end must be >= start");
  if (count < 1 || count > 1000000) config_error("CONFIG_TIME_GRID", grid.path() + ".count", "count must be in [1, 1e6]");
  cfg.time_grid.count = static_cast<int>(count);

  const Node routes = root.at("routes");
  for (std::size_t i = 0; i < routes.array_size(); ++i) {
    try {
      const Route r = parse_route(routes.at(i).string());
      if (std::find(cfg.routes.begin(), cfg.routes.end(), r) == cfg.routes.end()) cfg.routes.push_back(r);
    } catch (const Error& e) {
      config_error(e.code(), routes.at(i).path(), "unknown route");
    }
  }
  if (cfg.routes.empty()) config_error("CONFIG_ROUTES_EMPTY", routes.path(), "at least one route is required");

  const Node obs = root.at("observables");
  for (std::size_t i = 0; i < obs.array_size(); ++i) {
    const Observable o = parse_observable(obs.at(i));
    if (o != Observable::Number && o != Observable::Occupations && cfg.modes.size() != 2) {
      config_error("CONFIG_OBSERVABLE_MODES", obs.at(i).path(), "S and Q observables need exactly 2 modes");
    }
    if (std::find(cfg.observables.begin(), cfg.observables.end(), o) == cfg.observables.end()) {
      cfg.observables.push_back(o);
    }
  }
  if (cfg.observables.empty()) config_error("CONFIG_OBSERVABLES_EMPTY", obs.path(), "at least one observable is required");

  cfg.output_path = root.has("output_path") ? root.at("output_path").string() : std::string("out");
  if (root.has("ode_step")) {
    const double step = root.at("ode_step").number();
    if (step <= 0.0) config_error("CONFIG_ODE_STEP", "$.ode_step", "step must be > 0");
    cfg.ode_step = step;
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "IO_READ", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_json(const ScenarioConfig& cfg) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["name"] = cfg.name;
  json modes = json::array();
  for (const auto& m : cfg.modes) {
    modes.push_back({{"statistics", m.statistics == Statistics::Boson ? "boson" : "fermion"},
                     {"mass", m.mass},
                     {"width", m.width},
                     {"cutoff", m.cutoff}});
  }
  doc["modes"] = modes;
  if (cfg.mixing) {
    json mx = {{"theta", cfg.mixing->theta},
               {"phi", cfg.mixing->phi},
               {"psi", cfg.mixing->psi},
               {"chi", cfg.mixing->chi}};
    if (!cfg.theta_sweep.empty()) mx["theta_sweep"] = cfg.theta_sweep;
    doc["mixing"] = mx;
  }
  doc["initial_state"] = std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NumberInit>) {
          return {{"type", "number"}, {"occupations", occupation_json(s.occupations)}};
        } else if constexpr (std::is_same_v<T, CoherentInit>) {
          return {{"type", "coherent"}, {"mode", s.mode}, {"alpha", {s.alpha.real(), s.alpha.imag()}}};
        } else if constexpr (std::is_same_v<T, PoissonInit>) {
          return {{"type", "poisson"}, {"mode", s.mode}, {"nbar", s.nbar}};
        } else {
          json terms = json::array();
          for (const auto& [w, occ] : s.terms) terms.push_back({{"weight", w}, {"occupations", occupation_json(occ)}});
          return {{"type", "mixture"}, {"terms", terms}};
        }
      },
      cfg.initial_state);
  doc["time_grid"] = {{"start", cfg.time_grid.start}, {"end", cfg.time_grid.end}, {"count", cfg.time_grid.count}};
  json routes = json::array();
  for (Route r : cfg.routes) routes.push_back(std::string(to_string(r)));
  doc["routes"] = routes;
  json obs = json::array();
  for (Observable o : cfg.observables) obs.push_back(std::string(to_string(o)));
  doc["observables"] = obs;
  doc["output_path"] = cfg.output_path;
  if (cfg.ode_step) doc["ode_step"] = *cfg.ode_step;
  return doc.dump();
}

void validate_scenario(const ScenarioConfig& config) {
  for (double theta : sweep_thetas(config)) (void)prepare(config, theta);
}

RunReport run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "IO_MKDIR", "cannot create " + out_dir.string() + ": " + ec.message());

  const std::vector<double> times = config.time_grid.points();
  const std::vector<double> thetas = sweep_thetas(config);
  const bool sweeping = config.mixing && !config.theta_sweep.empty();

  RunReport report;
  std::ostringstream manifest;
  manifest << "schema_version=" << kSchemaVersion << "\n";
  manifest << "library_version=" << library_version() << "\n";
  manifest << "scenario=" << config.name << "\n";
  manifest << "config=" << to_json(config) << "\n";

  // route name -> flattened values over (point, observable column, time)
  std::map<Route, std::vector<double>> flat;

  for (std::size_t point = 0; point < thetas.size(); ++point) {
    const PreparedPoint p = prepare(config, thetas[point]);
    const DecayModel& model = *p.model;
    const DensityOperator& rho0 = *p.rho0;
    const double phi = p.flavour ? p.flavour->mixing.phi : 0.0;
    const double unit = p.flavour && p.flavour->mean_width() > 0.0 ? p.flavour->mean_width() : 1.0;
    if (sweeping) manifest << "sweep." << point << ".theta=" << format_double(thetas[point]) << "\n";

    for (Route route : config.routes) {
      std::vector<DensityOperator> states;
      if (route == Route::Kraus) states = evolve_state(model, rho0, times);
      if (route == Route::Ode) states = ode_trajectory(model, rho0, times, config.ode_step);

      for (Observable obs : config.observables) {
        const Columns cols = observable_columns(p, obs, phi);
        Series series(cols.names.size(), std::vector<double>(times.size()));
        for (std::size_t ti = 0; ti < times.size(); ++ti) {
          if (route == Route::Heisenberg) {
            const auto ops = heisenberg_operators(p, obs, cols, phi, times[ti]);
            for (std::size_t c = 0; c < ops.size(); ++c) series[c][ti] = trace_real(rho0.matrix(), ops[c]);
          } else {
            for (std::size_t c = 0; c < cols.operators.size(); ++c) {
              series[c][ti] = trace_real(states[ti].matrix(), cols.operators[c]);
            }
          }
        }
        for (const auto& column : series) {
          flat[route].insert(flat[route].end(), column.begin(), column.end());
        }

        std::string file = std::string(to_string(route)) + "_" + std::string(to_string(obs));
        if (sweeping) file += "_theta" + std::to_string(point);
        const std::filesystem::path path = out_dir / (file + ".csv");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(ErrorKind::Io, "IO_WRITE", "cannot write " + path.string());
        out << "t";
        for (const auto& name : cols.names) out << "," << name;
        out << ",route,t_raw\n";
        for (std::size_t ti = 0; ti < times.size(); ++ti) {
          out << format_double(times[ti] * unit);
          for (const auto& column : series) out << "," << format_double(column[ti]);
          out << "," << to_string(route) << "," << format_double(times[ti]) << "\n";
        }
        if (!out) throw Error(ErrorKind::Io, "IO_WRITE", "failed writing " + path.string());
        report.files.push_back(path);
      }
    }
  }

  for (auto a = flat.begin(); a != flat.end(); ++a) {
    for (auto b = std::next(a); b != flat.end(); ++b) {
      double dev = 0.0;
      for (std::size_t i = 0; i < a->second.size(); ++i) dev = std::max(dev, std::abs(a->second[i] - b->second[i]));
      const std::string key = std::string(to_string(a->first)) + "_vs_" + std::string(to_string(b->first));
      report.deviations[key] = dev;
      report.max_deviation = std::max(report.max_deviation, dev);
    }
  }
  for (const auto& [key, dev] : report.deviations) {
    manifest << "max_deviation." << key << "=" << format_double(dev) << "\n";
  }
  manifest << "max_cross_route_deviation=" << format_double(report.max_deviation) << "\n";

  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  manifest << "timestamp=" << stamp << "\n";

  report.manifest = out_dir / "manifest.txt";
  std::ofstream mf(report.manifest, std::ios::binary);
  if (!mf) throw Error(ErrorKind::Io, "IO_WRITE", "cannot write " + report.manifest.string());
  mf << manifest.str();
  return report;
}

}  // namespace fockdecay
