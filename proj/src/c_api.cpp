// SPDX-License-Identifier: Apache-2.0

#include "fockdecay/fockdecay.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "fockdecay/channel.hpp"
#include "fockdecay/error.hpp"
#include "fockdecay/flavour.hpp"
#include "fockdecay/heisenberg.hpp"
#include "fockdecay/master.hpp"
#include "fockdecay/scenario.hpp"

struct fd_space {
  fockdecay::SpacePtr space;
};
struct fd_model {
  fockdecay::DecayModel model;
};
struct fd_state {
  fockdecay::DensityOperator state;
};
struct fd_scenario {
  fockdecay::ScenarioConfig config;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_code;

fd_status to_status(fockdecay::ErrorKind kind) {
  using fockdecay::ErrorKind;
  switch (kind) {
    case ErrorKind::InvalidArgument: return FD_ERR_INVALID_ARGUMENT;
    case ErrorKind::OutOfRange: return FD_ERR_OUT_OF_RANGE;
    case ErrorKind::Truncation: return FD_ERR_TRUNCATION;
    case ErrorKind::Certificate: return FD_ERR_CERTIFICATE;
    case ErrorKind::Invariant: return FD_ERR_INVARIANT;
    case ErrorKind::Config: return FD_ERR_CONFIG;
    case ErrorKind::Io: return FD_ERR_IO;
  }
  return FD_ERR_INTERNAL;
}

template <typename F>
fd_status guarded(F&& body) {
  try {
    g_last_error.clear();
    g_last_code.clear();
    body();
    return FD_OK;
  } catch (const fockdecay::Error& e) {
    g_last_error = e.what();
    g_last_code = e.code();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    g_last_code = "INTERNAL_OOM";
  } catch (const std::exception& e) {
    g_last_error = e.what();
    g_last_code = "INTERNAL";
  }
  return FD_ERR_INTERNAL;
}

void require(const void* p, const char* name) {
  if (p == nullptr) {
    throw fockdecay::Error(fockdecay::ErrorKind::InvalidArgument, "NULL_ARGUMENT",
                           std::string(name) + " must not be null");
  }
}

}  // namespace

extern "C" {

const char* fd_version(void) { return fockdecay::library_version(); }
const char* fd_last_error(void) { return g_last_error.c_str(); }
const char* fd_last_error_code(void) { return g_last_code.c_str(); }

fd_status fd_space_create(size_t n_modes, const int* statistics, const double* masses,
                          const double* widths, const int* cutoffs, fd_space** out) {
  return guarded([&] {
    require(out, "out");
    if (n_modes > 0) {
      require(statistics, "statistics");
      require(masses, "masses");
      require(widths, "widths");
      require(cutoffs, "cutoffs");
    }
    std::vector<fockdecay::ModeSpec> modes(n_modes);
    for (size_t j = 0; j < n_modes; ++j) {
      modes[j].statistics = statistics[j] == FD_FERMION ? fockdecay::Statistics::Fermion
                                                        : fockdecay::Statistics::Boson;
      modes[j].mass = masses[j];
      modes[j].width = widths[j];
      modes[j].cutoff = cutoffs[j];
    }
    *out = new fd_space{fockdecay::FockSpace::make(std::move(modes))};
  });
}

void fd_space_destroy(fd_space* space) { delete space; }

fd_status fd_space_dimension(const fd_space* space, size_t* out) {
  return guarded([&] {
    require(space, "space");
    require(out, "out");
    *out = space->space->dimension();
  });
}

fd_status fd_space_index_of(const fd_space* space, const int* occupations, size_t n, size_t* out) {
  return guarded([&] {
    require(space, "space");
    require(out, "out");
    if (n > 0) require(occupations, "occupations");
    *out = space->space->index_of(std::span<const int>(occupations, n));
  });
}

fd_status fd_model_create_unmixed(const fd_space* space, fd_model** out) {
  return guarded([&] {
    require(space, "space");
    require(out, "out");
    *out = new fd_model{fockdecay::DecayModel::unmixed(space->space)};
  });
}

fd_status fd_model_create_mixed(const fd_space* space, double theta, double phi, double psi,
                                double chi, double mass1, double mass2, double width1,
                                double width2, fd_model** out) {
  return guarded([&] {
    require(space, "space");
    require(out, "out");
    fockdecay::TwoFlavourParams p;
    p.mixing = {theta, phi, psi, chi};
    p.masses = {mass1, mass2};
    p.widths = {width1, width2};
    *out = new fd_model{fockdecay::build_mixed_model(space->space, p)};
  });
}

void fd_model_destroy(fd_model* model) { delete model; }

fd_status fd_state_number(const fd_space* space, const int* occupations, size_t n, fd_state** out) {
  return guarded([&] {
    require(space, "space");
    require(out, "out");
    if (n > 0) require(occupations, "occupations");
    *out = new fd_state{fockdecay::number_state(space->space, std::span<const int>(occupations, n))};
  });
}

fd_status fd_state_coherent(const fd_space* space, size_t mode, double alpha_re, double alpha_im,
                            fd_state** out) {
  return guarded([&] {
    require(space, "space");
    require(out, "out");
    *out = new fd_state{
        fockdecay::coherent_state(space->space, mode, {alpha_re, alpha_im}).state};
  });
}

fd_status fd_state_poisson(const fd_space* space, size_t mode, double nbar, fd_state** out) {
  return guarded([&] {
    require(space, "space");
    require(out, "out");
    *out = new fd_state{fockdecay::poisson_mixture(space->space, mode, nbar).state};
  });
}

void fd_state_destroy(fd_state* state) { delete state; }

fd_status fd_evolve_kraus(const fd_model* model, const fd_state* rho0, double t, fd_state** out) {
  return guarded([&] {
    require(model, "model");
    require(rho0, "rho0");
    require(out, "out");
    const double times[] = {t};
    auto traj = fockdecay::evolve_state(model->model, rho0->state, times);
    *out = new fd_state{std::move(traj.front())};
  });
}

fd_status fd_evolve_ode(const fd_model* model, const fd_state* rho0, double t, double step,
                        fd_state** out) {
  return guarded([&] {
    require(model, "model");
    require(rho0, "rho0");
    require(out, "out");
    const fockdecay::GeneratorAction gen(model->model);
    const double times[] = {t};
    auto traj = fockdecay::integrate(gen, rho0->state, times, step);
    *out = new fd_state{std::move(traj.front())};
  });
}

fd_status fd_state_mean_number(const fd_state* state, size_t mode, double* out) {
  return guarded([&] {
    require(state, "state");
    require(out, "out");
    const auto& space = state->state.space();
    const auto op = mode == static_cast<size_t>(-1) ? fockdecay::build_total_number(space)
                                                    : fockdecay::build_number(space, mode);
    *out = fockdecay::expectation(state->state, op);
  });
}

fd_status fd_state_probability(const fd_state* state, size_t index, double* out) {
  return guarded([&] {
    require(state, "state");
    require(out, "out");
    if (index >= state->state.dimension()) {
      throw fockdecay::Error(fockdecay::ErrorKind::OutOfRange, "INDEX_OUT_OF_RANGE",
                             "basis index out of range");
    }
    const auto i = static_cast<Eigen::Index>(index);
    *out = state->state.matrix()(i, i).real();
  });
}

fd_status fd_state_trace_distance(const fd_state* a, const fd_state* b, double* out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    if (!(*a->state.space() == *b->state.space())) {
      throw fockdecay::Error(fockdecay::ErrorKind::InvalidArgument, "SPACE_MISMATCH",
                             "states live on different spaces");
    }
    *out = fockdecay::linalg::trace_distance(a->state.matrix(), b->state.matrix());
  });
}

fd_status fd_heisenberg_mean_number(const fd_model* model, const fd_state* rho0, double t,
                                    double* out) {
  return guarded([&] {
    require(model, "model");
    require(rho0, "rho0");
    require(out, "out");
    const double times[] = {t};
    *out = fockdecay::mean_number_trajectory(model->model, rho0->state, times).front();
  });
}

fd_status fd_scenario_parse(const char* json_text, fd_scenario** out) {
  return guarded([&] {
    require(json_text, "json_text");
    require(out, "out");
    *out = new fd_scenario{fockdecay::parse_config(json_text)};
  });
}

fd_status fd_scenario_load(const char* path, fd_scenario** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new fd_scenario{fockdecay::load_config(path)};
  });
}

void fd_scenario_destroy(fd_scenario* scenario) { delete scenario; }

fd_status fd_scenario_set_routes(fd_scenario* scenario, const char* routes) {
  return guarded([&] {
    require(scenario, "scenario");
    require(routes, "routes");
    std::vector<fockdecay::Route> parsed;
    std::stringstream in(routes);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (item.empty()) continue;
      const auto r = fockdecay::parse_route(item);
      if (std::find(parsed.begin(), parsed.end(), r) == parsed.end()) parsed.push_back(r);
    }
    if (parsed.empty()) {
      throw fockdecay::Error(fockdecay::ErrorKind::Config, "CONFIG_ROUTES_EMPTY",
                             "--routes: at least one route is required");
    }
    scenario->config.routes = std::move(parsed);
  });
}

fd_status fd_scenario_output_path(const fd_scenario* scenario, const char** out) {
  return guarded([&] {
    require(scenario, "scenario");
    require(out, "out");
    *out = scenario->config.output_path.c_str();
  });
}

fd_status fd_scenario_to_json(const fd_scenario* scenario, char** out) {
  return guarded([&] {
    require(scenario, "scenario");
    require(out, "out");
    const std::string s = fockdecay::to_json(scenario->config);
    char* buf = static_cast<char*>(std::malloc(s.size() + 1));
    if (buf == nullptr) throw std::bad_alloc();
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
  });
}

fd_status fd_scenario_validate(const fd_scenario* scenario) {
  return guarded([&] {
    require(scenario, "scenario");
    fockdecay::validate_scenario(scenario->config);
  });
}

fd_status fd_scenario_run(const fd_scenario* scenario, const char* out_dir, double* max_deviation) {
  return guarded([&] {
    require(scenario, "scenario");
    const std::string dir = out_dir != nullptr ? out_dir : scenario->config.output_path;
    const auto report = fockdecay::run_scenario(scenario->config, dir);
    if (max_deviation != nullptr) *max_deviation = report.max_deviation;
  });
}

void fd_string_free(char* s) { std::free(s); }

}  // extern "C"
