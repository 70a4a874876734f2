// SPDX-License-Identifier: Apache-2.0

#include "fockdecay/heisenberg.hpp"

#include <cmath>
#include <sstream>

#include "fockdecay/error.hpp"

namespace fockdecay {

namespace {

int max_reporting_occupation(const DecayModel& model) {
  int n = 0;
  for (std::size_t i : model.exact_subspace()) n = std::max(n, model.space()->total_occupation(i));
  return n;
}

// P(Binomial(n, p) > k).
double binomial_upper_tail(int n, double p, int k) {
  double tail = 0.0;
  for (int j = k + 1; j <= n; ++j) {
    const double log_c = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
    const double log_q = p < 1.0 ? (n - j) * std::log1p(-p) : (n == j ? 0.0 : -INFINITY);
    tail += std::exp(log_c + j * std::log(p) + log_q);
  }
  return tail;
}

void require_bosonic(const DecayModel& model) {
  for (const auto& ch : model.channels()) {
    if (ch.statistics != Statistics::Boson) {
      throw Error(ErrorKind::InvalidArgument, "LADDER_FERMIONIC",
                  "closed-form ladder evolution is only available for bosonic models");
    }
  }
}

void require_support_in(const DecayModel& model, const DensityOperator& rho) {
  const CMatrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double w = std::max(m.row(i).cwiseAbs().maxCoeff(), m.col(i).cwiseAbs().maxCoeff());
    if (w > 1e-14 && !model.is_exact(static_cast<std::size_t>(i))) {
      throw Error(ErrorKind::Truncation, "SUPPORT_OUTSIDE_EXACT_SUBSPACE",
                  "initial state has weight outside the subspace where the truncated map is exact");
    }
  }
}

double trace_product(const DensityOperator& rho, const CMatrix& obs) {
  return (rho.matrix() * obs).trace().real();
}

}  // namespace

HeisenbergMap::HeisenbergMap(const DecayModel& model, double t, std::optional<int> series_order)
    : kraus_(build_kraus(model, t,
                         series_order.value_or(max_reporting_occupation(model)))),
      reporting_(model.exact_subspace()) {
  const int needed = max_reporting_occupation(model);
  if (kraus_.k_max() < needed) {
    const double p = decay_factors(model.max_width() * t).decayed;
    for (int n = kraus_.k_max() + 1; n <= needed; ++n) {
      tail_error_ = std::max(tail_error_, binomial_upper_tail(n, p, kraus_.k_max()));
    }
  }
}

OperatorMatrix evolve_observable(const HeisenbergMap& map, const OperatorMatrix& obs) {
  const KrausSet& kraus = map.kraus();
  if (!(*kraus.space() == *obs.space)) {
    throw Error(ErrorKind::InvalidArgument, "SPACE_MISMATCH",
                "observable and map are defined on different Fock spaces");
  }
  const double scale = std::max(1.0, linalg::max_abs(obs.matrix));
  if (linalg::hermiticity_defect(obs.matrix) > 1e-12 * scale) {
    throw Error(ErrorKind::InvalidArgument, "OBSERVABLE_NOT_HERMITIAN",
                "observable is not Hermitian");
  }
  if (map.tail_error() * linalg::max_abs(obs.matrix) > kSeriesTailTolerance) {
    std::ostringstream msg;
    msg << "dual series truncated at order " << map.series_order() << " drops up to "
        << map.tail_error() * linalg::max_abs(obs.matrix) << " on the reporting subspace";
    throw Error(ErrorKind::Truncation, "SERIES_TAIL", msg.str());
  }
  const auto dim = obs.matrix.rows();
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const auto& e : kraus.operators()) out.noalias() += e.matrix.adjoint() * obs.matrix * e.matrix;
  return {obs.space, std::move(out)};
}

std::vector<LadderPair> evolve_ladder(const DecayModel& model, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorKind::InvalidArgument, "TIME_NEGATIVE", "evolution time must be finite and >= 0");
  }
  require_bosonic(model);
  const SpacePtr& space = model.space();
  const CMatrix& v = model.mode_mixing();
  const auto& channels = model.channels();
  const std::size_t r = space->mode_count();
  if (static_cast<std::size_t>(v.rows()) != channels.size() ||
      static_cast<std::size_t>(v.cols()) != r) {
    throw Error(ErrorKind::InvalidArgument, "MIXING_SHAPE",
                "mode mixing matrix does not match channels and modes");
  }

  std::vector<Complex> propagation(channels.size());
  for (std::size_t j = 0; j < channels.size(); ++j) {
    const double survival = std::sqrt(decay_factors(channels[j].width * t).survival);
    propagation[j] = survival * std::polar(1.0, -channels[j].mass * t);
  }
  std::vector<CMatrix> a;
  for (std::size_t l = 0; l < r; ++l) a.push_back(build_annihilator(space, l).matrix);

  std::vector<LadderPair> out;
  const auto dim = static_cast<Eigen::Index>(space->dimension());
  for (std::size_t i = 0; i < r; ++i) {
    CMatrix evolved = CMatrix::Zero(dim, dim);
    for (std::size_t l = 0; l < r; ++l) {
      Complex coeff = 0.0;
      for (std::size_t j = 0; j < channels.size(); ++j) {
        const auto ji = static_cast<Eigen::Index>(j);
        coeff += std::conj(v(ji, static_cast<Eigen::Index>(i))) * propagation[j] *
                 v(ji, static_cast<Eigen::Index>(l));
      }
      if (coeff != Complex(0.0)) evolved += coeff * a[l];
    }
    OperatorMatrix ann{space, std::move(evolved)};
    OperatorMatrix cre = ann.adjoint();
    out.push_back({std::move(ann), std::move(cre)});
  }
  return out;
}

OperatorMatrix evolved_number(const DecayModel& model, double t) {
  const auto ladder = evolve_ladder(model, t);
  const auto dim = static_cast<Eigen::Index>(model.space()->dimension());
  CMatrix n = CMatrix::Zero(dim, dim);
  for (const auto& p : ladder) n.noalias() += p.creator.matrix * p.annihilator.matrix;
  return {model.space(), std::move(n)};
}

OperatorMatrix evolved_strangeness(const DecayModel& model, double t) {
  if (model.space()->mode_count() != 2) {
    throw Error(ErrorKind::InvalidArgument, "STRANGENESS_NEEDS_TWO_MODES",
                "strangeness is defined for exactly two flavours");
  }
  const auto ladder = evolve_ladder(model, t);
  CMatrix s = ladder[0].creator.matrix * ladder[0].annihilator.matrix -
              ladder[1].creator.matrix * ladder[1].annihilator.matrix;
  return {model.space(), std::move(s)};
}

OperatorMatrix evolved_projector(const SpacePtr& space, std::size_t mode, double width, int n,
                                 double t) {
  const auto& spec = space->mode(mode);
  if (n < 0 || n > spec.cutoff) {
    throw Error(ErrorKind::Truncation, "OCCUPATION_EXCEEDS_CUTOFF",
                "projector occupation outside the truncated mode");
  }
  const DecayFactors f = decay_factors(width * t);
  const auto dim = static_cast<Eigen::Index>(space->dimension());
  CMatrix out = CMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const int k = space->occupation_of(static_cast<std::size_t>(i), mode);
    if (k < n) continue;
    const double log_c = std::lgamma(k + 1.0) - std::lgamma(n + 1.0) - std::lgamma(k - n + 1.0);
    const double decayed = k == n ? 1.0 : std::pow(f.decayed, k - n);
    const double survived = n == 0 ? 1.0 : std::pow(f.survival, n);
    out(i, i) = std::exp(log_c) * decayed * survived;
  }
  return {space, std::move(out)};
}

std::vector<double> mean_number_trajectory(const DecayModel& model, const DensityOperator& rho0,
                                           std::span<const double> times) {
  require_support_in(model, rho0);
  bool bosonic = true;
  for (const auto& ch : model.channels()) bosonic = bosonic && ch.statistics == Statistics::Boson;
  const OperatorMatrix number = build_total_number(model.space());
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    if (bosonic) {
      out.push_back(trace_product(rho0, evolved_number(model, t).matrix));
    } else {
      out.push_back(trace_product(rho0, evolve_observable(HeisenbergMap(model, t), number).matrix));
    }
  }
  return out;
}

std::vector<double> mean_strangeness_trajectory(const DecayModel& model,
                                                const DensityOperator& rho0,
                                                std::span<const double> times) {
  if (model.space()->mode_count() != 2) {
    throw Error(ErrorKind::InvalidArgument, "STRANGENESS_NEEDS_TWO_MODES",
                "strangeness is defined for exactly two flavours");
  }
  require_support_in(model, rho0);
  bool bosonic = true;
  for (const auto& ch : model.channels()) bosonic = bosonic && ch.statistics == Statistics::Boson;
  const CMatrix s = build_number(model.space(), 0).matrix - build_number(model.space(), 1).matrix;
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    if (bosonic) {
      out.push_back(trace_product(rho0, evolved_strangeness(model, t).matrix));
    } else {
      out.push_back(trace_product(
          rho0, evolve_observable(HeisenbergMap(model, t), {model.space(), s}).matrix));
    }
  }
  return out;
}

}  // namespace fockdecay
