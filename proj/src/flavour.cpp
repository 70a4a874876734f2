// SPDX-License-Identifier: Apache-2.0

#include "fockdecay/flavour.hpp"

#include <cmath>
#include <numbers>

#include "fockdecay/error.hpp"

namespace fockdecay {

namespace {

double reduce_angle(double x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (!std::isfinite(x)) {
    throw Error(ErrorKind::InvalidArgument, "MIXING_ANGLE_INVALID", "mixing angles must be finite");
  }
  double r = std::fmod(x, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

void require_two_modes(const FockSpace& space) {
  if (space.mode_count() != 2) {
    throw Error(ErrorKind::InvalidArgument, "FLAVOUR_NEEDS_TWO_MODES",
                "two-flavour constructions need exactly two modes, got " +
                    std::to_string(space.mode_count()));
  }
}

}  // namespace

MixingParams MixingParams::canonical() const {
  return {reduce_angle(theta), reduce_angle(phi), reduce_angle(psi), reduce_angle(chi)};
}

CMatrix mixing_matrix(const MixingParams& params) {
  const auto [theta, phi, psi, chi] = params;
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const Complex global = std::polar(1.0, -chi);
  CMatrix v(2, 2);
  // Conjugates of the creation-operator coefficients.
  v(0, 0) = global * std::polar(c, -0.5 * (phi + psi));
  v(0, 1) = global * std::polar(s, 0.5 * (phi - psi));
  v(1, 0) = -global * std::polar(s, -0.5 * (phi - psi));
  v(1, 1) = global * std::polar(c, 0.5 * (phi + psi));
  return v;
}

std::array<OperatorMatrix, 2> propagation_operators(const SpacePtr& space,
                                                     const MixingParams& params) {
  require_two_modes(*space);
  const CMatrix v = mixing_matrix(params);
  const CMatrix a1 = build_annihilator(space, 0).matrix;
  const CMatrix a2 = build_annihilator(space, 1).matrix;
  return {OperatorMatrix{space, v(0, 0) * a1 + v(0, 1) * a2},
          OperatorMatrix{space, v(1, 0) * a1 + v(1, 1) * a2}};
}

DecayModel build_mixed_model(const SpacePtr& space, const TwoFlavourParams& params) {
  require_two_modes(*space);
  const auto& m0 = space->mode(0);
  const auto& m1 = space->mode(1);
  if (m0.cutoff != m1.cutoff) {
    throw Error(ErrorKind::InvalidArgument, "MIXING_UNEQUAL_CUTOFFS",
                "mixed flavours need equal cutoffs, got " + std::to_string(m0.cutoff) + " and " +
                    std::to_string(m1.cutoff));
  }
  if (m0.statistics != m1.statistics) {
    throw Error(ErrorKind::InvalidArgument, "MIXING_MIXED_STATISTICS",
                "mixed flavours must share their statistics");
  }
  for (double w : params.widths) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorKind::InvalidArgument, "MODE_WIDTH_NEGATIVE",
                  "decay width must be finite and >= 0");
    }
  }
  const MixingParams canonical = params.mixing.canonical();
  auto c = propagation_operators(space, canonical);
  const auto dim = static_cast<Eigen::Index>(space->dimension());
  CMatrix h = CMatrix::Zero(dim, dim);
  std::vector<DecayChannel> channels;
  for (std::size_t j = 0; j < 2; ++j) {
    h += params.masses[j] * (c[j].matrix.adjoint() * c[j].matrix);
    channels.push_back({params.masses[j], params.widths[j], c[j], m0.statistics});
  }
  // Products of truncated ladder matrices are Hermitian only up to rounding.
  h = 0.5 * (h + h.adjoint()).eval();
  return DecayModel(space, {space, std::move(h)}, std::move(channels), mixing_matrix(canonical),
                    canonical);
}

FlavourObservables build_flavour_observables(const SpacePtr& space, double phi) {
  require_two_modes(*space);
  const CMatrix a1 = build_annihilator(space, 0).matrix;
  const CMatrix a2 = build_annihilator(space, 1).matrix;
  const CMatrix n1 = build_number(space, 0).matrix;
  const CMatrix n2 = build_number(space, 1).matrix;
  const Complex e = std::polar(1.0, phi);
  const CMatrix hop = e * (a1.adjoint() * a2);  // a_1^+ a_2 e^{i phi}
  return {
      {space, n1 + n2},
      {space, n1 - n2},
      {space, hop + hop.adjoint()},
      {space, Complex(0.0, 1.0) * (hop - hop.adjoint())},
  };
}

OperatorMatrix number_evolution_closed_form(const SpacePtr& space, const TwoFlavourParams& p,
                                            double t) {
  const auto obs = build_flavour_observables(space, p.mixing.phi);
  const double e1 = decay_factors(p.widths[0] * t).survival;
  const double e2 = decay_factors(p.widths[1] * t).survival;
  const double theta = p.mixing.theta;
  CMatrix out = 0.5 * (e1 + e2) * obs.number.matrix +
                0.5 * (e1 - e2) *
                    (std::cos(theta) * obs.strangeness.matrix + std::sin(theta) * obs.q_plus.matrix);
  return {space, std::move(out)};
}

OperatorMatrix strangeness_evolution_closed_form(const SpacePtr& space,
                                                 const TwoFlavourParams& p, double t) {
  const auto obs = build_flavour_observables(space, p.mixing.phi);
  const double e1 = decay_factors(p.widths[0] * t).survival;
  const double e2 = decay_factors(p.widths[1] * t).survival;
  const double eg = decay_factors(p.mean_width() * t).survival;
  const double dm = p.mass_difference();
  const double ct = std::cos(p.mixing.theta);
  const double st = std::sin(p.mixing.theta);
  CMatrix out = 0.5 * (e1 - e2) * ct * obs.number.matrix +
                eg * std::sin(dm * t) * st * obs.q_minus.matrix +
                (0.5 * (e1 + e2) * ct * ct + eg * std::cos(dm * t) * st * st) * obs.strangeness.matrix +
                (0.5 * (e1 + e2) - eg * std::cos(dm * t)) * st * ct * obs.q_plus.matrix;
  return {space, std::move(out)};
}

double mean_number_closed_form(const TwoFlavourParams& p, int n1, int n2, double t) {
  const double e1 = decay_factors(p.widths[0] * t).survival;
  const double e2 = decay_factors(p.widths[1] * t).survival;
  return 0.5 * (e1 + e2) * (n1 + n2) + 0.5 * (e1 - e2) * (n1 - n2) * std::cos(p.mixing.theta);
}

double mean_strangeness_closed_form(const TwoFlavourParams& p, int n1, int n2, double t) {
  const double e1 = decay_factors(p.widths[0] * t).survival;
  const double e2 = decay_factors(p.widths[1] * t).survival;
  const double eg = decay_factors(p.mean_width() * t).survival;
  const double ct = std::cos(p.mixing.theta);
  const double st = std::sin(p.mixing.theta);
  return 0.5 * (e1 - e2) * (n1 + n2) * ct +
         (0.5 * (e1 + e2) * ct * ct + eg * std::cos(p.mass_difference() * t) * st * st) * (n1 - n2);
}

}  // namespace fockdecay
