// SPDX-License-Identifier: Apache-2.0

// Two-flavour mixing: flavour operators a_1, a_2 are related to the
// propagation operators c_1, c_2 (definite mass m_j and width Gamma_j) by
//
//   c_1^dagger = e^{i chi} ( e^{i(phi+psi)/2} cos(theta/2) a_1^dagger + e^{-i(phi-psi)/2} sin(theta/2) a_2^dagger )
//   c_2^dagger = e^{i chi} (-e^{i(phi-psi)/2} sin(theta/2) a_1^dagger + e^{-i(phi+psi)/2} cos(theta/2) a_2^dagger )
//
// and H = sum_j m_j c_j^dagger c_j, L_j = sqrt(Gamma_j) c_j.

#pragma once

#include <array>

#include "fockdecay/channel.hpp"
#include "fockdecay/mixing.hpp"

namespace fockdecay {

/// 2x2 unitary V with c_j = sum_l V_jl a_l.
CMatrix mixing_matrix(const MixingParams& params);

struct TwoFlavourParams {
  MixingParams mixing;
  std::array<double, 2> masses{};
  std::array<double, 2> widths{};

  double mean_width() const { return 0.5 * (widths[0] + widths[1]); }
  double mass_difference() const { return masses[1] - masses[0]; }
};

/// Requires two modes of equal statistics and equal cutoffs. The mixing
/// angles are stored in canonical form. Fermionic flavours are accepted but
/// experimental.
DecayModel build_mixed_model(const SpacePtr& space, const TwoFlavourParams& params);

/// Propagation annihilators c_1, c_2 on the space.
std::array<OperatorMatrix, 2> propagation_operators(const SpacePtr& space,
                                                     const MixingParams& params);

struct FlavourObservables {
  OperatorMatrix number;       // a_1^+ a_1 + a_2^+ a_2
  OperatorMatrix strangeness;  // a_1^+ a_1 - a_2^+ a_2
  OperatorMatrix q_plus;       // a_1^+ a_2 e^{i phi} + a_2^+ a_1 e^{-i phi}
  OperatorMatrix q_minus;      // i (a_1^+ a_2 e^{i phi} - a_2^+ a_1 e^{-i phi})
};

FlavourObservables build_flavour_observables(const SpacePtr& space, double phi);

// Closed forms for the two-flavour model. Operator identities hold on the
// subspace with total occupation <= cutoff.

/// Lambda_t N = (e1+e2)/2 N + (e1-e2)/2 (S cos(theta) + Q+ sin(theta)), e_j = e^{-Gamma_j t}.
OperatorMatrix number_evolution_closed_form(const SpacePtr& space, const TwoFlavourParams& p,
                                            double t);

/// Lambda_t S with oscillating Q- and Q+ admixtures at frequency m_2 - m_1.
OperatorMatrix strangeness_evolution_closed_form(const SpacePtr& space,
                                                 const TwoFlavourParams& p, double t);

/// <N(t)> in |n1, n2>.
double mean_number_closed_form(const TwoFlavourParams& p, int n1, int n2, double t);

/// <S(t)> in |n1, n2>.
double mean_strangeness_closed_form(const TwoFlavourParams& p, int n1, int n2, double t);

}  // namespace fockdecay
