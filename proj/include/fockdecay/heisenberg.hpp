// SPDX-License-Identifier: Apache-2.0

// Observable-side (dual) evolution Lambda_t Omega = sum_k E_k^dagger Omega E_k.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fockdecay/channel.hpp"

namespace fockdecay {

/// Bound for the dropped part of the dual series on the reporting subspace.
inline constexpr double kSeriesTailTolerance = 1e-10;

class HeisenbergMap {
 public:
  /// The reporting subspace is the model's exact subspace. On it the dual
  /// series terminates at the largest total occupation present, which is the
  /// default series order. A smaller `series_order` truncates the series and
  /// records a binomial bound for the dropped terms.
  HeisenbergMap(const DecayModel& model, double t, std::optional<int> series_order = {});

  double time() const noexcept { return kraus_.time(); }
  int series_order() const noexcept { return kraus_.k_max(); }
  /// Upper bound on |(Lambda_t Omega)_{nn'}| lost per unit max|Omega| entry.
  double tail_error() const noexcept { return tail_error_; }
  const KrausSet& kraus() const noexcept { return kraus_; }
  const std::vector<std::size_t>& reporting_subspace() const noexcept { return reporting_; }

 private:
  KrausSet kraus_;
  std::vector<std::size_t> reporting_;
  double tail_error_ = 0.0;
};

/// sum_k E_k^dagger obs E_k. Exact on the reporting subspace only.
OperatorMatrix evolve_observable(const HeisenbergMap& map, const OperatorMatrix& obs);

struct LadderPair {
  OperatorMatrix annihilator;  // Lambda_t a_j
  OperatorMatrix creator;      // Lambda_t a_j^dagger
};

/// Closed-form evolution of every flavour ladder operator:
/// Lambda_t a_i = sum_j conj(V_ji) exp(-(i m_j + Gamma_j/2) t) c_j with c = V a.
/// Bosonic models only.
std::vector<LadderPair> evolve_ladder(const DecayModel& model, double t);

/// Lambda_t N for N = sum_i a_i^dagger a_i, from the ladder closed forms.
OperatorMatrix evolved_number(const DecayModel& model, double t);

/// Lambda_t S for S = a_0^dagger a_0 - a_1^dagger a_1 (two-mode models).
OperatorMatrix evolved_strangeness(const DecayModel& model, double t);

/// Projector evolution on one unmixed bosonic mode:
/// Lambda_t |n><n| = sum_{k>=n} C(k,n) (1 - e^{-Gamma t})^{k-n} e^{-n Gamma t} |k><k|,
/// evaluated without the (e^{Gamma t} - 1)^{-n} prefactor that is singular at t = 0.
OperatorMatrix evolved_projector(const SpacePtr& space, std::size_t mode, double width, int n,
                                 double t);

/// <N(t)> by the Heisenberg route, tr(rho0 Lambda_t N). Uses the ladder closed
/// forms for bosonic models and the dual series otherwise.
std::vector<double> mean_number_trajectory(const DecayModel& model, const DensityOperator& rho0,
                                           std::span<const double> times);

/// <S(t)> by the Heisenberg route; requires a two-mode model.
std::vector<double> mean_strangeness_trajectory(const DecayModel& model,
                                                const DensityOperator& rho0,
                                                std::span<const double> times);

}  // namespace fockdecay
