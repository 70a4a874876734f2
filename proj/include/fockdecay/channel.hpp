// SPDX-License-Identifier: Apache-2.0

// Kraus representation of the decay semigroup.
//
// For decay channels c_j with mass m_j and width Gamma_j and
// M = H + iK, K = -1/2 sum_j L_j^dagger L_j, L_j = sqrt(Gamma_j) c_j, the
// channel at time t has one Kraus operator per multi-index (k_1, ..., k_r):
//
//   E_(k)(t) = exp(-i M t) prod_j (sqrt(1 - exp(-Gamma_j t)) c_j)^{k_j} / sqrt(k_j!)
//
// with k_j in {0, 1} for fermionic channels. This requires
// [M, c_j] = -(m_j - i Gamma_j / 2) c_j, which every DecayModel certifies on
// construction.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "fockdecay/fock.hpp"
#include "fockdecay/mixing.hpp"

namespace fockdecay {

/// One decay channel: L = sqrt(width) * op.
struct DecayChannel {
  double mass = 0.0;
  double width = 0.0;
  OperatorMatrix op;
  Statistics statistics = Statistics::Boson;
};

class DecayModel {
 public:
  /// `mode_mixing` is the r x r matrix V with c_j = sum_l V_jl a_l; it is the
  /// identity for an unmixed model. Throws ErrorKind::Certificate when the
  /// commutation certificate fails and InvalidArgument on a non-Hermitian H.
  DecayModel(SpacePtr space, OperatorMatrix hamiltonian, std::vector<DecayChannel> channels,
             CMatrix mode_mixing, std::optional<MixingParams> mixing = std::nullopt);

  /// H = sum_j m_j N_j, L_j = sqrt(Gamma_j) a_j, with m_j and Gamma_j from the
  /// space's mode specs.
  static DecayModel unmixed(const SpacePtr& space);

  const SpacePtr& space() const noexcept { return space_; }
  const OperatorMatrix& hamiltonian() const noexcept { return hamiltonian_; }
  const std::vector<DecayChannel>& channels() const noexcept { return channels_; }
  const std::vector<OperatorMatrix>& lindblads() const noexcept { return lindblads_; }
  const OperatorMatrix& k_operator() const noexcept { return k_operator_; }
  const OperatorMatrix& m_operator() const noexcept { return m_operator_; }
  const CMatrix& mode_mixing() const noexcept { return mode_mixing_; }
  const std::optional<MixingParams>& mixing() const noexcept { return mixing_; }

  /// Largest |[M, c_j] + (m_j - i Gamma_j/2) c_j| entry on the exact subspace.
  double certificate_defect() const noexcept { return certificate_defect_; }

  /// Basis indices on which the truncated evolution equals the untruncated
  /// one: the whole box for unmixed or purely fermionic models, otherwise the
  /// states whose total occupation does not exceed the smallest cutoff.
  const std::vector<std::size_t>& exact_subspace() const noexcept { return exact_indices_; }
  bool is_exact(std::size_t index) const { return exact_mask_[index]; }

  double max_width() const noexcept;
  double min_width() const noexcept;

 private:
  SpacePtr space_;
  OperatorMatrix hamiltonian_;
  std::vector<DecayChannel> channels_;
  std::vector<OperatorMatrix> lindblads_;
  OperatorMatrix k_operator_;
  OperatorMatrix m_operator_;
  CMatrix mode_mixing_;
  std::optional<MixingParams> mixing_;
  double certificate_defect_ = 0.0;
  std::vector<bool> exact_mask_;
  std::vector<std::size_t> exact_indices_;
};

inline constexpr double kCompletenessTolerance = 1e-10;

struct KrausOperator {
  /// (k_1, ..., k_r): how many times each channel fired.
  std::vector<int> partition;
  CMatrix matrix;

  int order() const;
};

class KrausSet {
 public:
  KrausSet(SpacePtr space, double time, int k_max, std::vector<KrausOperator> operators,
           std::vector<bool> exact_mask);

  const SpacePtr& space() const noexcept { return space_; }
  double time() const noexcept { return time_; }
  int k_max() const noexcept { return k_max_; }
  const std::vector<KrausOperator>& operators() const noexcept { return operators_; }
  /// Operators whose partition sums to k.
  std::vector<const KrausOperator*> of_order(int k) const;

  /// Spectral norm of sum_k E_k^dagger E_k - I on the exact subspace with
  /// total occupation <= k_max.
  double completeness_defect() const noexcept { return completeness_defect_; }
  bool is_exact(std::size_t index) const { return exact_mask_[index]; }
  const std::vector<bool>& exact_mask() const noexcept { return exact_mask_; }

 private:
  SpacePtr space_;
  double time_;
  int k_max_;
  std::vector<KrausOperator> operators_;
  std::vector<bool> exact_mask_;
  double completeness_defect_ = 0.0;
};

/// Kraus family at time t with every multi-index of total order <= k_max.
/// A negative k_max selects the largest total occupation of the box.
KrausSet build_kraus(const DecayModel& model, double t, int k_max = -1);

/// sum_k E_k rho E_k^dagger. rho must be supported on the exact subspace and
/// on total occupations <= k_max.
DensityOperator apply_channel(const KrausSet& kraus, const DensityOperator& rho);

/// Kraus-route trajectory, one state per grid point. k_max defaults to the
/// largest occupation in the support of rho0.
std::vector<DensityOperator> evolve_state(const DecayModel& model, const DensityOperator& rho0,
                                          std::span<const double> times, int k_max = -1);

/// tr(rho * obs) for Hermitian obs.
double expectation(const DensityOperator& rho, const OperatorMatrix& obs);

std::map<Occupation, double> occupation_distribution(const DensityOperator& rho);

/// Survival factor exp(-x) and decay probability 1 - exp(-x), with the
/// large-x limit taken exactly.
struct DecayFactors {
  double survival;
  double decayed;
};
DecayFactors decay_factors(double width_times_t);

}  // namespace fockdecay
