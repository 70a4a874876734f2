// SPDX-License-Identifier: Apache-2.0

// Direct numerical integration of the master equation
//
//   d rho / dt = -i [H, rho] + {K, rho} + sum_j L_j rho L_j^dagger
//
// with fixed-step classic Runge-Kutta. Independent of the Kraus route: it only
// uses H, K and the L_j of a DecayModel.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fockdecay/channel.hpp"

namespace fockdecay {

class GeneratorAction {
 public:
  explicit GeneratorAction(const DecayModel& model);

  /// Time derivative of rho.
  CMatrix operator()(const CMatrix& rho) const;

  const SpacePtr& space() const noexcept { return space_; }
  /// Largest decay width of the model, used for the default step.
  double max_width() const noexcept { return max_width_; }

  /// The generator compressed to the coordinate subspace spanned by `keep`,
  /// or nothing when H, K and every L_j do not map that subspace into itself.
  std::optional<GeneratorAction> restricted(const std::vector<Eigen::Index>& keep) const;

 private:
  GeneratorAction() = default;

  SpacePtr space_;
  CMatrix drift_;
  CMatrix drift_adjoint_;
  std::vector<CMatrix> lindblads_;
  std::vector<CMatrix> lindblad_adjoints_;
  double max_width_ = 0.0;
};

CMatrix generator_apply(const GeneratorAction& gen, const CMatrix& rho);

/// Default RK4 step: 1e-3 / max width (1e-3 when every width is zero).
double default_step(const GeneratorAction& gen);

/// Tolerances the integrator holds its output to. No renormalization or
/// positivity projection is applied; a breach throws ErrorKind::Invariant.
inline constexpr DensityTolerance kIntegratorTolerance{1e-10, 1e-8, -1e-8};

/// Integrates from t = 0 with fixed step `step`. Every requested time must be
/// an integer multiple of the step (relative mismatch <= 1e-9). When rho0 is
/// supported on total occupations <= n and that block is invariant, the
/// integration runs on the block only; entries outside it stay exactly zero.
std::vector<DensityOperator> integrate(const GeneratorAction& gen, const DensityOperator& rho0,
                                       std::span<const double> times, double step);

}  // namespace fockdecay
