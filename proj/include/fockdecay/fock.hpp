// SPDX-License-Identifier: Apache-2.0

// Truncated occupation-number bases for multi-mode boson/fermion systems and
// the matrices of ladder and number operators on them.
//
// Basis ordering is lexicographic in the occupation tuple (n_0, ..., n_{r-1})
// with mode 0 varying slowest, so the vacuum has flat index 0. Mode indices
// are zero-based throughout the C++ interface.

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fockdecay/linalg.hpp"

namespace fockdecay {

enum class Statistics { Boson, Fermion };

inline constexpr int kDefaultBosonCutoff = 8;

struct ModeSpec {
  Statistics statistics = Statistics::Boson;
  double mass = 0.0;
  double width = 0.0;
  /// Largest occupation kept. Fermionic modes always use 1.
  int cutoff = kDefaultBosonCutoff;

  bool operator==(const ModeSpec&) const = default;
};

using Occupation = std::vector<int>;

class FockSpace {
 public:
  /// Validates every mode (finite mass, width >= 0, cutoff >= 0). Fermionic
  /// cutoffs are forced to 1.
  explicit FockSpace(std::vector<ModeSpec> modes);

  static std::shared_ptr<const FockSpace> make(std::vector<ModeSpec> modes);

  std::size_t mode_count() const noexcept { return modes_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<ModeSpec>& modes() const noexcept { return modes_; }
  const ModeSpec& mode(std::size_t j) const;

  std::size_t index_of(std::span<const int> occupation) const;
  Occupation occupation_of(std::size_t index) const;
  int occupation_of(std::size_t index, std::size_t mode) const;
  int total_occupation(std::size_t index) const;
  /// Largest total occupation present in the box.
  int max_total_occupation() const noexcept;

  bool operator==(const FockSpace& other) const { return modes_ == other.modes_; }

 private:
  std::vector<ModeSpec> modes_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 1;
};

using SpacePtr = std::shared_ptr<const FockSpace>;

/// A dense operator tied to the basis it was built on.
struct OperatorMatrix {
  SpacePtr space;
  CMatrix matrix;

  OperatorMatrix adjoint() const { return {space, matrix.adjoint()}; }
};

/// Tolerances used when validating density matrices.
struct DensityTolerance {
  double hermiticity = 1e-12;
  double trace = 1e-12;
  double min_eigenvalue = -1e-10;
};

/// Hermitian, positive, unit-trace matrix over a FockSpace. Construction
/// validates the invariants and throws ErrorKind::Invariant on failure.
class DensityOperator {
 public:
  DensityOperator(SpacePtr space, CMatrix matrix, DensityTolerance tol = {});

  const SpacePtr& space() const noexcept { return space_; }
  const CMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

  /// Largest total occupation carrying non-negligible weight in rows or columns.
  int max_support_occupation(double threshold = 1e-14) const;

 private:
  SpacePtr space_;
  CMatrix matrix_;
};

OperatorMatrix build_annihilator(const SpacePtr& space, std::size_t mode);
OperatorMatrix build_creator(const SpacePtr& space, std::size_t mode);
OperatorMatrix build_number(const SpacePtr& space, std::size_t mode);
/// Sum of all per-mode number operators.
OperatorMatrix build_total_number(const SpacePtr& space);
OperatorMatrix build_identity(const SpacePtr& space);

DensityOperator number_state(const SpacePtr& space, std::span<const int> occupation);

/// Convex combination of number states. Weights must be nonnegative and sum to 1.
DensityOperator number_mixture(const SpacePtr& space,
                               const std::vector<std::pair<double, Occupation>>& terms);

inline constexpr double kTailTolerance = 1e-10;

struct TruncatedState {
  DensityOperator state;
  /// Probability weight beyond the cutoff that was discarded before renormalizing.
  double tail_weight;
};

/// |alpha><alpha| on `mode` (other modes in vacuum), projected on the box and
/// renormalized. Throws if the discarded tail is not below kTailTolerance.
TruncatedState coherent_state(const SpacePtr& space, std::size_t mode, Complex alpha);

/// Poisson-weighted mixture of number states on `mode` with mean `nbar`.
TruncatedState poisson_mixture(const SpacePtr& space, std::size_t mode, double nbar);

}  // namespace fockdecay
