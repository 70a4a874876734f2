// SPDX-License-Identifier: Apache-2.0

#include "fockdecay/fock.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "fockdecay/error.hpp"

namespace fockdecay {

namespace {

void check_mode(const FockSpace& space, std::size_t mode) {
  if (mode >= space.mode_count()) {
    std::ostringstream msg;
    msg << "mode " << mode << " out of range for a space with " << space.mode_count()
        << " modes";
    throw Error(ErrorKind::OutOfRange, "MODE_OUT_OF_RANGE", msg.str());
  }
}

// Probability weights |<k|alpha>|^2 (or Poisson weights) for k = 0..cutoff and
// the weight beyond the cutoff, summed term by term to avoid cancellation.
struct PoissonWeights {
  std::vector<double> kept;
  double tail = 0.0;
};

PoissonWeights poisson_weights(double nbar, int cutoff) {
  PoissonWeights out;
  out.kept.reserve(static_cast<std::size_t>(cutoff) + 1);
  double log_term = -nbar;  // log(e^{-nbar} nbar^k / k!) at k = 0
  double term = std::exp(log_term);
  for (int k = 0;; ++k) {
    if (k > 0) {
      log_term += std::log(nbar) - std::log(static_cast<double>(k));
      term = nbar == 0.0 ? 0.0 : std::exp(log_term);
    }
    if (k <= cutoff) {
      out.kept.push_back(term);
      continue;
    }
    out.tail += term;
    // Past the mode the terms decrease monotonically.
    if (k > nbar && term < 1e-30) break;
    if (k > cutoff + 100000) break;
  }
  return out;
}

void check_tail(double tail) {
  if (!(tail < kTailTolerance)) {
    std::ostringstream msg;
    msg << "truncated tail weight " << tail << " exceeds tolerance " << kTailTolerance
        << "; raise the mode cutoff";
    throw Error(ErrorKind::Truncation, "TRUNCATION_TAIL", msg.str());
  }
}

void check_bosonic(const FockSpace& space, std::size_t mode) {
  check_mode(space, mode);
  if (space.mode(mode).statistics != Statistics::Boson) {
    throw Error(ErrorKind::InvalidArgument, "MODE_NOT_BOSONIC",
                "mode " + std::to_string(mode) + " is fermionic; a bosonic mode is required");
  }
}

}  // namespace

FockSpace::FockSpace(std::vector<ModeSpec> modes) : modes_(std::move(modes)) {
  for (std::size_t j = 0; j < modes_.size(); ++j) {
    auto& m = modes_[j];
    const std::string where = "mode " + std::to_string(j) + ": ";
    if (!std::isfinite(m.mass)) {
      throw Error(ErrorKind::InvalidArgument, "MODE_MASS_INVALID", where + "mass must be finite");
    }
    if (!std::isfinite(m.width) || m.width < 0.0) {
      throw Error(ErrorKind::InvalidArgument, "MODE_WIDTH_NEGATIVE",
                  where + "width must be finite and >= 0");
    }
    if (m.cutoff < 0) {
      throw Error(ErrorKind::InvalidArgument, "MODE_CUTOFF_NEGATIVE", where + "cutoff must be >= 0");
    }
    if (m.statistics == Statistics::Fermion) m.cutoff = 1;
  }
  strides_.assign(modes_.size(), 1);
  dimension_ = 1;
  for (std::size_t j = modes_.size(); j-- > 0;) {
    strides_[j] = dimension_;
    dimension_ *= static_cast<std::size_t>(modes_[j].cutoff) + 1;
  }
}

std::shared_ptr<const FockSpace> FockSpace::make(std::vector<ModeSpec> modes) {
  return std::make_shared<const FockSpace>(std::move(modes));
}

const ModeSpec& FockSpace::mode(std::size_t j) const {
  check_mode(*this, j);
  return modes_[j];
}

std::size_t FockSpace::index_of(std::span<const int> occupation) const {
  if (occupation.size() != modes_.size()) {
    throw Error(ErrorKind::InvalidArgument, "OCCUPATION_LENGTH",
                "occupation tuple has " + std::to_string(occupation.size()) +
                    " entries, space has " + std::to_string(modes_.size()) + " modes");
  }
  std::size_t index = 0;
  for (std::size_t j = 0; j < modes_.size(); ++j) {
    const int n = occupation[j];
    if (n < 0 || n > modes_[j].cutoff) {
      std::ostringstream msg;
      msg << "occupation " << n << " of mode " << j << " exceeds cutoff " << modes_[j].cutoff;
      throw Error(ErrorKind::Truncation, "OCCUPATION_EXCEEDS_CUTOFF", msg.str());
    }
    index += strides_[j] * static_cast<std::size_t>(n);
  }
  return index;
}

Occupation FockSpace::occupation_of(std::size_t index) const {
  Occupation occ(modes_.size());
  for (std::size_t j = 0; j < modes_.size(); ++j) occ[j] = occupation_of(index, j);
  return occ;
}

int FockSpace::occupation_of(std::size_t index, std::size_t mode) const {
  return static_cast<int>((index / strides_[mode]) %
                          (static_cast<std::size_t>(modes_[mode].cutoff) + 1));
}

int FockSpace::total_occupation(std::size_t index) const {
  int total = 0;
  for (std::size_t j = 0; j < modes_.size(); ++j) total += occupation_of(index, j);
  return total;
}

int FockSpace::max_total_occupation() const noexcept {
  int total = 0;
  for (const auto& m : modes_) total += m.cutoff;
  return total;
}

DensityOperator::DensityOperator(SpacePtr space, CMatrix matrix, DensityTolerance tol)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  const auto dim = static_cast<Eigen::Index>(space_->dimension());
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw Error(ErrorKind::InvalidArgument, "DIMENSION_MISMATCH",
                "density matrix is " + std::to_string(matrix_.rows()) + "x" +
                    std::to_string(matrix_.cols()) + ", space dimension is " +
                    std::to_string(dim));
  }
  const double herm = linalg::hermiticity_defect(matrix_);
  if (herm > tol.hermiticity) {
    throw Error(ErrorKind::Invariant, "DENSITY_NOT_HERMITIAN",
                "density matrix hermiticity defect " + std::to_string(herm));
  }
  const double trace_err = std::abs(matrix_.trace() - Complex(1.0, 0.0));
  if (trace_err > tol.trace) {
    std::ostringstream msg;
    msg << "density matrix trace deviates from 1 by " << trace_err;
    throw Error(ErrorKind::Invariant, "DENSITY_TRACE", msg.str());
  }
  const double min_eig = linalg::min_eigenvalue_hermitian(matrix_);
  if (min_eig < tol.min_eigenvalue) {
    std::ostringstream msg;
    msg << "density matrix has negative eigenvalue " << min_eig;
    throw Error(ErrorKind::Invariant, "DENSITY_NOT_POSITIVE", msg.str());
  }
}

int DensityOperator::max_support_occupation(double threshold) const {
  int max_occ = 0;
  for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
    const double row = matrix_.row(i).cwiseAbs().maxCoeff();
    const double col = matrix_.col(i).cwiseAbs().maxCoeff();
    if (std::max(row, col) > threshold) {
      max_occ = std::max(max_occ, space_->total_occupation(static_cast<std::size_t>(i)));
    }
  }
  return max_occ;
}

OperatorMatrix build_annihilator(const SpacePtr& space, std::size_t mode) {
  check_mode(*space, mode);
  const std::size_t dim = space->dimension();
  CMatrix a = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const bool fermion = space->mode(mode).statistics == Statistics::Fermion;
  for (std::size_t col = 0; col < dim; ++col) {
    Occupation occ = space->occupation_of(col);
    const int n = occ[mode];
    if (n == 0) continue;
    double amplitude = std::sqrt(static_cast<double>(n));
    if (fermion) {
      // Jordan-Wigner string over the fermionic modes preceding `mode`.
      int parity = 0;
      for (std::size_t j = 0; j < mode; ++j) {
        if (space->mode(j).statistics == Statistics::Fermion) parity += occ[j];
      }
      if (parity % 2 != 0) amplitude = -amplitude;
    }
    occ[mode] = n - 1;
    a(static_cast<Eigen::Index>(space->index_of(occ)), static_cast<Eigen::Index>(col)) = amplitude;
  }
  return {space, std::move(a)};
}

OperatorMatrix build_creator(const SpacePtr& space, std::size_t mode) {
  return build_annihilator(space, mode).adjoint();
}

OperatorMatrix build_number(const SpacePtr& space, std::size_t mode) {
  check_mode(*space, mode);
  const auto dim = static_cast<Eigen::Index>(space->dimension());
  CMatrix n = CMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    n(i, i) = static_cast<double>(space->occupation_of(static_cast<std::size_t>(i), mode));
  }
  return {space, std::move(n)};
}

OperatorMatrix build_total_number(const SpacePtr& space) {
  const auto dim = static_cast<Eigen::Index>(space->dimension());
  CMatrix n = CMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    n(i, i) = static_cast<double>(space->total_occupation(static_cast<std::size_t>(i)));
  }
  return {space, std::move(n)};
}

OperatorMatrix build_identity(const SpacePtr& space) {
  const auto dim = static_cast<Eigen::Index>(space->dimension());
  return {space, CMatrix::Identity(dim, dim)};
}

DensityOperator number_state(const SpacePtr& space, std::span<const int> occupation) {
  const auto dim = static_cast<Eigen::Index>(space->dimension());
  CMatrix rho = CMatrix::Zero(dim, dim);
  const auto i = static_cast<Eigen::Index>(space->index_of(occupation));
  rho(i, i) = 1.0;
  return DensityOperator(space, std::move(rho));
}

DensityOperator number_mixture(const SpacePtr& space,
                               const std::vector<std::pair<double, Occupation>>& terms) {
  if (terms.empty()) {
    throw Error(ErrorKind::InvalidArgument, "MIXTURE_EMPTY", "mixture has no terms");
  }
  const auto dim = static_cast<Eigen::Index>(space->dimension());
  CMatrix rho = CMatrix::Zero(dim, dim);
  double total = 0.0;
  for (const auto& [weight, occ] : terms) {
    if (!(weight >= 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "MIXTURE_WEIGHT_NEGATIVE",
                  "mixture weights must be nonnegative");
    }
    const auto i = static_cast<Eigen::Index>(space->index_of(occ));
    rho(i, i) += weight;
    total += weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "MIXTURE_WEIGHT_SUM",
                "mixture weights sum to " + std::to_string(total) + ", expected 1");
  }
  return DensityOperator(space, std::move(rho));
}

TruncatedState coherent_state(const SpacePtr& space, std::size_t mode, Complex alpha) {
  check_bosonic(*space, mode);
  const int cutoff = space->mode(mode).cutoff;
  const double nbar = std::norm(alpha);
  const PoissonWeights w = poisson_weights(nbar, cutoff);
  check_tail(w.tail);

  const auto dim = static_cast<Eigen::Index>(space->dimension());
  CVector psi = CVector::Zero(dim);
  Occupation occ(space->mode_count(), 0);
  const double phase_arg = std::arg(alpha);
  for (int k = 0; k <= cutoff; ++k) {
    occ[mode] = k;
    // alpha^k / sqrt(k!) e^{-|alpha|^2/2} = sqrt(p_k) e^{i k arg(alpha)}
    psi(static_cast<Eigen::Index>(space->index_of(occ))) =
        std::sqrt(w.kept[static_cast<std::size_t>(k)]) * std::polar(1.0, k * phase_arg);
  }
  psi /= psi.norm();
  CMatrix rho = psi * psi.adjoint();
  return {DensityOperator(space, std::move(rho)), w.tail};
}

TruncatedState poisson_mixture(const SpacePtr& space, std::size_t mode, double nbar) {
  check_bosonic(*space, mode);
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw Error(ErrorKind::InvalidArgument, "POISSON_MEAN_INVALID", "nbar must be finite and >= 0");
  }
  const int cutoff = space->mode(mode).cutoff;
  const PoissonWeights w = poisson_weights(nbar, cutoff);
  check_tail(w.tail);

  const double kept = std::accumulate(w.kept.begin(), w.kept.end(), 0.0);
  const auto dim = static_cast<Eigen::Index>(space->dimension());
  CMatrix rho = CMatrix::Zero(dim, dim);
  Occupation occ(space->mode_count(), 0);
  for (int k = 0; k <= cutoff; ++k) {
    occ[mode] = k;
    const auto i = static_cast<Eigen::Index>(space->index_of(occ));
    rho(i, i) = w.kept[static_cast<std::size_t>(k)] / kept;
  }
  return {DensityOperator(space, std::move(rho)), w.tail};
}

}  // namespace fockdecay
