// SPDX-License-Identifier: Apache-2.0

#include "fockdecay/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fockdecay/error.hpp"

namespace fockdecay {

namespace {

constexpr double kHermitianTolerance = 1e-12;
constexpr double kCertificateTolerance = 1e-10;

void require_same_space(const FockSpace& a, const FockSpace& b) {
  if (!(a == b)) {
    throw Error(ErrorKind::InvalidArgument, "SPACE_MISMATCH",
                "operands are defined on different Fock spaces");
  }
}

bool is_mixing(const CMatrix& v) {
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      if (i != j && std::abs(v(i, j)) > 1e-15) return true;
    }
  }
  return false;
}

}  // namespace

DecayFactors decay_factors(double width_times_t) {
  if (width_times_t > 700.0) return {0.0, 1.0};
  return {std::exp(-width_times_t), -std::expm1(-width_times_t)};
}

DecayModel::DecayModel(SpacePtr space, OperatorMatrix hamiltonian,
                       std::vector<DecayChannel> channels, CMatrix mode_mixing,
                       std::optional<MixingParams> mixing)
    : space_(std::move(space)),
      hamiltonian_(std::move(hamiltonian)),
      channels_(std::move(channels)),
      mode_mixing_(std::move(mode_mixing)),
      mixing_(mixing) {
  const auto dim = static_cast<Eigen::Index>(space_->dimension());
  if (hamiltonian_.matrix.rows() != dim || hamiltonian_.matrix.cols() != dim) {
    throw Error(ErrorKind::InvalidArgument, "DIMENSION_MISMATCH",
                "Hamiltonian dimension does not match the space");
  }
  const double herm = linalg::hermiticity_defect(hamiltonian_.matrix);
  if (herm > kHermitianTolerance) {
    throw Error(ErrorKind::InvalidArgument, "HAMILTONIAN_NOT_HERMITIAN",
                "Hamiltonian hermiticity defect " + std::to_string(herm));
  }

  // Exact subspace.
  exact_mask_.assign(space_->dimension(), true);
  bool all_fermions = true;
  int min_cutoff = space_->max_total_occupation();
  for (const auto& m : space_->modes()) {
    if (m.statistics == Statistics::Boson) all_fermions = false;
    min_cutoff = std::min(min_cutoff, m.cutoff);
  }
  if (is_mixing(mode_mixing_) && !all_fermions) {
    for (std::size_t i = 0; i < space_->dimension(); ++i) {
      exact_mask_[i] = space_->total_occupation(i) <= min_cutoff;
    }
  }
  for (std::size_t i = 0; i < exact_mask_.size(); ++i) {
    if (exact_mask_[i]) exact_indices_.push_back(i);
  }

  CMatrix k = CMatrix::Zero(dim, dim);
  for (const auto& ch : channels_) {
    if (!(ch.width >= 0.0) || !std::isfinite(ch.width)) {
      throw Error(ErrorKind::InvalidArgument, "MODE_WIDTH_NEGATIVE",
                  "decay width must be finite and >= 0");
    }
    if (ch.op.matrix.rows() != dim || ch.op.matrix.cols() != dim) {
      throw Error(ErrorKind::InvalidArgument, "DIMENSION_MISMATCH",
                  "decay operator dimension does not match the space");
    }
    OperatorMatrix l{space_, std::sqrt(ch.width) * ch.op.matrix};
    k -= 0.5 * l.matrix.adjoint() * l.matrix;
    lindblads_.push_back(std::move(l));
  }
  k_operator_ = {space_, k};
  m_operator_ = {space_, hamiltonian_.matrix + Complex(0.0, 1.0) * k};

  // [M, c_j] = -(m_j - i Gamma_j/2) c_j, checked column-wise on the exact subspace.
  for (std::size_t j = 0; j < channels_.size(); ++j) {
    const auto& ch = channels_[j];
    const Complex eigen(ch.mass, -0.5 * ch.width);
    const CMatrix residual =
        linalg::commutator(m_operator_.matrix, ch.op.matrix) + eigen * ch.op.matrix;
    double defect = 0.0;
    for (std::size_t col : exact_indices_) {
      defect = std::max(defect, residual.col(static_cast<Eigen::Index>(col)).cwiseAbs().maxCoeff());
    }
    certificate_defect_ = std::max(certificate_defect_, defect);
    if (defect > kCertificateTolerance * std::max(1.0, std::abs(eigen))) {
      std::ostringstream msg;
      msg << "commutation certificate failed for decay channel " << j << ": defect " << defect;
      throw Error(ErrorKind::Certificate, "CERTIFICATE_FAILED", msg.str());
    }
  }
}

DecayModel DecayModel::unmixed(const SpacePtr& space) {
  const auto dim = static_cast<Eigen::Index>(space->dimension());
  CMatrix h = CMatrix::Zero(dim, dim);
  std::vector<DecayChannel> channels;
  for (std::size_t j = 0; j < space->mode_count(); ++j) {
    const auto& spec = space->mode(j);
    h += spec.mass * build_number(space, j).matrix;
    channels.push_back({spec.mass, spec.width, build_annihilator(space, j), spec.statistics});
  }
  const auto r = static_cast<Eigen::Index>(space->mode_count());
  return DecayModel(space, {space, std::move(h)}, std::move(channels), CMatrix::Identity(r, r));
}

double DecayModel::max_width() const noexcept {
  double w = 0.0;
  for (const auto& ch : channels_) w = std::max(w, ch.width);
  return w;
}

double DecayModel::min_width() const noexcept {
  if (channels_.empty()) return 0.0;
  double w = channels_.front().width;
  for (const auto& ch : channels_) w = std::min(w, ch.width);
  return w;
}

int KrausOperator::order() const { return std::accumulate(partition.begin(), partition.end(), 0); }

KrausSet::KrausSet(SpacePtr space, double time, int k_max, std::vector<KrausOperator> operators,
                   std::vector<bool> exact_mask)
    : space_(std::move(space)),
      time_(time),
      k_max_(k_max),
      operators_(std::move(operators)),
      exact_mask_(std::move(exact_mask)) {
  const auto dim = static_cast<Eigen::Index>(space_->dimension());
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (const auto& e : operators_) sum.noalias() += e.matrix.adjoint() * e.matrix;
  sum -= CMatrix::Identity(dim, dim);

  std::vector<Eigen::Index> idx;
  for (std::size_t i = 0; i < space_->dimension(); ++i) {
    if (exact_mask_[i] && space_->total_occupation(i) <= k_max_) {
      idx.push_back(static_cast<Eigen::Index>(i));
    }
  }
  const CMatrix restricted = sum(idx, idx);
  if (restricted.size() > 0) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (restricted + restricted.adjoint()),
                                                  Eigen::EigenvaluesOnly);
    completeness_defect_ = solver.eigenvalues().cwiseAbs().maxCoeff();
  }
  if (completeness_defect_ > kCompletenessTolerance) {
    std::ostringstream msg;
    msg << "Kraus completeness defect " << completeness_defect_ << " at t=" << time_;
    throw Error(ErrorKind::Invariant, "KRAUS_INCOMPLETE", msg.str());
  }
}

std::vector<const KrausOperator*> KrausSet::of_order(int k) const {
  std::vector<const KrausOperator*> out;
  for (const auto& e : operators_) {
    if (e.order() == k) out.push_back(&e);
  }
  return out;
}

KrausSet build_kraus(const DecayModel& model, double t, int k_max) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorKind::InvalidArgument, "TIME_NEGATIVE", "evolution time must be finite and >= 0");
  }
  const SpacePtr& space = model.space();
  if (k_max < 0) k_max = space->max_total_occupation();
  const auto& channels = model.channels();
  const std::size_t r = channels.size();
  const auto dim = static_cast<Eigen::Index>(space->dimension());

  // Largest useful power of each channel: its operator is nilpotent of order
  // cutoff+1 (1 for fermions); zero width channels never fire.
  std::vector<int> radix(r);
  for (std::size_t j = 0; j < r; ++j) {
    if (channels[j].width == 0.0 || t == 0.0) {
      radix[j] = 1;
      continue;
    }
    int max_power = channels[j].statistics == Statistics::Fermion ? 1 : 0;
    if (channels[j].statistics == Statistics::Boson) {
      for (const auto& m : space->modes()) max_power = std::max(max_power, m.cutoff);
    }
    radix[j] = std::min(max_power, k_max) + 1;
  }

  // Powers (s_j c_j)^k / sqrt(k!) for each channel.
  std::vector<std::vector<CMatrix>> powers(r);
  for (std::size_t j = 0; j < r; ++j) {
    const double s = std::sqrt(decay_factors(channels[j].width * t).decayed);
    powers[j].push_back(CMatrix::Identity(dim, dim));
    for (int k = 1; k < radix[j]; ++k) {
      powers[j].push_back(powers[j].back() * channels[j].op.matrix * (s / std::sqrt(double(k))));
    }
  }

  const CMatrix propagator = linalg::expm(Complex(0.0, -t) * model.m_operator().matrix);

  // Multi-radix counter over (k_1..k_r), then grouped by total order.
  std::vector<std::vector<int>> partitions;
  std::vector<int> counter(r, 0);
  for (;;) {
    if (std::accumulate(counter.begin(), counter.end(), 0) <= k_max) partitions.push_back(counter);
    bool done = true;
    for (std::size_t j = r; j-- > 0;) {
      if (++counter[j] < radix[j]) {
        done = false;
        break;
      }
      counter[j] = 0;
    }
    if (done) break;
  }
  std::stable_sort(partitions.begin(), partitions.end(), [](const auto& a, const auto& b) {
    return std::accumulate(a.begin(), a.end(), 0) < std::accumulate(b.begin(), b.end(), 0);
  });

  std::vector<KrausOperator> ops;
  ops.reserve(partitions.size());
  for (const auto& p : partitions) {
    CMatrix e = propagator;
    for (std::size_t j = 0; j < r; ++j) {
      if (p[j] > 0) e = e * powers[j][static_cast<std::size_t>(p[j])];
    }
    if (t > 0.0 && p != std::vector<int>(r, 0) && linalg::max_abs(e) == 0.0) continue;
    ops.push_back({p, std::move(e)});
  }
  std::vector<bool> mask(space->dimension());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = model.is_exact(i);
  return KrausSet(space, t, k_max, std::move(ops), std::move(mask));
}

DensityOperator apply_channel(const KrausSet& kraus, const DensityOperator& rho) {
  require_same_space(*kraus.space(), *rho.space());
  const CMatrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double weight = std::max(m.row(i).cwiseAbs().maxCoeff(), m.col(i).cwiseAbs().maxCoeff());
    if (weight <= 1e-14) continue;
    const auto idx = static_cast<std::size_t>(i);
    if (!kraus.is_exact(idx)) {
      throw Error(ErrorKind::Truncation, "SUPPORT_OUTSIDE_EXACT_SUBSPACE",
                  "state has weight on basis state " + std::to_string(idx) +
                      " outside the subspace where the truncated channel is exact");
    }
    if (kraus.space()->total_occupation(idx) > kraus.k_max()) {
      throw Error(ErrorKind::Truncation, "SUPPORT_EXCEEDS_KMAX",
                  "state support reaches occupation " +
                      std::to_string(kraus.space()->total_occupation(idx)) +
                      " beyond Kraus order " + std::to_string(kraus.k_max()));
    }
  }
  const auto dim = static_cast<Eigen::Index>(rho.dimension());
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const auto& e : kraus.operators()) out.noalias() += e.matrix * m * e.matrix.adjoint();
  return DensityOperator(rho.space(), std::move(out));
}

std::vector<DensityOperator> evolve_state(const DecayModel& model, const DensityOperator& rho0,
                                          std::span<const double> times, int k_max) {
  require_same_space(*model.space(), *rho0.space());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && times[i] < times[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "TIME_GRID_INVALID",
                  "time grid must be sorted and nonnegative");
    }
  }
  if (k_max < 0) k_max = rho0.max_support_occupation();
  std::vector<DensityOperator> out;
  out.reserve(times.size());
  for (double t : times) {
    if (t == 0.0) {
      out.push_back(rho0);
      continue;
    }
    out.push_back(apply_channel(build_kraus(model, t, k_max), rho0));
  }
  return out;
}

double expectation(const DensityOperator& rho, const OperatorMatrix& obs) {
  require_same_space(*rho.space(), *obs.space);
  const double scale = std::max(1.0, linalg::max_abs(obs.matrix));
  if (linalg::hermiticity_defect(obs.matrix) > kHermitianTolerance * scale) {
    throw Error(ErrorKind::InvalidArgument, "OBSERVABLE_NOT_HERMITIAN",
                "observable is not Hermitian");
  }
  const Complex value = (rho.matrix() * obs.matrix).trace();
  if (std::abs(value.imag()) > kHermitianTolerance * scale) {
    std::ostringstream msg;
    msg << "expectation value has imaginary residue " << value.imag();
    throw Error(ErrorKind::Invariant, "EXPECTATION_NOT_REAL", msg.str());
  }
  return value.real();
}

std::map<Occupation, double> occupation_distribution(const DensityOperator& rho) {
  std::map<Occupation, double> out;
  const auto& space = *rho.space();
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    out.emplace(space.occupation_of(i), rho.matrix()(static_cast<Eigen::Index>(i),
                                                     static_cast<Eigen::Index>(i)).real());
  }
  return out;
}

}  // namespace fockdecay
