// SPDX-License-Identifier: Apache-2.0

#include "fockdecay/master.hpp"

#include <cmath>
#include <sstream>

#include "fockdecay/error.hpp"

namespace fockdecay {

GeneratorAction::GeneratorAction(const DecayModel& model)
    : space_(model.space()),
      max_width_(model.max_width()) {
  // -i[H, rho] + K rho + rho K = A rho + rho A^+ with A = K - iH.
  drift_ = model.k_operator().matrix - Complex(0.0, 1.0) * model.hamiltonian().matrix;
  drift_adjoint_ = drift_.adjoint();
  for (const auto& l : model.lindblads()) {
    lindblads_.push_back(l.matrix);
    lindblad_adjoints_.push_back(l.matrix.adjoint());
  }
}

CMatrix GeneratorAction::operator()(const CMatrix& rho) const {
  if (rho.rows() != drift_.rows() || rho.cols() != drift_.cols()) {
    throw Error(ErrorKind::InvalidArgument, "DIMENSION_MISMATCH",
                "density matrix dimension does not match the generator");
  }
  CMatrix out(rho.rows(), rho.cols());
  out.noalias() = drift_ * rho;
  out.noalias() += rho * drift_adjoint_;
  CMatrix tmp(rho.rows(), rho.cols());
  for (std::size_t j = 0; j < lindblads_.size(); ++j) {
    tmp.noalias() = lindblads_[j] * rho;
    out.noalias() += tmp * lindblad_adjoints_[j];
  }
  return out;
}

std::optional<GeneratorAction> GeneratorAction::restricted(
    const std::vector<Eigen::Index>& keep) const {
  const Eigen::Index dim = drift_.rows();
  std::vector<bool> inside(static_cast<std::size_t>(dim), false);
  for (auto i : keep) inside[static_cast<std::size_t>(i)] = true;
  auto closed = [&](const CMatrix& x) {
    for (auto j : keep)
      for (Eigen::Index i = 0; i < dim; ++i)
        if (!inside[static_cast<std::size_t>(i)] && x(i, j) != Complex(0.0)) return false;
    return true;
  };
  if (!closed(drift_)) return std::nullopt;
  for (const auto& l : lindblads_)
    if (!closed(l)) return std::nullopt;

  GeneratorAction out;
  out.space_ = space_;
  out.max_width_ = max_width_;
  out.drift_ = drift_(keep, keep);
  out.drift_adjoint_ = out.drift_.adjoint();
  for (const auto& l : lindblads_) {
    out.lindblads_.push_back(l(keep, keep));
    out.lindblad_adjoints_.push_back(out.lindblads_.back().adjoint());
  }
  return out;
}

namespace {

// Basis indices with total occupation <= the largest one touched by rho.
std::vector<Eigen::Index> occupation_block(const FockSpace& space, const CMatrix& rho) {
  int n0 = 0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    if (rho.row(i).cwiseAbs().maxCoeff() != 0.0 || rho.col(i).cwiseAbs().maxCoeff() != 0.0)
      n0 = std::max(n0, space.total_occupation(static_cast<std::size_t>(i)));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    if (space.total_occupation(static_cast<std::size_t>(i)) <= n0) keep.push_back(i);
  return keep;
}

}  // namespace

CMatrix generator_apply(const GeneratorAction& gen, const CMatrix& rho) { return gen(rho); }

double default_step(const GeneratorAction& gen) {
  return gen.max_width() > 0.0 ? 1e-3 / gen.max_width() : 1e-3;
}

std::vector<DensityOperator> integrate(const GeneratorAction& gen, const DensityOperator& rho0,
                                       std::span<const double> times, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorKind::InvalidArgument, "STEP_NONPOSITIVE", "integration step must be > 0");
  }
  if (!(*gen.space() == *rho0.space())) {
    throw Error(ErrorKind::InvalidArgument, "SPACE_MISMATCH",
                "initial state and generator are defined on different Fock spaces");
  }
  std::vector<long long> targets;
  targets.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (!(t >= 0.0) || (i > 0 && t < times[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "TIME_GRID_INVALID",
                  "time grid must be sorted and nonnegative");
    }
    const long long n = std::llround(t / step);
    if (std::abs(static_cast<double>(n) * step - t) > 1e-9 * std::max(1.0, t)) {
      std::ostringstream msg;
      msg << "time " << t << " is not a multiple of the step " << step;
      throw Error(ErrorKind::InvalidArgument, "TIME_OFF_STEP_GRID", msg.str());
    }
    targets.push_back(n);
  }

  std::vector<DensityOperator> out;
  out.reserve(times.size());
  const auto keep = occupation_block(*rho0.space(), rho0.matrix());
  std::optional<GeneratorAction> block;
  if (keep.size() < rho0.dimension()) block = gen.restricted(keep);
  const GeneratorAction& g = block ? *block : gen;
  CMatrix rho = block ? CMatrix(rho0.matrix()(keep, keep)) : rho0.matrix();

  long long done = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (; done < targets[i]; ++done) {
      const CMatrix k1 = g(rho);
      const CMatrix k2 = g(rho + (0.5 * step) * k1);
      const CMatrix k3 = g(rho + (0.5 * step) * k2);
      const CMatrix k4 = g(rho + step * k3);
      rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    CMatrix full;
    if (block) {
      const auto dim = static_cast<Eigen::Index>(rho0.dimension());
      full = CMatrix::Zero(dim, dim);
      full(keep, keep) = rho;
    } else {
      full = rho;
    }
    try {
      out.emplace_back(rho0.space(), std::move(full), kIntegratorTolerance);
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "integrated state at t=" << times[i] << ": " << e.what();
      throw Error(ErrorKind::Invariant, e.code(), msg.str());
    }
  }
  return out;
}

}  // namespace fockdecay
