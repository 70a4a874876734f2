// SPDX-License-Identifier: Apache-2.0

#include "fockdecay/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace fockdecay::linalg {

double hermiticity_defect(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

double min_eigenvalue_hermitian(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  const CMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  const CMatrix d = a - b;
  if (d.size() == 0) return 0.0;
  const CMatrix h = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double operator_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

CMatrix expm(const CMatrix& a) {
  if (a.size() == 0) return a;
  const bool diagonal =
      (a - CMatrix(a.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  if (diagonal) {
    CMatrix out = CMatrix::Zero(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) out(i, i) = std::exp(a(i, i));
    return out;
  }
  return a.exp();
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

CMatrix anticommutator(const CMatrix& a, const CMatrix& b) { return a * b + b * a; }

}  // namespace fockdecay::linalg
