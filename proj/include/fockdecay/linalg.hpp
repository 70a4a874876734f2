// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace fockdecay {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

namespace linalg {

/// max |A - A^dagger| over all entries.
double hermiticity_defect(const CMatrix& a);

/// Largest absolute entry.
double max_abs(const CMatrix& a);

double min_eigenvalue_hermitian(const CMatrix& a);

/// Trace distance 1/2 ||a - b||_1 of two Hermitian matrices.
double trace_distance(const CMatrix& a, const CMatrix& b);

/// Spectral norm.
double operator_norm(const CMatrix& a);

/// exp(a). Diagonal input is exponentiated elementwise; everything else goes
/// through Pade scaling-and-squaring.
CMatrix expm(const CMatrix& a);

CMatrix commutator(const CMatrix& a, const CMatrix& b);
CMatrix anticommutator(const CMatrix& a, const CMatrix& b);

}  // namespace linalg
}  // namespace fockdecay
