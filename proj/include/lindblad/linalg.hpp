// Copyright 2026 The lindblad-trotter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lindblad {

using Complex = std::complex<double>;

// Dense complex matrix. Storage is column-major: entry (i, j) sits at
// data()[i + j * rows()]. Every vectorization in the library is column
// stacking, so vec(rho) is literally rho.data() and
// vec(A rho B) = (B^T kron A) vec(rho).
using ComplexMatrix = Eigen::MatrixXcd;

namespace linalg {

// Throws DimensionError carrying both shapes when a.cols() != b.rows().
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

// result(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l)
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// exp(scale * m) by scaling and squaring with a diagonal [6/6] Pade
// approximant; the scaled 1-norm is brought to <= 0.5 before the approximant.
ComplexMatrix expm(const ComplexMatrix& m, double scale = 1.0);

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns are orthonormal eigenvectors
};

// Requires m Hermitian within 1e-10 (relative to max(1, max|m_ij|)).
HermitianEigen hermitian_eig(const ComplexMatrix& m);

// Sum of singular values.
double trace_norm(const ComplexMatrix& m);

// Largest singular value.
double spectral_norm(const ComplexMatrix& m);

// Principal logarithm. Uses the eigendecomposition when the eigenvector
// matrix has condition number <= 1e8, inverse scaling and squaring otherwise.
ComplexMatrix matrix_log(const ComplexMatrix& m);

// Principal log by inverse scaling and squaring only: square roots until
// ||m - I||_1 <= 0.25, then an atanh series. Accurate for non-normal input
// with clustered eigenvalues, where the eigenvector route loses digits.
ComplexMatrix matrix_log_scaling_squaring(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol);
double max_abs(const ComplexMatrix& m);
std::string shape(const ComplexMatrix& m);

ComplexMatrix identity(Eigen::Index n);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

}  // namespace linalg
}  // namespace lindblad
