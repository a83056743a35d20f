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

#include "lindblad/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "lindblad/errors.hpp"

namespace lindblad::linalg {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(what) + ": square matrix required, got " + shape(m));
  }
}

double one_norm(const ComplexMatrix& m) {
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

// Diagonal [6/6] Pade coefficients of exp(x).
constexpr double kPade6[7] = {1.0,           1.0 / 2.0,     5.0 / 44.0,     1.0 / 66.0,
                              1.0 / 792.0,   1.0 / 15840.0, 1.0 / 665280.0};

ComplexMatrix sqrtm_denman_beavers(const ComplexMatrix& a) {
  const auto n = a.rows();
  ComplexMatrix y = a;
  ComplexMatrix z = ComplexMatrix::Identity(n, n);
  for (int it = 0; it < 100; ++it) {
    ComplexMatrix y_inv = y.partialPivLu().inverse();
    ComplexMatrix z_inv = z.partialPivLu().inverse();
    ComplexMatrix y_next = 0.5 * (y + z_inv);
    ComplexMatrix z_next = 0.5 * (z + y_inv);
    const double change = one_norm(y_next - y);
    y = std::move(y_next);
    z = std::move(z_next);
    if (change <= 1e-15 * one_norm(y)) return y;
  }
  throw GuardError("matrix_log: Denman-Beavers square root did not converge");
}

// log(a) for ||a - I|| small via log a = 2 atanh(z), z = (a - I)(a + I)^{-1}.
ComplexMatrix log_near_identity(const ComplexMatrix& a) {
  const auto n = a.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix z = (a + id).transpose().partialPivLu().solve((a - id).transpose()).transpose();
  const ComplexMatrix z2 = z * z;
  ComplexMatrix power = z;
  ComplexMatrix sum = z;
  for (int j = 1; j < 200; ++j) {
    power = power * z2;
    const ComplexMatrix term = power / static_cast<double>(2 * j + 1);
    sum += term;
    if (max_abs(term) <= 1e-18 * std::max(1.0, max_abs(sum))) break;
  }
  return 2.0 * sum;
}

}  // namespace

std::string shape(const ComplexMatrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: shape mismatch " + shape(a) + " * " + shape(b));
  }
  return a * b;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto br = b.rows();
  const auto bc = b.cols();
  ComplexMatrix out(a.rows() * br, a.cols() * bc);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix expm(const ComplexMatrix& m, double scale) {
  require_square(m, "expm");
  const auto n = m.rows();
  ComplexMatrix x = scale * m;
  const double norm = one_norm(x);
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    x /= std::ldexp(1.0, squarings);
  }
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix x2 = x * x;
  const ComplexMatrix x4 = x2 * x2;
  const ComplexMatrix x6 = x4 * x2;
  const ComplexMatrix odd = x * (kPade6[1] * id + kPade6[3] * x2 + kPade6[5] * x4);
  const ComplexMatrix even = kPade6[0] * id + kPade6[2] * x2 + kPade6[4] * x4 + kPade6[6] * x6;
  ComplexMatrix result = (even - odd).partialPivLu().solve(even + odd);
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

HermitianEigen hermitian_eig(const ComplexMatrix& m) {
  require_square(m, "hermitian_eig");
  const double tol = 1e-10 * std::max(1.0, max_abs(m));
  if (!is_hermitian(m, tol)) {
    throw DimensionError("hermitian_eig: input is not Hermitian within tolerance");
  }
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw GuardError("hermitian_eig: solver failed");
  HermitianEigen out;
  out.values.assign(solver.eigenvalues().data(),
                    solver.eigenvalues().data() + solver.eigenvalues().size());
  out.vectors = solver.eigenvectors();
  return out;
}

double trace_norm(const ComplexMatrix& m) {
  require_square(m, "trace_norm");
  if (is_hermitian(m, 1e-12 * std::max(1.0, max_abs(m)))) {
    const ComplexMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().sum();
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.adjoint() * m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  const ComplexMatrix gram = m.rows() <= m.cols() ? ComplexMatrix(m * m.adjoint())
                                                  : ComplexMatrix(m.adjoint() * m);
  if (gram.rows() == 1) return std::sqrt(std::abs(gram(0, 0)));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

ComplexMatrix matrix_log(const ComplexMatrix& m) {
  require_square(m, "matrix_log");
  const auto n = m.rows();
  Eigen::ComplexEigenSolver<ComplexMatrix> eig(m);
  if (eig.info() != Eigen::Success) throw GuardError("matrix_log: eigensolver failed");
  const auto& lambda = eig.eigenvalues();
  const double scale = std::max(1.0, max_abs(m));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(lambda(i)) <= 1e-14 * scale) {
      throw GuardError("matrix_log: singular input");
    }
    if (lambda(i).real() < 0.0 && std::abs(lambda(i).imag()) <= 1e-12) {
      throw GuardError("matrix_log: eigenvalue on the negative real axis");
    }
  }
  const ComplexMatrix& v = eig.eigenvectors();
  Eigen::JacobiSVD<ComplexMatrix> svd(v);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (cond <= 1e8) {
    Eigen::VectorXcd log_lambda(n);
    for (Eigen::Index i = 0; i < n; ++i) log_lambda(i) = std::log(lambda(i));
    const ComplexMatrix vl = v * log_lambda.asDiagonal();
    return v.transpose().partialPivLu().solve(vl.transpose()).transpose();
  }

  return matrix_log_scaling_squaring(m);
}

ComplexMatrix matrix_log_scaling_squaring(const ComplexMatrix& m) {
  require_square(m, "matrix_log_scaling_squaring");
  const auto n = m.rows();
  ComplexMatrix a = m;
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  int roots = 0;
  while (one_norm(a - id) > 0.25) {
    if (roots == 64) throw GuardError("matrix_log: square-root scaling did not converge");
    a = sqrtm_denman_beavers(a);
    ++roots;
  }
  return std::ldexp(1.0, roots) * log_near_identity(a);
}

}  // namespace lindblad::linalg
