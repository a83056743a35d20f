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

// Independent reference implementations for the tests. Nothing here calls
// into the library beyond the ComplexMatrix type.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;

inline M X() { M m(2, 2); m << 0, 1, 1, 0; return m; }
inline M Y() { M m(2, 2); m << 0, C(0, -1), C(0, 1), 0; return m; }
inline M Z() { M m(2, 2); m << 1, 0, 0, -1; return m; }
inline M I2() { return M::Identity(2, 2); }
inline M lower() { M m = M::Zero(2, 2); m(0, 1) = 1.0; return m; }  // |0><1|

// Entry-by-entry Kronecker product, a's index most significant.
inline M kron(const M& a, const M& b) {
  M out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// op on `site` of an n-qubit chain, site 0 leftmost in the Kronecker chain.
inline M site_op(const M& op, int site, int n) {
  M out = M::Identity(1, 1);
  for (int s = 0; s < n; ++s) out = kron(out, s == site ? op : I2());
  return out;
}

inline M two_site_op(const M& a, int sa, const M& b, int sb, int n) {
  return site_op(a, sa, n) * site_op(b, sb, n);
}

struct DenseLindblad {
  M h;
  std::vector<M> jumps;
};

inline DenseLindblad tfim(int n, double j, double h, double gamma) {
  const long d = 1L << n;
  DenseLindblad out{M::Zero(d, d), {}};
  for (int s = 0; s + 1 < n; ++s) out.h -= j * two_site_op(X(), s, X(), s + 1, n);
  for (int s = 0; s < n; ++s) out.h -= h * site_op(Z(), s, n);
  for (int s = 0; s < n; ++s) out.jumps.push_back(std::sqrt(gamma) * site_op(lower(), s, n));
  return out;
}

// TFIM split in the library summand order: H_X, H_Z, then one dissipator per site.
inline std::vector<DenseLindblad> tfim_summands(int n, double j, double h, double gamma) {
  const long d = 1L << n;
  std::vector<DenseLindblad> out;
  M hx = M::Zero(d, d), hz = M::Zero(d, d);
  for (int s = 0; s + 1 < n; ++s) hx -= j * two_site_op(X(), s, X(), s + 1, n);
  for (int s = 0; s < n; ++s) hz -= h * site_op(Z(), s, n);
  out.push_back({hx, {}});
  out.push_back({hz, {}});
  for (int s = 0; s < n; ++s) out.push_back({M::Zero(d, d), {std::sqrt(gamma) * site_op(lower(), s, n)}});
  return out;
}

inline M rhs(const DenseLindblad& l, const M& rho) {
  const C i1(0, 1);
  M out = -i1 * (l.h * rho - rho * l.h);
  for (const auto& j : l.jumps) {
    const M jd = j.adjoint();
    out += j * rho * jd - 0.5 * (jd * j * rho + rho * jd * j);
  }
  return out;
}

// Column-stacking matrix of a linear map on d x d matrices: column i + d j
// is vec(f(E_ij)).
inline M superop_matrix(const std::function<M(const M&)>& f, long d) {
  M out(d * d, d * d);
  for (long j = 0; j < d; ++j) {
    for (long i = 0; i < d; ++i) {
      M e = M::Zero(d, d);
      e(i, j) = 1.0;
      const M y = f(e);
      out.col(i + d * j) = Eigen::Map<const Eigen::VectorXcd>(y.data(), d * d);
    }
  }
  return out;
}

// Taylor series with scaling and squaring; deliberately simple.
inline M expm(const M& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (std::ldexp(norm, -s) > 0.1) ++s;
  const M b = a / std::ldexp(1.0, s);
  M term = M::Identity(a.rows(), a.cols());
  M sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

inline M rk4(const DenseLindblad& l, M rho, double t, long steps) {
  const double h = t / static_cast<double>(steps);
  for (long s = 0; s < steps; ++s) {
    const M k1 = rhs(l, rho);
    const M k2 = rhs(l, rho + 0.5 * h * k1);
    const M k3 = rhs(l, rho + 0.5 * h * k2);
    const M k4 = rhs(l, rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

inline M euler(const DenseLindblad& l, M rho, double t, long steps) {
  const double h = t / static_cast<double>(steps);
  for (long s = 0; s < steps; ++s) rho += h * rhs(l, rho);
  return rho;
}

// Forward Euler on vec(rho) with a sparse Liouvillian; same iterates as euler().
inline M euler_sparse(const DenseLindblad& l, const M& rho, double t, long steps) {
  const long d = rho.rows();
  const Eigen::SparseMatrix<C> lv = superop_matrix([&](const M& x) { return rhs(l, x); }, d).sparseView();
  const double h = t / static_cast<double>(steps);
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), d * d);
  for (long s = 0; s < steps; ++s) v += h * (lv * v);
  return Eigen::Map<const M>(v.data(), d, d);
}

inline double trace_norm(const M& a) {
  Eigen::JacobiSVD<M> svd(a);
  return svd.singularValues().sum();
}

inline double spectral_norm(const M& a) {
  Eigen::JacobiSVD<M> svd(a);
  return svd.singularValues()(0);
}

inline M basis_state(long index, long d) {
  M rho = M::Zero(d, d);
  rho(index, index) = 1.0;
  return rho;
}

inline M random_hermitian(long d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  M a(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) a(i, j) = C(g(rng), g(rng));
  return scale * 0.5 * (a + a.adjoint());
}

inline M random_matrix(long r, long c, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  M a(r, c);
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < c; ++j) a(i, j) = scale * C(g(rng), g(rng));
  return a;
}

// Random density matrix of rank `rank` (Wishart-style).
inline M random_density(long d, std::mt19937_64& rng, long rank = -1) {
  if (rank < 0) rank = d;
  const M g = random_matrix(d, rank, rng);
  M rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline M random_unitary(long d, std::mt19937_64& rng) {
  Eigen::HouseholderQR<M> qr(random_matrix(d, d, rng));
  return qr.householderQ() * M::Identity(d, d);
}

// Matrix polynomials in t truncated at a fixed degree: coefficient k is c[k].
struct Poly {
  std::vector<M> c;
};

inline Poly poly_mul(const Poly& a, const Poly& b, int degree) {
  const long d = a.c[0].rows();
  Poly out{std::vector<M>(static_cast<size_t>(degree) + 1, M::Zero(d, d))};
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; i + j <= degree; ++j) out.c[static_cast<size_t>(i + j)] += a.c[static_cast<size_t>(i)] * b.c[static_cast<size_t>(j)];
  return out;
}

// exp(t a) truncated at t^degree.
inline Poly poly_exp(const M& a, int degree) {
  Poly out{{M::Identity(a.rows(), a.cols())}};
  M term = M::Identity(a.rows(), a.cols());
  for (int k = 1; k <= degree; ++k) {
    term = term * a / static_cast<double>(k);
    out.c.push_back(term);
  }
  return out;
}

// log(e^{tA/2} e^{tB} e^{tA/2}) expanded to third order in t by brute-force
// series: multiply the truncated exponentials, then log(I + X) = X - X^2/2 +
// X^3/3. Returns the t^3 coefficient.
inline M strang_log_order3(const M& a, const M& b) {
  constexpr int kDeg = 3;
  const Poly ea = poly_exp(0.5 * a, kDeg);
  const Poly eb = poly_exp(b, kDeg);
  Poly p = poly_mul(poly_mul(ea, eb, kDeg), ea, kDeg);
  p.c[0] -= M::Identity(a.rows(), a.cols());  // X = P - I, no constant term
  const Poly x2 = poly_mul(p, p, kDeg);
  const Poly x3 = poly_mul(x2, p, kDeg);
  return p.c[3] - 0.5 * x2.c[3] + x3.c[3] / 3.0;
}

// Matrix of the map rho -> -i[h, rho] on column-stacked vectors.
inline M coherent_matrix(const M& h) {
  const C i1(0, 1);
  const M id = M::Identity(h.rows(), h.cols());
  return -i1 * (kron(id, h) - kron(h.transpose(), id));
}

inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) { mx += std::log(x[i]); my += std::log(y[i]); }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

}  // namespace oracle
