// SPDX-License-Identifier: Apache-2.0
//
// twrc-relay: beamforming and capacity tools for the two-way multi-antenna relay channel
// Copyright (C) 2026 The twrc-relay authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/**
 * @file linalg.hpp
 * @brief Small dense linear-algebra kernels used throughout the library.
 *
 * Storage and arithmetic come from Eigen. The decompositions the relay problems need are
 * implemented here directly, for the only shapes that occur:
 *
 * - eig_sym: cyclic Jacobi for real symmetric matrices up to a few dozen rows
 *   (the semidefinite solver works on 8 x 8 blocks).
 * - eig_herm2: closed-form eigendecomposition of a 2 x 2 Hermitian matrix.
 * - svd_tall / pinv_tall: SVD and pseudo-inverse of an M x 2 complex matrix, through the
 *   2 x 2 Gram matrix.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "twrc/errors.hpp"

namespace twrc {

using cd = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Mat2c = Eigen::Matrix2cd;
using Vec2c = Eigen::Vector2cd;

/// Largest absolute entry.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

struct SymmetricEigen {
  RealVector values;   // descending
  RealMatrix vectors;  // orthonormal columns, vectors.col(i) pairs with values(i)
};

/**
 * Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.
 *
 * Sweeps stop once the off-diagonal Frobenius mass is at most tol * ||S||_F. Input that is
 * asymmetric by more than tol * max|S_ij| is rejected with InvalidInput.
 */
inline SymmetricEigen eig_sym(const RealMatrix& S, double tol = 1e-15) {
  const Eigen::Index n = S.rows();
  if (n == 0 || S.cols() != n) throw InvalidInput("eig_sym: matrix must be square and non-empty");
  if (!S.allFinite()) throw InvalidInput("eig_sym: non-finite entry");
  const double scale = max_abs(S);
  if (max_abs(S - S.transpose()) > tol * scale) throw InvalidInput("eig_sym: matrix is not symmetric");

  RealMatrix a = 0.5 * (S + S.transpose());
  RealMatrix v = RealMatrix::Identity(n, n);
  const double fro = a.norm();
  const double eps = std::numeric_limits<double>::epsilon();

  constexpr int kMaxSweeps = 100;
  bool converged = fro == 0.0;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
    if (std::sqrt(off) <= tol * fro) {
      converged = true;
      break;
    }
    bool rotated = false;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 0.25 * eps * (std::abs(a(p, p)) + std::abs(a(q, q))) ||
            std::abs(apq) < std::numeric_limits<double>::min()) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        rotated = true;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    if (!rotated) converged = true;
  }
  if (!converged) throw NumericalFailure("eig_sym: Jacobi sweeps did not converge");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
  SymmetricEigen out{RealVector(n), RealMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

struct HermitianEigen2 {
  Eigen::Vector2d values;  // descending
  Mat2c vectors;           // unitary
};

/// Closed-form eigendecomposition of a 2 x 2 Hermitian matrix. Equal eigenvalues keep e1, e2.
inline HermitianEigen2 eig_herm2(const Mat2c& G) {
  const double a = G(0, 0).real();
  const double d = G(1, 1).real();
  const cd c = 0.5 * (G(0, 1) + std::conj(G(1, 0)));
  const double half_diff = 0.5 * (a - d);
  const double r = std::hypot(half_diff, std::abs(c));
  const double mean = 0.5 * (a + d);
  HermitianEigen2 out;
  out.values << mean + r, mean - r;
  if (std::abs(c) == 0.0) {
    if (a >= d) {
      out.vectors = Mat2c::Identity();
    } else {
      out.vectors << 0.0, 1.0, 1.0, 0.0;
      out.values << d, a;
    }
    return out;
  }
  const double lambda = out.values(0);
  Vec2c x(c, lambda - a);
  Vec2c y(lambda - d, std::conj(c));
  Vec2c v1 = x.norm() >= y.norm() ? x : y;
  v1.normalize();
  out.vectors.col(0) = v1;
  out.vectors.col(1) = Vec2c(-std::conj(v1(1)), std::conj(v1(0)));
  return out;
}

/// Square root of a 2 x 2 Hermitian positive semidefinite matrix.
inline Mat2c sqrt_psd2(const Mat2c& A) {
  const double det = std::max(0.0, (A.determinant()).real());
  const double s = std::sqrt(det);
  const double t = std::sqrt(std::max(0.0, A.trace().real() + 2.0 * s));
  if (t == 0.0) return Mat2c::Zero();
  return (A + s * Mat2c::Identity()) / t;
}

/// A unit vector orthogonal to the unit vector u (u.size() >= 2).
inline ComplexVector orthonormal_completion(const ComplexVector& u) {
  Eigen::Index k = 0;
  u.cwiseAbs().minCoeff(&k);
  ComplexVector e = ComplexVector::Zero(u.size());
  e(k) = 1.0;
  e -= u * (u.adjoint() * e)(0);
  e -= u * (u.adjoint() * e)(0);
  return e.normalized();
}

struct TallSvd {
  ComplexMatrix U;        // M x 2, orthonormal columns
  Eigen::Vector2d sigma;  // sigma(0) >= sigma(1) >= 0
  Mat2c V;                // unitary
};

/**
 * SVD of an M x 2 complex matrix, H = U diag(sigma) V^H.
 *
 * V comes from the closed-form eigendecomposition of H^H H, sigma_i = ||H v_i||, and
 * U = H V diag(sigma)^{-1}. When sigma_2 is negligible the second column of U is any unit
 * vector orthogonal to the first.
 */
inline TallSvd svd_tall(const ComplexMatrix& H) {
  if (H.cols() != 2 || H.rows() < 2) throw InvalidInput("svd_tall: expected an M x 2 matrix with M >= 2");
  if (!H.allFinite()) throw InvalidInput("svd_tall: non-finite entry");
  const Mat2c gram = H.adjoint() * H;
  const HermitianEigen2 ge = eig_herm2(gram);

  TallSvd out;
  out.V = ge.vectors;
  ComplexVector w1 = H * out.V.col(0);
  ComplexVector w2 = H * out.V.col(1);
  double s1 = w1.norm();
  double s2 = w2.norm();
  if (s2 > s1) {
    out.V.col(0).swap(out.V.col(1));
    std::swap(w1, w2);
    std::swap(s1, s2);
  }
  out.sigma << s1, s2;
  out.U.resize(H.rows(), 2);
  if (s1 == 0.0) {
    out.U.setZero();
    out.U(0, 0) = 1.0;
    out.U(1, 1) = 1.0;
    return out;
  }
  out.U.col(0) = w1 / s1;
  constexpr double kDeflate = 1e-13;
  if (s2 <= kDeflate * s1) {
    out.U.col(1) = orthonormal_completion(out.U.col(0));
  } else {
    ComplexVector u2 = w2 / s2;
    u2 -= out.U.col(0) * (out.U.col(0).adjoint() * u2)(0);
    out.U.col(1) = u2.normalized();
  }
  return out;
}

/// Moore-Penrose inverse of a full-column-rank M x 2 matrix; RankDeficiency when sigma_2 <= rank_tol * sigma_1.
inline ComplexMatrix pinv_tall(const ComplexMatrix& H, double rank_tol = 1e-10) {
  const TallSvd s = svd_tall(H);
  if (!(s.sigma(1) > rank_tol * s.sigma(0)))
    throw RankDeficiency("pinv_tall: columns are linearly dependent (sigma2/sigma1 below rank tolerance)");
  const Eigen::Vector2d inv(1.0 / s.sigma(0), 1.0 / s.sigma(1));
  return s.V * inv.cast<cd>().asDiagonal() * s.U.adjoint();
}

/// Real 2n x 2n form [[Re E, -Im E], [Im E, Re E]] of a complex n x n matrix.
inline RealMatrix real_embedding(const ComplexMatrix& E) {
  const Eigen::Index n = E.rows();
  RealMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = E.real();
  out.topRightCorner(n, n) = -E.imag();
  out.bottomLeftCorner(n, n) = E.imag();
  out.bottomRightCorner(n, n) = E.real();
  return out;
}

/// Stack [Re b; Im b].
inline RealVector stack_real(const ComplexVector& b) {
  RealVector out(2 * b.size());
  out << b.real(), b.imag();
  return out;
}

/// Inverse of stack_real.
inline ComplexVector unstack_real(const RealVector& x) {
  const Eigen::Index n = x.size() / 2;
  ComplexVector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = cd(x(i), x(n + i));
  return out;
}

}  // namespace twrc
