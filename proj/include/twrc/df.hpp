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
 * @file df.hpp
 * @brief Decode-and-forward comparison: MAC pentagon, BC frontier via weighted sum-rate
 *        maximization over a reduced 2 x 2 covariance, and the time-shared union of their
 *        intersections.
 *
 * DF rates carry no 1/2 factor; the MAC share tau and BC share 1 - tau scale the two regions.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "twrc/channel.hpp"
#include "twrc/errors.hpp"
#include "twrc/linalg.hpp"
#include "twrc/parallel.hpp"
#include "twrc/region.hpp"

namespace twrc {

struct MacPentagon {
  double c1 = 0.0;     // r21 cap, log2(1 + P2 theta2)
  double c2 = 0.0;     // r12 cap, log2(1 + P1 theta1)
  double c_sum = 0.0;  // log2 det(I + P1 h1 h1^H + P2 h2 h2^H)
};

/// Multiple-access rates at the relay; the M x M determinants reduce to 2 x 2 ones.
inline MacPentagon mac_region(const ChannelPair& pair, double P1, double P2) {
  if (!(P1 >= 0.0) || !(P2 >= 0.0)) throw InvalidInput("mac_region: powers must be >= 0");
  const double t1 = pair.theta1(), t2 = pair.theta2();
  const double cross = std::norm(pair.h1().dot(pair.h2()));
  MacPentagon m;
  m.c1 = std::log2(1.0 + P2 * t2);
  m.c2 = std::log2(1.0 + P1 * t1);
  m.c_sum = std::log2((1.0 + P1 * t1) * (1.0 + P2 * t2) - P1 * P2 * cross);
  return m;
}

struct BcResult {
  RatePair rates;       // r21 = log2(1 + h1^T S h1^*), r12 = log2(1 + h2^T S h2^*)
  Mat2c Q = Mat2c::Zero();  // reduced covariance, S = Psi Q Psi^H
  ComplexMatrix Psi;    // orthonormal basis of span{h1^*, h2^*}
  int iterations = 0;
  double kkt = 0.0;

  ComplexMatrix covariance() const { return Psi * Q * Psi.adjoint(); }
};

/// Euclidean projection of a Hermitian 2 x 2 matrix onto {Q >= 0, tr Q <= P}.
inline Mat2c project_trace_psd(const Mat2c& X, double P) {
  const HermitianEigen2 e = eig_herm2(0.5 * (X + X.adjoint()));
  double l0 = std::max(e.values(0), 0.0), l1 = std::max(e.values(1), 0.0);
  if (l0 + l1 > P) {
    // shift mu with max(l0 - mu, 0) + max(l1 - mu, 0) = P
    const double hi = std::max(l0, l1), lo = std::min(l0, l1);
    double mu = 0.5 * (l0 + l1 - P);
    if (lo - mu <= 0.0) mu = hi - P;
    l0 = std::max(l0 - mu, 0.0);
    l1 = std::max(l1 - mu, 0.0);
  }
  Eigen::Vector2d lam(l0, l1);
  return e.vectors * lam.cast<cd>().asDiagonal() * e.vectors.adjoint();
}

/**
 * max w21 log2(1 + k1^H Q k1) + w12 log2(1 + k2^H Q k2) over Q >= 0, tr Q <= P_R, with
 * k_i = Psi^H h_i^*. Projected gradient ascent with Armijo backtracking; stops when the
 * projected-gradient residual ||Q - Proj(Q + grad)||_F is at most tol.
 */
inline BcResult bc_wsrmax(const ChannelPair& pair, double P_R, double w21, double w12, double tol = 1e-10,
                          int max_iterations = 100000) {
  if (!(w21 >= 0.0) || !(w12 >= 0.0) || !(w21 + w12 > 0.0)) throw InvalidInput("bc_wsrmax: weights must be >= 0, not both 0");
  if (!(P_R >= 0.0)) throw InvalidInput("bc_wsrmax: P_R must be >= 0");
  BcResult out;
  out.Psi = svd_tall(pair.uplink()).U.conjugate();
  const Vec2c k1 = out.Psi.adjoint() * pair.h1().conjugate();
  const Vec2c k2 = out.Psi.adjoint() * pair.h2().conjugate();
  auto gains = [&](const Mat2c& Q) {
    return std::pair{std::max(0.0, (k1.adjoint() * Q * k1)(0).real()), std::max(0.0, (k2.adjoint() * Q * k2)(0).real())};
  };
  auto objective = [&](const Mat2c& Q) {
    const auto [a, b] = gains(Q);
    return w21 * std::log2(1.0 + a) + w12 * std::log2(1.0 + b);
  };
  auto gradient = [&](const Mat2c& Q) -> Mat2c {
    const auto [a, b] = gains(Q);
    const double ln2 = std::log(2.0);
    return (w21 / (ln2 * (1.0 + a))) * k1 * k1.adjoint() + (w12 / (ln2 * (1.0 + b))) * k2 * k2.adjoint();
  };
  Mat2c Q = Mat2c::Identity() * cd(P_R / 2.0, 0.0);
  const double inv_lipschitz =
      std::log(2.0) / std::max(w21 * std::pow(k1.squaredNorm(), 2) + w12 * std::pow(k2.squaredNorm(), 2),
                               std::numeric_limits<double>::min());
  if (P_R > 0.0) {
    double step = P_R;
    bool converged = false;
    for (int it = 0; it < max_iterations; ++it) {
      const Mat2c G = gradient(Q);
      const double res = (Q - project_trace_psd(Q + G, P_R)).norm();
      out.iterations = it;
      out.kkt = res;
      if (res <= tol) {
        converged = true;
        break;
      }
      const double f0 = objective(Q);
      step = std::min(step * 2.0, 1e6 * std::max(1.0, P_R));
      Mat2c next;
      for (;;) {
        // below 1/L the projected step is an ascent step in exact arithmetic; near the optimum the
        // objective stops resolving the increase, so take it unconditionally
        if (step <= inv_lipschitz) {
          step = inv_lipschitz;
          next = project_trace_psd(Q + step * G, P_R);
          break;
        }
        next = project_trace_psd(Q + step * G, P_R);
        const double ascent = (G.adjoint() * (next - Q)).trace().real();
        if (objective(next) >= f0 + 1e-4 * ascent) break;
        step *= 0.5;
      }
      if ((next - Q).norm() == 0.0) {
        converged = res <= std::sqrt(tol);
        break;
      }
      Q = next;
    }
    if (!converged) throw NumericalFailure("bc_wsrmax: projected gradient did not converge");
  } else {
    Q.setZero();
  }
  out.Q = Q;
  const auto [a, b] = gains(Q);
  out.rates = {std::log2(1.0 + a), std::log2(1.0 + b)};
  return out;
}

struct BcBoundary {
  std::vector<RatePair> points;  // increasing r21
  std::vector<Mat2c> covariances;
  ComplexMatrix Psi;
};

/// BC frontier from n_weights weight pairs (w21, w12) = (k / (n - 1), 1 - k / (n - 1)).
inline BcBoundary bc_boundary(const ChannelPair& pair, double P_R, int n_weights = 65, unsigned threads = 0) {
  if (n_weights < 2) throw InvalidInput("bc_boundary: n_weights must be >= 2");
  const std::vector<BcResult> res = parallel_map(
      static_cast<std::size_t>(n_weights),
      [&](std::size_t k) {
        const double w21 = static_cast<double>(k) / (n_weights - 1);
        return bc_wsrmax(pair, P_R, w21, 1.0 - w21);
      },
      threads);
  BcBoundary out;
  out.Psi = res.front().Psi;
  for (const auto& r : res) {
    out.points.push_back(r.rates);
    out.covariances.push_back(r.Q);
  }
  return out;
}

struct Point2 {
  double x = 0.0;  // r21
  double y = 0.0;  // r12
};

using Polygon = std::vector<Point2>;

/// Counter-clockwise polygon of the pentagon scaled by s.
inline Polygon mac_polygon(const MacPentagon& m, double s) {
  const double c1 = s * m.c1, c2 = s * m.c2, cs = s * m.c_sum;
  Polygon p{{0.0, 0.0}, {c1, 0.0}};
  p.push_back({c1, std::max(0.0, std::min(c2, cs - c1))});
  p.push_back({std::max(0.0, std::min(c1, cs - c2)), c2});
  p.push_back({0.0, c2});
  return p;
}

/// Counter-clockwise polygon under the sampled BC frontier, scaled by s.
inline Polygon bc_polygon(const BcBoundary& bc, double s) {
  std::vector<RatePair> pts = bc.points;
  std::sort(pts.begin(), pts.end(), [](const RatePair& a, const RatePair& b) { return a.r21 < b.r21; });
  Polygon p{{0.0, 0.0}, {s * pts.back().r21, 0.0}};
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) p.push_back({s * it->r21, s * it->r12});
  p.push_back({0.0, s * pts.front().r12});
  return p;
}

/// Keep the part of a polygon with a x + b y <= c (Sutherland-Hodgman, one edge).
inline Polygon clip_halfplane(const Polygon& poly, double a, double b, double c) {
  Polygon out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& P = poly[i];
    const Point2& Q = poly[(i + 1) % n];
    const double fp = a * P.x + b * P.y - c, fq = a * Q.x + b * Q.y - c;
    if (fp <= 0.0) out.push_back(P);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
      const double t = fp / (fp - fq);
      out.push_back({P.x + t * (Q.x - P.x), P.y + t * (Q.y - P.y)});
    }
  }
  return out;
}

/// tau MAC intersected with (1 - tau) BC.
inline Polygon df_region_at_tau(const MacPentagon& mac, const BcBoundary& bc, double tau) {
  Polygon p = bc_polygon(bc, 1.0 - tau);
  p = clip_halfplane(p, 1.0, 0.0, tau * mac.c1);
  p = clip_halfplane(p, 0.0, 1.0, tau * mac.c2);
  p = clip_halfplane(p, 1.0, 1.0, tau * mac.c_sum);
  return p;
}

/// Whether pt lies in the convex counter-clockwise polygon (boundary included, up to tol).
inline bool in_convex_polygon(const Polygon& poly, const Point2& pt, double tol = 1e-12) {
  const std::size_t n = poly.size();
  if (n == 0) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& P = poly[i];
    const Point2& Q = poly[(i + 1) % n];
    const double ex = Q.x - P.x, ey = Q.y - P.y;
    const double len = std::hypot(ex, ey);
    if (len == 0.0) continue;
    if ((ex * (pt.y - P.y) - ey * (pt.x - P.x)) / len < -tol) return false;
  }
  return true;
}

inline std::vector<BoundaryPoint> polygon_points(const Polygon& poly) {
  std::vector<BoundaryPoint> pts;
  for (const auto& v : poly) {
    BoundaryPoint p;
    p.rates = {v.x, v.y};
    pts.push_back(p);
  }
  return pts;
}

struct DfRegion {
  MacPentagon mac;
  BcBoundary bc;
  std::vector<double> taus;
  std::vector<Polygon> per_tau;
  RegionBoundary envelope;  // Pareto frontier of the union over tau
};

inline DfRegion df_capacity_region(const ChannelPair& pair, double P1, double P2, double P_R, const std::vector<double>& taus,
                                   int n_weights = 65, unsigned threads = 0) {
  if (taus.empty()) throw InvalidInput("df_capacity_region: empty tau list");
  for (double t : taus)
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidInput("df_capacity_region: tau must lie in [0, 1]");
  DfRegion out;
  out.mac = mac_region(pair, P1, P2);
  out.bc = bc_boundary(pair, P_R, n_weights, threads);
  out.taus = taus;
  std::vector<BoundaryPoint> all;
  for (double t : taus) {
    out.per_tau.push_back(df_region_at_tau(out.mac, out.bc, t));
    const auto pts = polygon_points(out.per_tau.back());
    all.insert(all.end(), pts.begin(), pts.end());
  }
  out.envelope = pareto_envelope(std::move(all));
  return out;
}

/// Uniform tau grid on [0, 1] with n_tau points.
inline DfRegion df_capacity_region(const ChannelPair& pair, double P1, double P2, double P_R, int n_tau = 65,
                                   int n_weights = 65, unsigned threads = 0) {
  if (n_tau < 2) throw InvalidInput("df_capacity_region: n_tau must be >= 2");
  std::vector<double> taus;
  for (int i = 0; i < n_tau; ++i) taus.push_back(static_cast<double>(i) / (n_tau - 1));
  return df_capacity_region(pair, P1, P2, P_R, taus, n_weights, threads);
}

}  // namespace twrc
