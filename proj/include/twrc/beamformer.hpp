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
 * @file beamformer.hpp
 * @brief Optimal relay beamforming: SNR-constrained relay power minimization as an exact SDP,
 *        rate-profile bisection for boundary points, and region tracing.
 *
 * Vectorization is row stacking throughout: Vec([[1, 2], [3, 4]]) = (1, 2, 3, 4), so
 * b = (B11, B12, B21, B22). The real 8-vector is x = [Re b; Im b].
 */

#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "twrc/bounds.hpp"
#include "twrc/channel.hpp"
#include "twrc/errors.hpp"
#include "twrc/linalg.hpp"
#include "twrc/parallel.hpp"
#include "twrc/region.hpp"
#include "twrc/sdp.hpp"

namespace twrc {

using Vec4c = Eigen::Matrix<cd, 4, 1>;
using Mat4c = Eigen::Matrix<cd, 4, 4>;
using Mat24c = Eigen::Matrix<cd, 2, 4>;

inline Vec4c vec_rows(const Mat2c& B) {
  Vec4c b;
  b << B(0, 0), B(0, 1), B(1, 0), B(1, 1);
  return b;
}

inline Mat2c unvec_rows(const Vec4c& b) {
  Mat2c B;
  B << b(0), b(1), b(2), b(3);
  return B;
}

/// Quadratic forms of the power-minimization problem in b = Vec(B) and their real expansions.
struct QcqpBuild {
  Mat2c Theta;  // p1 g1 g1^H + p2 g2 g2^H + I
  Mat4c Phi;    // E0^{1/2}
  Vec4c f1;     // Vec(g1 g2^T): g1^T B g2 = f1^T b
  Vec4c f2;     // Vec(g2 g1^T)
  Mat24c G1;    // ||B^H g1^*|| = ||G1 b||
  Mat24c G2;
  Mat4c E0, E1, E2;
  bool active1 = false;  // constraint rows present in prob
  bool active2 = false;
  SdpProblem prob;
};

inline Mat24c g_matrix(const Vec2c& g) {
  Mat24c G = Mat24c::Zero();
  G(0, 0) = g(0);
  G(0, 2) = g(1);
  G(1, 1) = g(0);
  G(1, 3) = g(1);
  return G;
}

/**
 * p_R(B) = b^H E0 b, SNR_1 >= gamma1_bar  <=>  b^H E1 b >= 1, SNR_2 >= gamma2_bar  <=>  b^H E2 b >= 1.
 * A zero target leaves that constraint out of prob (E_i is then zero).
 */
inline QcqpBuild build_qcqp(const EffectiveChannel& eff, const PowerConfig& pc, double gamma1_bar, double gamma2_bar) {
  pc.validate();
  if (!(gamma1_bar >= 0.0) || !(gamma2_bar >= 0.0) || !std::isfinite(gamma1_bar) || !std::isfinite(gamma2_bar))
    throw InvalidInput("build_qcqp: SNR targets must be finite and >= 0");
  QcqpBuild q;
  const Vec2c& g1 = eff.g1;
  const Vec2c& g2 = eff.g2;
  q.Theta = pc.p1 * g1 * g1.adjoint() + pc.p2 * g2 * g2.adjoint() + Mat2c::Identity();
  const Mat2c thetaT = q.Theta.transpose();
  q.E0 = Mat4c::Zero();
  q.E0.block<2, 2>(0, 0) = thetaT;
  q.E0.block<2, 2>(2, 2) = thetaT;
  const Mat2c root = sqrt_psd2(thetaT);
  q.Phi = Mat4c::Zero();
  q.Phi.block<2, 2>(0, 0) = root;
  q.Phi.block<2, 2>(2, 2) = root;
  q.f1 = vec_rows(g1 * g2.transpose());
  q.f2 = vec_rows(g2 * g1.transpose());
  q.G1 = g_matrix(g1);
  q.G2 = g_matrix(g2);
  q.E1 = Mat4c::Zero();
  q.E2 = Mat4c::Zero();
  std::vector<RealMatrix> cons;
  if (gamma1_bar > 0.0) {
    q.E1 = (pc.p2 / gamma1_bar) * q.f1.conjugate() * q.f1.transpose() - q.G1.adjoint() * q.G1;
    q.active1 = true;
    cons.push_back(real_embedding(q.E1));
  }
  if (gamma2_bar > 0.0) {
    q.E2 = (pc.p1 / gamma2_bar) * q.f2.conjugate() * q.f2.transpose() - q.G2.adjoint() * q.G2;
    q.active2 = true;
    cons.push_back(real_embedding(q.E2));
  }
  q.prob = SdpProblem(real_embedding(q.E0), std::move(cons));
  return q;
}

struct MinPowerResult {
  double p_star = std::numeric_limits<double>::infinity();  // +inf when the targets are unreachable
  std::optional<Mat2c> B;
  SdpStatus status = SdpStatus::infeasible;
};

/// Least relay power meeting SNR targets (gamma1_bar at S1, gamma2_bar at S2). Throws
/// NumericalFailure when the SDP solver fails.
inline MinPowerResult min_relay_power(const EffectiveChannel& eff, const PowerConfig& pc, double gamma1_bar,
                                      double gamma2_bar, const SdpOptions& opts = {}) {
  const QcqpBuild q = build_qcqp(eff, pc, gamma1_bar, gamma2_bar);
  MinPowerResult out;
  if (!q.active1 && !q.active2) {
    out.p_star = 0.0;
    out.B = Mat2c::Zero();
    out.status = SdpStatus::optimal;
    return out;
  }
  const SdpSolution sol = solve_sdp(q.prob, opts);
  out.status = sol.status;
  if (sol.status == SdpStatus::infeasible) return out;
  if (sol.status != SdpStatus::optimal) throw NumericalFailure("min_relay_power: " + sol.message);
  const RealVector x = extract_rank_one(sol, q.prob);
  const Vec4c b = unstack_real(x);
  out.B = unvec_rows(b);
  out.p_star = sol.objective;
  return out;
}

/// Rate profile (alpha21, alpha12) on the unit simplex.
struct RateProfile {
  double alpha21 = 0.5;
  double alpha12 = 0.5;

  static RateProfile from_alpha21(double a21) {
    if (!(a21 >= 0.0 && a21 <= 1.0)) throw InvalidInput("RateProfile: alpha21 must lie in [0, 1]");
    return {a21, 1.0 - a21};
  }

  void validate() const {
    if (!(alpha21 >= 0.0) || !(alpha12 >= 0.0) || alpha21 + alpha12 != 1.0)
      throw InvalidInput("RateProfile: components must be >= 0 and sum to 1");
  }
};

/// SNR targets that put the sum rate R on the profile ray.
inline std::pair<double, double> profile_targets(const RateProfile& prof, double R) {
  auto target = [](double a, double r) { return std::expm1(2.0 * a * r * std::numbers::ln2); };
  return {target(prof.alpha21, R), target(prof.alpha12, R)};
}

struct SumRateResult {
  double R_sum = 0.0;
  Mat2c B = Mat2c::Zero();
  RatePair rates;         // achieved by B
  double p_relay = 0.0;   // power of B
  double upper = 0.0;     // initial bracket top
  int steps = 0;
};

/// Whether sum rate R on the profile ray needs at most P_R.
inline bool profile_feasible(const EffectiveChannel& eff, const PowerConfig& pc, const RateProfile& prof, double R,
                             const SdpOptions& opts = {}, std::optional<Mat2c>* B = nullptr) {
  const auto [g1, g2] = profile_targets(prof, R);
  const MinPowerResult r = min_relay_power(eff, pc, g1, g2, opts);
  if (B) *B = r.B;
  return r.p_star <= pc.P_R;
}

/**
 * Largest sum rate on the profile ray, by bisection over [0, c_ub0] until the bracket is at most
 * delta_r wide. The returned rate is feasible and rate + 2 delta_r is not.
 */
inline SumRateResult max_sum_rate(const EffectiveChannel& eff, const PowerConfig& pc, const RateProfile& prof,
                                  double delta_r = 1e-4, const SdpOptions& opts = {}) {
  pc.validate();
  prof.validate();
  if (!(delta_r > 0.0)) throw InvalidInput("max_sum_rate: delta_r must be > 0");
  SumRateResult out;
  out.upper = c_ub0(pc, eff.theta1(), eff.theta2());
  if (!(pc.P_R > 0.0)) return out;
  double lo = 0.0, hi = out.upper;
  Mat2c best = Mat2c::Zero();
  while (hi - lo > delta_r) {
    const double mid = 0.5 * (lo + hi);
    std::optional<Mat2c> B;
    if (profile_feasible(eff, pc, prof, mid, opts, &B)) {
      lo = mid;
      best = *B;
    } else {
      hi = mid;
    }
    ++out.steps;
  }
  out.R_sum = lo;
  out.B = best;
  out.rates = rate_pair_reduced(best, eff, pc);
  out.p_relay = relay_power_reduced(best, eff, pc);
  return out;
}

struct BisectionCheck {
  bool feasible_at_rate = false;
  bool infeasible_above = false;

  bool ok() const { return feasible_at_rate && infeasible_above; }
};

/// Re-check the bisection contract for a returned sum rate.
inline BisectionCheck check_bisection_contract(const EffectiveChannel& eff, const PowerConfig& pc, const RateProfile& prof,
                                               double R_sum, double delta_r, const SdpOptions& opts = {}) {
  BisectionCheck c;
  c.feasible_at_rate = R_sum <= 0.0 || profile_feasible(eff, pc, prof, R_sum, opts);
  c.infeasible_above = !profile_feasible(eff, pc, prof, R_sum + 2.0 * delta_r, opts);
  return c;
}

/// Profile rates alpha21 = i / (n - 1), i = 0..n-1.
inline std::vector<RateProfile> uniform_profiles(int n_profiles) {
  if (n_profiles < 2) throw InvalidInput("n_profiles must be >= 2");
  std::vector<RateProfile> out;
  for (int i = 0; i < n_profiles; ++i) out.push_back(RateProfile::from_alpha21(static_cast<double>(i) / (n_profiles - 1)));
  return out;
}

/// One boundary point per profile, in profile order (increasing r21). Point rates are the profile
/// point (alpha21 R, alpha12 R); B is the power-minimizing matrix found at R.
inline RegionBoundary rate_region_boundary(const EffectiveChannel& eff, const PowerConfig& pc, int n_profiles,
                                           double delta_r = 1e-4, unsigned threads = 0, const SdpOptions& opts = {}) {
  const std::vector<RateProfile> profiles = uniform_profiles(n_profiles);
  RegionBoundary out;
  out.points = parallel_map(
      profiles.size(),
      [&](std::size_t i) {
        const SumRateResult r = max_sum_rate(eff, pc, profiles[i], delta_r, opts);
        BoundaryPoint p;
        p.rates = {profiles[i].alpha21 * r.R_sum, profiles[i].alpha12 * r.R_sum};
        p.alpha21 = profiles[i].alpha21;
        p.p1 = pc.p1;
        p.p2 = pc.p2;
        p.B = r.B;
        p.p_relay = r.p_relay;
        return p;
      },
      threads);
  return out;
}

/// k source powers log-spaced from P/100 to P (both included); k = 1 gives {P}, P = 0 gives {0}.
inline std::vector<double> power_grid(double P, int k) {
  if (k < 1) throw InvalidInput("power_grid: need at least one point");
  if (!(P >= 0.0) || !std::isfinite(P)) throw InvalidInput("power_grid: power must be finite and >= 0");
  if (P == 0.0 || k == 1) return {P};
  std::vector<double> out;
  for (int i = 0; i < k; ++i) out.push_back(i == k - 1 ? P : P * std::pow(10.0, -2.0 + 2.0 * i / (k - 1)));
  return out;
}

/// Pareto envelope of the union of achievable regions over the source-power lists.
inline RegionBoundary capacity_region(const ChannelPair& pair, const std::vector<double>& p1_list,
                                      const std::vector<double>& p2_list, double P_R, int n_profiles,
                                      double delta_r = 1e-4, unsigned threads = 0, const SdpOptions& opts = {}) {
  const EffectiveChannel eff = effective(pair);
  std::vector<PowerConfig> cfgs;
  for (double p1 : p1_list)
    for (double p2 : p2_list) cfgs.push_back({p1, p2, P_R});
  for (const auto& c : cfgs) c.validate();
  const std::vector<RegionBoundary> parts = parallel_map(
      cfgs.size(), [&](std::size_t i) { return rate_region_boundary(eff, cfgs[i], n_profiles, delta_r, 1, opts); },
      threads);
  return union_envelope(parts);
}

inline RegionBoundary capacity_region(const ChannelPair& pair, double P1, double P2, double P_R, int grid = 8,
                                      int n_profiles = 33, double delta_r = 1e-4, unsigned threads = 0,
                                      const SdpOptions& opts = {}) {
  return capacity_region(pair, power_grid(P1, grid), power_grid(P2, grid), P_R, n_profiles, delta_r, threads, opts);
}

}  // namespace twrc
