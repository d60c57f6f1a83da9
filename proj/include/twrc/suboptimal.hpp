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
 * @file suboptimal.hpp
 * @brief Closed-form relay matrices: maximal-ratio (MR) and zero-forcing (ZF) receive/transmit,
 *        direct relaying A = zeta I, and four-slot one-way alternating relaying.
 *
 * Both MR and ZF matrices carry two weights: a scales the S1 -> S2 link and b the S2 -> S1 link.
 * Sweeps parameterize (a, b) = (sin phi, cos phi), phi in [0, pi/2], so the single-link endpoints
 * are reachable; the ratio a / b is tan phi.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "twrc/channel.hpp"
#include "twrc/errors.hpp"
#include "twrc/linalg.hpp"
#include "twrc/region.hpp"

namespace twrc {

enum class Scheme { MR, ZF };

inline const char* to_string(Scheme s) { return s == Scheme::MR ? "mr" : "zf"; }

/// A relay matrix scaled to use exactly P_R, with the scaled weights.
struct SchemeBeamformer {
  ComplexMatrix A;
  double a = 0.0;
  double b = 0.0;
};

/// H_DL^H diag(a, b) H_UL^H = a h2^* h1^H + b h1^* h2^H.
inline ComplexMatrix mr_matrix(const ChannelPair& pair, double a, double b) {
  return a * pair.h2().conjugate() * pair.h1().adjoint() + b * pair.h1().conjugate() * pair.h2().adjoint();
}

/// H_DL^+ diag(a, b) H_UL^+ = (H_UL^+)^T F diag(a, b) H_UL^+, F the 2 x 2 swap.
inline ComplexMatrix zf_matrix(const ChannelPair& pair, double a, double b, double rank_tol = 1e-10) {
  const ComplexMatrix P = pinv_tall(pair.uplink(), rank_tol);
  Mat2c FD;
  FD << 0.0, b, a, 0.0;
  return P.transpose() * FD * P;
}

/// Reduced MR matrix Sigma V^T F diag(a, b) V Sigma in the frame of eff.
inline Mat2c mr_reduced(const EffectiveChannel& eff, double a, double b) {
  Mat2c FD;
  FD << 0.0, b, a, 0.0;
  const Mat2c S = eff.sigma.cast<cd>().asDiagonal();
  return S * eff.V.transpose() * FD * eff.V * S;
}

/// Reduced ZF matrix Sigma^{-1} V^T F diag(a, b) V Sigma^{-1}.
inline Mat2c zf_reduced(const EffectiveChannel& eff, double a, double b) {
  if (!(eff.sigma(1) > 1e-10 * eff.sigma(0))) throw RankDeficiency("zf_reduced: channels are parallel");
  Mat2c FD;
  FD << 0.0, b, a, 0.0;
  const Mat2c Si = eff.sigma.cwiseInverse().cast<cd>().asDiagonal();
  return Si * eff.V.transpose() * FD * eff.V * Si;
}

namespace detail {

inline SchemeBeamformer scale_to_budget(ComplexMatrix A, double a, double b, const ChannelPair& pair,
                                        const PowerConfig& pc) {
  const double p = relay_power(A, pair, pc);
  const double s = (pc.P_R > 0.0 && p > 0.0) ? std::sqrt(pc.P_R / p) : 0.0;
  A *= s;
  return {std::move(A), a * s, b * s};
}

inline std::pair<double, double> ratio_weights(double ratio) {
  if (!(ratio >= 0.0)) throw InvalidInput("ratio must be >= 0");
  if (std::isinf(ratio)) return {1.0, 0.0};
  return {ratio, 1.0};
}

}  // namespace detail

inline SchemeBeamformer scheme_weights(Scheme s, const ChannelPair& pair, double a, double b, const PowerConfig& pc) {
  pc.validate();
  ComplexMatrix A = s == Scheme::MR ? mr_matrix(pair, a, b) : zf_matrix(pair, a, b);
  return detail::scale_to_budget(std::move(A), a, b, pair, pc);
}

/// MR relay matrix with a / b = ratio (ratio = +inf means b = 0), scaled to relay power P_R.
inline SchemeBeamformer mrr_mrt(const ChannelPair& pair, double ratio, const PowerConfig& pc) {
  const auto [a, b] = detail::ratio_weights(ratio);
  return scheme_weights(Scheme::MR, pair, a, b, pc);
}

/// ZF relay matrix with a / b = ratio, scaled to P_R. Throws RankDeficiency for parallel channels.
inline SchemeBeamformer zfr_zft(const ChannelPair& pair, double ratio, const PowerConfig& pc) {
  const auto [a, b] = detail::ratio_weights(ratio);
  return scheme_weights(Scheme::ZF, pair, a, b, pc);
}

/// Scheme matrix at sweep angle phi.
inline SchemeBeamformer scheme_at_angle(Scheme s, const ChannelPair& pair, double phi, const PowerConfig& pc) {
  return scheme_weights(s, pair, std::sin(phi), std::cos(phi), pc);
}

/// Pareto envelope of the scheme's rate pairs over n_ratios angles uniform in [0, pi/2].
inline RegionBoundary sweep_region(Scheme s, const ChannelPair& pair, const PowerConfig& pc, int n_ratios) {
  if (n_ratios < 2) throw InvalidInput("sweep_region: n_ratios must be >= 2");
  const ComplexMatrix U = svd_tall(pair.uplink()).U;
  std::vector<BoundaryPoint> pts;
  for (int k = 0; k < n_ratios; ++k) {
    const double phi = (std::numbers::pi / 2.0) * k / (n_ratios - 1);
    const SchemeBeamformer bf = scheme_at_angle(s, pair, phi, pc);
    BoundaryPoint p;
    p.rates = rate_pair(bf.A, pair, pc);
    p.p1 = pc.p1;
    p.p2 = pc.p2;
    p.B = reduce(bf.A, U);
    p.p_relay = relay_power(bf.A, pair, pc);
    pts.push_back(p);
  }
  return pareto_envelope(std::move(pts));
}

struct SchemeSumRate {
  double R_sum = 0.0;
  double phi = 0.0;
  RatePair rates;
};

/**
 * Largest sum rate of the scheme on a rate-profile ray: max over phi of
 * min(r21 / alpha21, r12 / alpha12), a zero component dropping its term. Dense scan of n_scan
 * angles, then golden-section refinement around the best sample.
 */
inline SchemeSumRate scheme_max_sum_rate(Scheme s, const ChannelPair& pair, const PowerConfig& pc, double alpha21,
                                         int n_scan = 257) {
  if (!(alpha21 >= 0.0 && alpha21 <= 1.0)) throw InvalidInput("alpha21 must lie in [0, 1]");
  const double alpha12 = 1.0 - alpha21;
  auto eval = [&](double phi) {
    const SchemeBeamformer bf = scheme_at_angle(s, pair, phi, pc);
    const RatePair r = rate_pair(bf.A, pair, pc);
    double v = std::numeric_limits<double>::infinity();
    if (alpha21 > 0.0) v = std::min(v, r.r21 / alpha21);
    if (alpha12 > 0.0) v = std::min(v, r.r12 / alpha12);
    return std::pair{v, r};
  };
  const double half_pi = std::numbers::pi / 2.0;
  SchemeSumRate best;
  best.R_sum = -1.0;
  int best_k = 0;
  for (int k = 0; k < n_scan; ++k) {
    const double phi = half_pi * k / (n_scan - 1);
    const auto [v, r] = eval(phi);
    if (v > best.R_sum) {
      best = {v, phi, r};
      best_k = k;
    }
  }
  double lo = half_pi * std::max(0, best_k - 1) / (n_scan - 1);
  double hi = half_pi * std::min(n_scan - 1, best_k + 1) / (n_scan - 1);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
  double fc = eval(c).first, fd = eval(d).first;
  while (hi - lo > 1e-12) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = eval(c).first;
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = eval(d).first;
    }
  }
  const double phi = 0.5 * (lo + hi);
  const auto [v, r] = eval(phi);
  if (v > best.R_sum) best = {v, phi, r};
  return best;
}

/// A = zeta I with relay power P_R.
inline ComplexMatrix direct_relay(const ChannelPair& pair, const PowerConfig& pc) {
  pc.validate();
  const double denom = pair.theta1() * pc.p1 + pair.theta2() * pc.p2 + static_cast<double>(pair.M());
  const double zeta = std::sqrt(pc.P_R / denom);
  return ComplexMatrix::Identity(pair.M(), pair.M()) * cd(zeta, 0.0);
}

struct OneWayResult {
  double r21 = 0.0;
  double r12 = 0.0;
  double psi21 = 0.0;
  double psi12 = 0.0;

  double sum() const { return r21 + r12; }
};

/**
 * Four-slot one-way relaying: S2 -> R -> S1 in two slots with A21 = psi h1^* h2^H, then the reverse
 * with A12 = psi h2^* h1^H. Only one source transmits in each exchange, and each directional rate
 * is 1/4 log2(1 + SNR). The relay spends P_R while active; energy_averaged doubles that.
 */
inline OneWayResult oneway_alternating(const ChannelPair& pair, const PowerConfig& pc, bool energy_averaged = false) {
  pc.validate();
  const double budget = energy_averaged ? 2.0 * pc.P_R : pc.P_R;
  const double t1 = pair.theta1(), t2 = pair.theta2();
  OneWayResult out;
  out.psi21 = std::sqrt(budget / (t1 * t2 * (t2 * pc.p2 + 1.0)));
  out.psi12 = std::sqrt(budget / (t1 * t2 * (t1 * pc.p1 + 1.0)));
  auto quarter = [](double snr) { return 0.25 * std::log2(1.0 + snr); };
  const double a = out.psi21 * out.psi21, c = out.psi12 * out.psi12;
  out.r21 = quarter(a * t1 * t1 * t2 * t2 * pc.p2 / (a * t1 * t1 * t2 + 1.0));
  out.r12 = quarter(c * t1 * t1 * t2 * t2 * pc.p1 / (c * t2 * t2 * t1 + 1.0));
  return out;
}

}  // namespace twrc
