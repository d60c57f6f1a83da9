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
 * @file bounds.hpp
 * @brief Closed-form sum-rate bounds: directional one-way capacities, the min-max upper bound and
 *        its simple relaxations, scheme lower bounds, and high-SNR limits.
 *
 * theta_i = ||h_i||^2, rho = |h1^H h2|^2 / (theta1 theta2). Rates in bits per complex dimension.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "twrc/channel.hpp"
#include "twrc/errors.hpp"

namespace twrc {

namespace detail {

inline void check_theta(double theta1, double theta2) {
  if (!(theta1 > 0.0) || !(theta2 > 0.0) || !std::isfinite(theta1) || !std::isfinite(theta2))
    throw InvalidInput("channel gains theta must be finite and > 0");
}

inline void check_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidInput("rho must lie in [0, 1]");
}

inline double golden_max(const auto& f, double lo, double hi, double width) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > width) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

// Samples have a single peak (non-decreasing then non-increasing), up to a relative slack.
inline bool single_peaked(const std::vector<double>& v) {
  const double slack = 1e-12 * (1.0 + std::abs(*std::max_element(v.begin(), v.end())));
  std::size_t i = 1;
  while (i < v.size() && v[i] >= v[i - 1] - slack) ++i;
  while (i < v.size() && v[i] <= v[i - 1] + slack) ++i;
  return i == v.size();
}

struct SearchResult {
  double arg = 0.0;
  double value = 0.0;
  bool unimodal = true;
};

// Maximize f over [lo, hi]: grid pre-scan, then golden-section inside the best bracket. When the
// samples are not single-peaked the scan is refined to `fallback` points before the local search.
inline SearchResult grid_golden_max(const auto& f, double lo, double hi, int grid, double width, int fallback = 2049) {
  auto scan = [&](int k) {
    std::vector<double> xs(static_cast<std::size_t>(k)), vs(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (k - 1);
      vs[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]);
    }
    return std::pair{xs, vs};
  };
  auto [xs, vs] = scan(grid);
  SearchResult out;
  out.unimodal = single_peaked(vs);
  if (!out.unimodal) std::tie(xs, vs) = scan(fallback);
  const auto best = static_cast<std::size_t>(std::max_element(vs.begin(), vs.end()) - vs.begin());
  const double a = xs[best == 0 ? 0 : best - 1];
  const double b = xs[std::min(best + 1, xs.size() - 1)];
  const double x = golden_max(f, a, b, width);
  out.arg = x;
  out.value = f(x);
  if (vs[best] > out.value) {
    out.arg = xs[best];
    out.value = vs[best];
  }
  return out;
}

inline double plog(double snr) { return 0.5 * std::log2(1.0 + snr); }

}  // namespace detail

/// One-way capacity S2 -> S1 under a split of the relay noise power (kappa21) and relay power P21.
inline double c21(double kappa21, double P21, double theta1, double theta2, double p2) {
  detail::check_theta(theta1, theta2);
  if (!(P21 > 0.0) || !(p2 > 0.0)) return 0.0;
  return detail::plog(theta2 * p2 / (1.0 + (theta2 / theta1) * p2 / P21 + kappa21 / (theta1 * P21)));
}

/// One-way capacity S1 -> S2.
inline double c12(double kappa12, double P12, double theta1, double theta2, double p1) {
  detail::check_theta(theta1, theta2);
  if (!(P12 > 0.0) || !(p1 > 0.0)) return 0.0;
  return detail::plog(theta1 * p1 / (1.0 + (theta1 / theta2) * p1 / P12 + kappa12 / (theta2 * P12)));
}

struct CubResult {
  double value = 0.0;
  double kappa21 = 0.5;
  double p21 = 0.0;
  bool unimodal = true;  // every pre-scan was single-peaked
};

/// max over P21 in [0, P_R] of c21(kappa21, P21) + c12(1 - kappa21, P_R - P21).
inline detail::SearchResult c_ub_inner(double kappa21, const PowerConfig& pc, double theta1, double theta2, int grid = 33) {
  auto f = [&](double P21) {
    return c21(kappa21, P21, theta1, theta2, pc.p2) + c12(1.0 - kappa21, pc.P_R - P21, theta1, theta2, pc.p1);
  };
  if (!(pc.P_R > 0.0)) return {0.0, 0.0, true};
  return detail::grid_golden_max(f, 0.0, pc.P_R, grid, 1e-8 * std::max(1.0, pc.P_R));
}

/**
 * Tightest sum-capacity upper bound: min over kappa21 in [0, 1] of the inner maximum over the
 * relay power split. Both levels use a `grid`-point pre-scan followed by golden-section search to
 * 1e-8 width (scaled by P_R for the inner level).
 */
inline CubResult c_ub(const PowerConfig& pc, double theta1, double theta2, int grid = 33) {
  pc.validate();
  detail::check_theta(theta1, theta2);
  if (grid < 3) throw InvalidInput("c_ub: grid must be >= 3");
  CubResult out;
  if (!(pc.P_R > 0.0)) return out;
  bool inner_unimodal = true;
  auto neg_outer = [&](double k) {
    const detail::SearchResult r = c_ub_inner(k, pc, theta1, theta2, grid);
    inner_unimodal = inner_unimodal && r.unimodal;
    return -r.value;
  };
  const detail::SearchResult outer = detail::grid_golden_max(neg_outer, 0.0, 1.0, grid, 1e-8);
  const detail::SearchResult inner = c_ub_inner(outer.arg, pc, theta1, theta2, grid);
  out.value = inner.value;
  out.kappa21 = outer.arg;
  out.p21 = inner.arg;
  out.unimodal = outer.unimodal && inner_unimodal;
  return out;
}

/// Simple upper bound: kappa21 = kappa12 = 1/2 and P21 = P12 = P_R.
inline double c_ub0(const PowerConfig& pc, double theta1, double theta2) {
  pc.validate();
  detail::check_theta(theta1, theta2);
  if (!(pc.P_R > 0.0)) return 0.0;
  return c21(0.5, pc.P_R, theta1, theta2, pc.p2) + c12(0.5, pc.P_R, theta1, theta2, pc.p1);
}

/// Upper bound for equal gains theta and p1 = p2 = P_R.
inline double c_ub_sym(double theta, double P_R) {
  detail::check_theta(theta, theta);
  if (!(P_R > 0.0)) return 0.0;
  return std::log2(1.0 + theta * P_R / (3.0 + 1.0 / (theta * P_R)));
}

/// Sum rate of maximal-ratio relaying with equal weights (a lower bound on its best sum rate).
inline double r_lb_mr(const PowerConfig& pc, double theta1, double theta2, double rho) {
  pc.validate();
  detail::check_theta(theta1, theta2);
  detail::check_rho(rho);
  if (!(pc.P_R > 0.0)) return 0.0;
  const double shape = (1.0 + 3.0 * rho) / ((1.0 + rho) * (1.0 + rho));
  const double d21 = (1.0 + (pc.p1 + (theta2 / theta1) * pc.p2) / pc.P_R) * shape + 2.0 / (theta1 * (1.0 + rho) * pc.P_R);
  const double d12 = (1.0 + ((theta1 / theta2) * pc.p1 + pc.p2) / pc.P_R) * shape + 2.0 / (theta2 * (1.0 + rho) * pc.P_R);
  return detail::plog(theta2 * pc.p2 / d21) + detail::plog(theta1 * pc.p1 / d12);
}

/// Lower bound on the equal-weight zero-forcing sum rate; rho must be < 1.
inline double r_lb_zf(const PowerConfig& pc, double theta1, double theta2, double rho) {
  pc.validate();
  detail::check_theta(theta1, theta2);
  detail::check_rho(rho);
  if (rho >= 1.0) throw InvalidInput("r_lb_zf: zero forcing is undefined for rho = 1");
  if (!(pc.P_R > 0.0) || !(pc.p1 > 0.0) || !(pc.p2 > 0.0)) return 0.0;
  const double s = (theta1 + theta2) / (theta1 * theta2 * (1.0 - rho));
  const double psum = pc.p1 + pc.p2;
  const double denom = s * (1.0 + psum / pc.P_R) * (std::max(pc.p1, pc.p2) + s * psum / (pc.P_R + psum));
  return std::log2(1.0 + 2.0 * pc.p1 * pc.p2 / denom);
}

inline double gap_mr(double rho) {
  detail::check_rho(rho);
  return std::log2((1.0 + 3.0 * rho) / ((1.0 + rho) * (1.0 + rho)));
}

inline double gap_zf(double rho) {
  detail::check_rho(rho);
  if (rho >= 1.0) throw InvalidInput("gap_zf: zero forcing is undefined for rho = 1");
  return std::log2(1.0 / (1.0 - rho));
}

struct AsymptoticGaps {
  double gap_mr = 0.0;
  double gap_zf = 0.0;
};

/// High-SNR losses of the two schemes against the symmetric upper bound (equal gains, K1 = K2 = 1).
inline AsymptoticGaps asymptotic_gaps(double rho) { return {gap_mr(rho), gap_zf(rho)}; }

/// High-SNR forms with P_R = K1 p1 = K2 p2, o(1) terms dropped.
inline double asym_c_ub0(double P_R, double theta1, double theta2, double K1, double K2) {
  return std::log2(P_R) + 0.5 * std::log2(theta1 * theta2 / ((K2 + theta2 / theta1) * (K1 + theta1 / theta2)));
}

inline double asym_r_lb_mr(double P_R, double theta1, double theta2, double rho, double K1, double K2) {
  const double shape = (1.0 + 3.0 * rho) / ((1.0 + rho) * (1.0 + rho));
  return std::log2(P_R) +
         0.5 * std::log2(theta1 * theta2 /
                         ((K2 + K2 / K1 + theta2 / theta1) * (K1 + K1 / K2 + theta1 / theta2) * shape * shape));
}

inline double asym_r_lb_zf(double P_R, double theta1, double theta2, double rho, double K1, double K2) {
  if (rho >= 1.0) throw InvalidInput("asym_r_lb_zf: zero forcing is undefined for rho = 1");
  const double k = 1.0 + std::max(K1, K2) + std::max(K1 / K2, K2 / K1);
  return std::log2(P_R) + std::log2(theta1 * theta2 / (k * (theta1 + theta2) / (2.0 * (1.0 - rho))));
}

struct BoundsReport {
  double c21 = 0.0;  // full relay power and kappa21 = 1/2
  double c12 = 0.0;
  double c_ub = 0.0;
  double c_ub0 = 0.0;
  std::optional<double> c_ub_sym;  // only for theta1 = theta2 and p1 = p2 = P_R
  double r_lb_mr = 0.0;
  std::optional<double> r_lb_zf;  // absent for rho = 1
  double kappa21_star = 0.5;
  double p21_star = 0.0;
};

inline BoundsReport bounds_report(const PowerConfig& pc, double theta1, double theta2, double rho, int grid = 33) {
  BoundsReport r;
  r.c21 = c21(0.5, pc.P_R, theta1, theta2, pc.p2);
  r.c12 = c12(0.5, pc.P_R, theta1, theta2, pc.p1);
  const CubResult cub = c_ub(pc, theta1, theta2, grid);
  r.c_ub = cub.value;
  r.kappa21_star = cub.kappa21;
  r.p21_star = cub.p21;
  r.c_ub0 = c_ub0(pc, theta1, theta2);
  const bool symmetric = std::abs(theta1 - theta2) <= 1e-12 * theta1 && pc.p1 == pc.p2 && pc.p1 == pc.P_R;
  if (symmetric) r.c_ub_sym = c_ub_sym(theta1, pc.P_R);
  r.r_lb_mr = r_lb_mr(pc, theta1, theta2, rho);
  if (rho < 1.0) r.r_lb_zf = r_lb_zf(pc, theta1, theta2, rho);
  return r;
}

}  // namespace twrc
