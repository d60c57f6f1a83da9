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
 * @file oracle.hpp
 * @brief Direct-search validators over the 8 real parameters of B, independent of the SDP path.
 *
 * Every restart draws B with CN(0, 1) entries and runs a coordinate pattern search (poll +-step on
 * each real coordinate, halve the step when no poll improves). The relay power constraint is
 * enforced by rescaling B, which is exact because the power is quadratic in B. Restarts use seed
 * + restart index and are reduced in index order, so results do not depend on scheduling.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "twrc/beamformer.hpp"
#include "twrc/channel.hpp"
#include "twrc/parallel.hpp"
#include "twrc/rng.hpp"

namespace twrc {

struct OracleResult {
  double value = 0.0;  // sum-rate witness or power witness
  Mat2c B = Mat2c::Zero();
  RatePair rates;
  double p_relay = 0.0;
};

namespace detail {

using Params = std::array<double, 8>;

inline Mat2c params_to_b(const Params& x) {
  Mat2c B;
  B << cd(x[0], x[4]), cd(x[1], x[5]), cd(x[2], x[6]), cd(x[3], x[7]);
  return B;
}

inline Params random_params(Rng& rng) {
  Params x{};
  for (int i = 0; i < 4; ++i) {
    const cd z = rng.cscg();
    x[static_cast<std::size_t>(i)] = z.real();
    x[static_cast<std::size_t>(i + 4)] = z.imag();
  }
  return x;
}

// Coordinate pattern search minimizing score (lexicographic pair), starting from x.
template <typename Score>
Params pattern_search(Params x, const Score& score, int n_iters) {
  auto best = score(x);
  double step = 0.5;
  for (int it = 0; it < n_iters && step > 1e-12; ++it) {
    bool improved = false;
    for (std::size_t k = 0; k < x.size(); ++k) {
      for (double dir : {1.0, -1.0}) {
        Params y = x;
        y[k] += dir * step;
        const auto s = score(y);
        if (s < best) {
          best = s;
          x = y;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
    // keep the parameters on a fixed scale so the step stays meaningful
    double nrm = 0.0;
    for (double v : x) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (nrm > 0.0)
      for (double& v : x) v /= nrm;
  }
  return x;
}

inline double profile_value(const RatePair& r, const RateProfile& prof) {
  double v = std::numeric_limits<double>::infinity();
  if (prof.alpha21 > 0.0) v = std::min(v, r.r21 / prof.alpha21);
  if (prof.alpha12 > 0.0) v = std::min(v, r.r12 / prof.alpha12);
  return v;
}

}  // namespace detail

/// Best sum rate on the profile ray found by direct search; an achievable (lower-bound) witness.
inline OracleResult oracle_max_sum_rate(const EffectiveChannel& eff, const PowerConfig& pc, const RateProfile& prof,
                                        int n_restarts = 64, int n_iters = 2000, std::uint64_t seed = 0,
                                        unsigned threads = 0) {
  pc.validate();
  prof.validate();
  if (n_restarts < 1 || n_iters < 1) throw InvalidInput("oracle: budgets must be >= 1");
  OracleResult out;
  if (!(pc.P_R > 0.0)) return out;
  auto scaled = [&](const detail::Params& x) {
    Mat2c B = detail::params_to_b(x);
    const double p = relay_power_reduced(B, eff, pc);
    return p > 0.0 ? Mat2c(B * std::sqrt(pc.P_R / p)) : Mat2c::Zero();
  };
  auto score = [&](const detail::Params& x) {
    return -detail::profile_value(rate_pair_reduced(scaled(x), eff, pc), prof);
  };
  const std::vector<OracleResult> runs = parallel_map(
      static_cast<std::size_t>(n_restarts),
      [&](std::size_t r) {
        Rng rng(seed + r);
        const detail::Params x = detail::pattern_search(detail::random_params(rng), score, n_iters);
        OracleResult o;
        o.B = scaled(x);
        o.rates = rate_pair_reduced(o.B, eff, pc);
        o.p_relay = relay_power_reduced(o.B, eff, pc);
        o.value = detail::profile_value(o.rates, prof);
        return o;
      },
      threads);
  for (const auto& o : runs) {
    if (o.p_relay > pc.P_R * (1.0 + 1e-12)) continue;  // re-verified budget
    if (o.value > out.value) out = o;
  }
  return out;
}

/// Least relay power found that meets both SNR targets; nullopt when no restart found a feasible B.
inline std::optional<OracleResult> oracle_min_power(const EffectiveChannel& eff, const PowerConfig& pc, double gamma1_bar,
                                                    double gamma2_bar, int n_restarts = 64, int n_iters = 2000,
                                                    std::uint64_t seed = 0, unsigned threads = 0) {
  pc.validate();
  if (!(gamma1_bar >= 0.0) || !(gamma2_bar >= 0.0)) throw InvalidInput("oracle_min_power: targets must be >= 0");
  if (n_restarts < 1 || n_iters < 1) throw InvalidInput("oracle: budgets must be >= 1");
  if (gamma1_bar == 0.0 && gamma2_bar == 0.0) return OracleResult{};

  // For direction B, SNR_i(sB) = s^2 X_i p / (s^2 Y_i + 1); the least feasible s^2 is
  // max_i gamma_i / (X_i p - gamma_i Y_i), provided every denominator is positive.
  struct Eval {
    bool feasible = false;
    double s2 = 0.0;
    double margin = 0.0;  // min_i (X_i p - gamma_i Y_i) / ||B||^2
  };
  auto evaluate = [&](const Mat2c& B) {
    Eval e;
    const double nb = std::max(B.squaredNorm(), std::numeric_limits<double>::min());
    const double x1 = std::norm((eff.g1.transpose() * B * eff.g2)(0)) * pc.p2;
    const double y1 = (B.adjoint() * eff.g1.conjugate()).squaredNorm();
    const double x2 = std::norm((eff.g2.transpose() * B * eff.g1)(0)) * pc.p1;
    const double y2 = (B.adjoint() * eff.g2.conjugate()).squaredNorm();
    double margin = std::numeric_limits<double>::infinity();
    double s2 = 0.0;
    if (gamma1_bar > 0.0) {
      margin = std::min(margin, (x1 - gamma1_bar * y1) / nb);
      s2 = std::max(s2, gamma1_bar / (x1 - gamma1_bar * y1));
    }
    if (gamma2_bar > 0.0) {
      margin = std::min(margin, (x2 - gamma2_bar * y2) / nb);
      s2 = std::max(s2, gamma2_bar / (x2 - gamma2_bar * y2));
    }
    e.margin = margin;
    e.feasible = margin > 0.0;
    e.s2 = s2;
    return e;
  };
  auto score = [&](const detail::Params& x) {
    const Mat2c B = detail::params_to_b(x);
    const Eval e = evaluate(B);
    if (!e.feasible) return std::pair{1.0, -e.margin};
    return std::pair{0.0, e.s2 * relay_power_reduced(B, eff, pc)};
  };
  const std::vector<std::optional<OracleResult>> runs = parallel_map(
      static_cast<std::size_t>(n_restarts),
      [&](std::size_t r) -> std::optional<OracleResult> {
        Rng rng(seed + r);
        const detail::Params x = detail::pattern_search(detail::random_params(rng), score, n_iters);
        const Mat2c B0 = detail::params_to_b(x);
        const Eval e = evaluate(B0);
        if (!e.feasible) return std::nullopt;
        OracleResult o;
        o.B = B0 * std::sqrt(e.s2 * (1.0 + 1e-12));
        o.p_relay = relay_power_reduced(o.B, eff, pc);
        o.rates = rate_pair_reduced(o.B, eff, pc);
        o.value = o.p_relay;
        const SnrPair s = snr_pair_reduced(o.B, eff, pc);
        if (s.gamma1 < gamma1_bar * (1.0 - 1e-9) || s.gamma2 < gamma2_bar * (1.0 - 1e-9)) return std::nullopt;
        return o;
      },
      threads);
  std::optional<OracleResult> best;
  for (const auto& o : runs)
    if (o && (!best || o->value < best->value)) best = o;
  return best;
}

}  // namespace twrc
