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
 * @file region.hpp
 * @brief Rate-region boundaries and their Pareto envelopes.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "twrc/channel.hpp"

namespace twrc {

/// One boundary sample. alpha21 is NaN for points that do not come from a rate profile.
struct BoundaryPoint {
  RatePair rates;
  double alpha21 = std::numeric_limits<double>::quiet_NaN();
  double p1 = 0.0;
  double p2 = 0.0;
  Mat2c B = Mat2c::Zero();
  double p_relay = 0.0;
};

/// Boundary points ordered by increasing r21.
struct RegionBoundary {
  std::vector<BoundaryPoint> points;

  /// r12 is non-increasing along the list (up to tol) and r21 non-decreasing.
  bool is_pareto(double tol = 0.0) const {
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (points[i].rates.r21 < points[i - 1].rates.r21 - tol) return false;
      if (points[i].rates.r12 > points[i - 1].rates.r12 + tol) return false;
    }
    return true;
  }

  /// Largest r12 among points with r21 at least the given value (the staircase the points dominate).
  double r12_at(double r21) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : points)
      if (p.rates.r21 >= r21) best = std::max(best, p.rates.r12);
    return best;
  }

  double max_sum() const {
    double best = 0.0;
    for (const auto& p : points) best = std::max(best, p.rates.sum());
    return best;
  }
};

/**
 * Pareto frontier of a point set: sort by r21 descending (ties: larger r12 first), keep each point
 * whose r12 strictly exceeds everything kept so far, then return in increasing r21.
 */
inline RegionBoundary pareto_envelope(std::vector<BoundaryPoint> pts) {
  std::stable_sort(pts.begin(), pts.end(), [](const BoundaryPoint& a, const BoundaryPoint& b) {
    if (a.rates.r21 != b.rates.r21) return a.rates.r21 > b.rates.r21;
    return a.rates.r12 > b.rates.r12;
  });
  RegionBoundary out;
  double best = -std::numeric_limits<double>::infinity();
  for (auto& p : pts) {
    if (p.rates.r12 > best) {
      best = p.rates.r12;
      out.points.push_back(std::move(p));
    }
  }
  std::reverse(out.points.begin(), out.points.end());
  return out;
}

/// Pareto frontier of the union of several boundaries.
inline RegionBoundary union_envelope(const std::vector<RegionBoundary>& parts) {
  std::vector<BoundaryPoint> all;
  for (const auto& r : parts) all.insert(all.end(), r.points.begin(), r.points.end());
  return pareto_envelope(std::move(all));
}

}  // namespace twrc
