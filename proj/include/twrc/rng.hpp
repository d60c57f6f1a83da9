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

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace twrc {

/**
 * Seedable generator for channel draws.
 *
 * Engine: std::mt19937_64 (bit-exact across conforming standard libraries). Uniforms use the top
 * 53 bits of each draw: u = (x >> 11) * 2^-53 in [0, 1). Circularly symmetric complex Gaussian
 * samples CN(0, 1) use Box-Muller on two consecutive uniforms u1, u2:
 *   z = sqrt(-ln(1 - u1)) * exp(i 2 pi u2),
 * so E|z|^2 = 1 and the real and imaginary parts are independent N(0, 1/2).
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::complex<double> cscg() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-std::log1p(-u1));
    const double phase = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(phase), radius * std::sin(phase)};
  }

  Eigen::VectorXcd cscg_vector(Eigen::Index n) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cscg();
    return v;
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace twrc
