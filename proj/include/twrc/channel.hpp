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
 * @file channel.hpp
 * @brief Channel instances, the reduced two-dimensional coordinate frame, and the basic rate and
 *        relay-power expressions of the analogue-network-coding two-way relay channel.
 *
 * Conventions: every noise variance is 1, so powers are linear SNR-like quantities; rates are in
 * bits per complex dimension (log base 2) and carry the 1/2 factor of the two-slot protocol.
 * Downlink channels are the transposes of the uplink channels (reciprocity).
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "twrc/errors.hpp"
#include "twrc/linalg.hpp"
#include "twrc/rng.hpp"

namespace twrc {

/// Source transmit powers p1, p2 and the relay budget P_R (all linear, noise-normalized).
struct PowerConfig {
  double p1 = 0.0;
  double p2 = 0.0;
  double P_R = 0.0;

  void validate() const {
    auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (!ok(p1) || !ok(p2) || !ok(P_R)) throw InvalidInput("PowerConfig: powers must be finite and >= 0");
  }
};

/// Rate pair in bits per complex dimension: r21 is S2 -> S1, r12 is S1 -> S2.
struct RatePair {
  double r21 = 0.0;
  double r12 = 0.0;

  double sum() const { return r21 + r12; }
};

/// 1/2 log2(1 + snr).
inline double half_log2_1p(double snr) { return 0.5 * std::log1p(snr) / std::numbers::ln2; }

/// The uplink channels h1 (S1 -> R) and h2 (S2 -> R), plus how they were generated.
class ChannelPair {
 public:
  ChannelPair(ComplexVector h1, ComplexVector h2, double rho = std::numeric_limits<double>::quiet_NaN(),
              std::uint64_t seed = 0)
      : h1_(std::move(h1)), h2_(std::move(h2)), rho_(rho), seed_(seed) {
    if (h1_.size() < 2 || h1_.size() != h2_.size())
      throw InvalidInput("ChannelPair: channels must have equal length M >= 2");
    if (!h1_.allFinite() || !h2_.allFinite()) throw InvalidInput("ChannelPair: non-finite channel entry");
    if (!(h1_.norm() > 0.0) || !(h2_.norm() > 0.0)) throw InvalidInput("ChannelPair: zero channel vector");
    if (std::isnan(rho_)) rho_ = correlation();
  }

  Eigen::Index M() const { return h1_.size(); }
  const ComplexVector& h1() const { return h1_; }
  const ComplexVector& h2() const { return h2_; }
  /// Target correlation recorded at construction (the measured one when none was given).
  double rho() const { return rho_; }
  std::uint64_t seed() const { return seed_; }

  double theta1() const { return h1_.squaredNorm(); }
  double theta2() const { return h2_.squaredNorm(); }

  /// |h1^H h2|^2 / (||h1||^2 ||h2||^2).
  double correlation() const {
    return std::norm(h1_.dot(h2_)) / (theta1() * theta2());
  }

  /// H_UL = [h1, h2].
  ComplexMatrix uplink() const {
    ComplexMatrix H(M(), 2);
    H << h1_, h2_;
    return H;
  }

  /// H_DL = [h2, h1]^T.
  ComplexMatrix downlink() const {
    ComplexMatrix H(2, M());
    H.row(0) = h2_.transpose();
    H.row(1) = h1_.transpose();
    return H;
  }

 private:
  ComplexVector h1_;
  ComplexVector h2_;
  double rho_;
  std::uint64_t seed_;
};

/**
 * Draw a channel pair with prescribed correlation.
 *
 * h1 ~ CN(0, I) scaled to unit norm; hw ~ CN(0, I) is orthogonalized against h1 and scaled to
 * unit norm; h2 = sqrt(rho) h1 + sqrt(1 - rho) hw. With normalize = false, h1 keeps its drawn norm
 * and hw is scaled to ||h1|| instead, so ||h2|| = ||h1|| and the correlation is still rho.
 */
inline ChannelPair gen_channels(Eigen::Index M, double rho, std::uint64_t seed, bool normalize = true) {
  if (M < 2) throw InvalidInput("gen_channels: M must be >= 2");
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidInput("gen_channels: rho must lie in [0, 1]");
  Rng rng(seed);
  ComplexVector h1 = rng.cscg_vector(M);
  ComplexVector hw = rng.cscg_vector(M);
  const double n1 = h1.norm();
  const double target = normalize ? 1.0 : n1;
  h1 *= target / n1;
  const ComplexVector u = h1 / h1.norm();
  hw -= u * u.dot(hw);
  hw -= u * u.dot(hw);
  hw *= target / hw.norm();
  ComplexVector h2 = std::sqrt(rho) * h1 + std::sqrt(1.0 - rho) * hw;
  return ChannelPair(std::move(h1), std::move(h2), rho, seed);
}

/// Uplink channels in the 2-D frame U spanning both of them: g_i = U^H h_i.
struct EffectiveChannel {
  ComplexMatrix U;  // M x 2
  Eigen::Vector2d sigma;
  Mat2c V;
  Vec2c g1;
  Vec2c g2;

  double theta1() const { return g1.squaredNorm(); }
  double theta2() const { return g2.squaredNorm(); }
};

inline EffectiveChannel effective(const ChannelPair& pair) {
  TallSvd s = svd_tall(pair.uplink());
  EffectiveChannel eff;
  eff.g1 = s.U.adjoint() * pair.h1();
  eff.g2 = s.U.adjoint() * pair.h2();
  eff.U = std::move(s.U);
  eff.sigma = s.sigma;
  eff.V = s.V;
  return eff;
}

/// A reduced 2 x 2 relay matrix together with the frame it lives in.
struct Beamformer {
  Mat2c B = Mat2c::Zero();
  ComplexMatrix U;

  /// Full relay matrix A = U^* B U^H.
  ComplexMatrix lift() const { return U.conjugate() * B * U.adjoint(); }
};

/// B = U^T A U, the reduced matrix of any A (exact for A of the lifted form).
inline Mat2c reduce(const ComplexMatrix& A, const ComplexMatrix& U) {
  return U.transpose() * A * U;
}

inline void check_dims(const ComplexMatrix& A, const ChannelPair& pair) {
  if (A.rows() != pair.M() || A.cols() != pair.M()) throw InvalidInput("relay matrix must be M x M");
}

/// Relay transmit power ||A h1||^2 p1 + ||A h2||^2 p2 + tr(A A^H).
inline double relay_power(const ComplexMatrix& A, const ChannelPair& pair, const PowerConfig& pc) {
  check_dims(A, pair);
  return (A * pair.h1()).squaredNorm() * pc.p1 + (A * pair.h2()).squaredNorm() * pc.p2 + A.squaredNorm();
}

/// Received SNRs after self-interference cancellation, gamma1 at S1 and gamma2 at S2.
struct SnrPair {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

namespace detail {

template <typename MatA, typename VecH>
SnrPair snrs(const MatA& A, const VecH& h1, const VecH& h2, const PowerConfig& pc) {
  const cd s21 = (h1.transpose() * A * h2)(0);
  const cd s12 = (h2.transpose() * A * h1)(0);
  const double n1 = (A.adjoint() * h1.conjugate()).squaredNorm();
  const double n2 = (A.adjoint() * h2.conjugate()).squaredNorm();
  return {std::norm(s21) * pc.p2 / (n1 + 1.0), std::norm(s12) * pc.p1 / (n2 + 1.0)};
}

inline RatePair rates_from(const SnrPair& s) { return {half_log2_1p(s.gamma1), half_log2_1p(s.gamma2)}; }

}  // namespace detail

inline SnrPair snr_pair(const ComplexMatrix& A, const ChannelPair& pair, const PowerConfig& pc) {
  check_dims(A, pair);
  return detail::snrs(A, pair.h1(), pair.h2(), pc);
}

/// Achievable (r21, r12) of relay matrix A.
inline RatePair rate_pair(const ComplexMatrix& A, const ChannelPair& pair, const PowerConfig& pc) {
  return detail::rates_from(snr_pair(A, pair, pc));
}

inline SnrPair snr_pair_reduced(const Mat2c& B, const EffectiveChannel& eff, const PowerConfig& pc) {
  return detail::snrs(B, eff.g1, eff.g2, pc);
}

inline RatePair rate_pair_reduced(const Mat2c& B, const EffectiveChannel& eff, const PowerConfig& pc) {
  return detail::rates_from(snr_pair_reduced(B, eff, pc));
}

inline RatePair rate_pair_reduced(const Beamformer& bf, const EffectiveChannel& eff, const PowerConfig& pc) {
  return rate_pair_reduced(bf.B, eff, pc);
}

/// ||B g1||^2 p1 + ||B g2||^2 p2 + tr(B B^H).
inline double relay_power_reduced(const Mat2c& B, const EffectiveChannel& eff, const PowerConfig& pc) {
  return (B * eff.g1).squaredNorm() * pc.p1 + (B * eff.g2).squaredNorm() * pc.p2 + B.squaredNorm();
}

}  // namespace twrc
