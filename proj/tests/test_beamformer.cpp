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

#include <catch2/catch_amalgamated.hpp>

#include "twrc/beamformer.hpp"
#include "twrc/rng.hpp"

using namespace twrc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

EffectiveChannel unit_frame() {
  EffectiveChannel eff;
  eff.U = ComplexMatrix::Identity(2, 2);
  eff.sigma << 1.0, 1.0;
  eff.V = Mat2c::Identity();
  eff.g1 = Vec2c(1.0, 0.0);
  eff.g2 = Vec2c(0.0, 1.0);
  return eff;
}

ChannelPair orthogonal_pair() {
  ComplexVector e1 = ComplexVector::Zero(2), e2 = ComplexVector::Zero(2);
  e1(0) = 1.0;
  e2(1) = 1.0;
  return ChannelPair(e1, e2, 0.0);
}

Mat4c diag4(double a, double b, double c, double d) {
  return Eigen::Vector4d(a, b, c, d).cast<cd>().asDiagonal();
}

double bits(double snr) { return half_log2_1p(snr); }

}  // namespace

TEST_CASE("row-stacking vectorization") {
  Mat2c B;
  B << 1.0, 2.0, 3.0, 4.0;
  const Vec4c b = vec_rows(B);
  CHECK(b == Vec4c(1.0, 2.0, 3.0, 4.0));
  CHECK(unvec_rows(b) == B);
}

TEST_CASE("constraint matrices for the unit frame") {
  const EffectiveChannel eff = unit_frame();
  const QcqpBuild a = build_qcqp(eff, {1.0, 1.0, 10.0}, 1.0, 1.0);
  CHECK(max_abs(a.E1 - diag4(-1, 0, 0, 0)) <= 1e-15);
  const QcqpBuild b = build_qcqp(eff, {1.0, 4.0, 10.0}, 1.0, 1.0);
  CHECK(max_abs(b.E1 - diag4(-1, 3, 0, 0)) <= 1e-15);
  CHECK(b.prob.n() == 8);
  CHECK(b.prob.m() == 2);
  CHECK(build_qcqp(eff, {1.0, 4.0, 10.0}, 0.0, 1.0).prob.m() == 1);
  CHECK_THROWS_AS(build_qcqp(eff, {1.0, 4.0, 10.0}, -1.0, 1.0), InvalidInput);
}

TEST_CASE("quadratic forms agree with the direct expressions") {
  Rng rng(201);
  for (int trial = 0; trial < 50; ++trial) {
    const ChannelPair pair = gen_channels(2 + trial % 4, rng.uniform(), 300 + static_cast<std::uint64_t>(trial));
    const EffectiveChannel eff = effective(pair);
    const PowerConfig pc{rng.uniform(0.1, 20.0), rng.uniform(0.1, 20.0), 10.0};
    const double g1 = rng.uniform(0.1, 5.0), g2 = rng.uniform(0.1, 5.0);
    const QcqpBuild q = build_qcqp(eff, pc, g1, g2);
    Mat2c B;
    for (int i = 0; i < 4; ++i) B(i / 2, i % 2) = rng.cscg();
    const Vec4c b = vec_rows(B);
    const RealVector x = stack_real(b);

    CHECK_THAT((b.adjoint() * q.E0 * b)(0).real(), WithinRel(relay_power_reduced(B, eff, pc), 1e-10));
    CHECK_THAT(x.dot(q.prob.F0 * x), WithinRel(relay_power_reduced(B, eff, pc), 1e-10));
    CHECK(max_abs(q.Phi * q.Phi - q.E0) <= 1e-10 * (1.0 + max_abs(q.E0)));
    CHECK_THAT(std::abs((q.f1.transpose() * b)(0) - (eff.g1.transpose() * B * eff.g2)(0)), WithinAbs(0.0, 1e-12));
    CHECK_THAT((q.G1 * b).norm(), WithinRel((B.adjoint() * eff.g1.conjugate()).norm(), 1e-12));

    const SnrPair s = snr_pair_reduced(B, eff, pc);
    // b^H E1 b >= 1 exactly when gamma1 >= g1 (up to the positive factor 1 + ||B^H g1*||^2)
    const double form1 = x.dot(q.prob.constraints[0] * x);
    const double noise1 = 1.0 + (q.G1 * b).squaredNorm();
    CHECK_THAT(form1, WithinAbs(noise1 * s.gamma1 / g1 - (noise1 - 1.0), 1e-9 * (1.0 + std::abs(form1))));
    const double form2 = x.dot(q.prob.constraints[1] * x);
    const double noise2 = 1.0 + (q.G2 * b).squaredNorm();
    CHECK_THAT(form2, WithinAbs(noise2 * s.gamma2 / g2 - (noise2 - 1.0), 1e-9 * (1.0 + std::abs(form2))));

    // Hermitian form vs its real embedding
    Mat4c E;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) E(i, j) = rng.cscg();
    E = (E + E.adjoint()).eval();
    CHECK_THAT(x.dot(real_embedding(E) * x), WithinAbs((b.adjoint() * E * b)(0).real(), 1e-10));
  }
}

TEST_CASE("minimum relay power examples") {
  const EffectiveChannel eff = unit_frame();
  const MinPowerResult r = min_relay_power(eff, {4.0, 4.0, 10.0}, 2.0, 2.0);
  REQUIRE(r.status == SdpStatus::optimal);
  CHECK_THAT(r.p_star, WithinRel(10.0, 1e-7));
  REQUIRE(r.B.has_value());
  const Mat2c& B = *r.B;
  CHECK(std::abs(B(0, 0)) <= 1e-4);
  CHECK(std::abs(B(1, 1)) <= 1e-4);
  CHECK_THAT(std::abs(B(0, 1)), WithinAbs(1.0, 1e-4));
  CHECK_THAT(std::abs(B(1, 0)), WithinAbs(1.0, 1e-4));

  const MinPowerResult zero = min_relay_power(eff, {4.0, 4.0, 10.0}, 0.0, 0.0);
  CHECK(zero.p_star == 0.0);
  CHECK(zero.B->isZero());

  const MinPowerResult none = min_relay_power(eff, {4.0, 1.0, 10.0}, 1.0, 0.0);
  CHECK(none.status == SdpStatus::infeasible);
  CHECK(std::isinf(none.p_star));
  CHECK_FALSE(none.B.has_value());
}

TEST_CASE("minimum power matches the closed form on orthogonal channels") {
  Rng rng(203);
  const EffectiveChannel eff = unit_frame();
  for (int trial = 0; trial < 30; ++trial) {
    const double p1 = rng.uniform(1.0, 20.0), p2 = rng.uniform(1.0, 20.0);
    const double g1 = rng.uniform(0.05, 0.95) * p2, g2 = rng.uniform(0.05, 0.95) * p1;
    const double c2 = g1 / (p2 - g1), d2 = g2 / (p1 - g2);
    const double expected = d2 * (p1 + 1.0) + c2 * (p2 + 1.0);
    const MinPowerResult r = min_relay_power(eff, {p1, p2, 1.0}, g1, g2);
    REQUIRE(r.status == SdpStatus::optimal);
    CHECK_THAT(r.p_star, WithinRel(expected, 1e-7));
  }
}

TEST_CASE("returned beamformer meets its targets at the reported power") {
  Rng rng(205);
  for (int trial = 0; trial < 100; ++trial) {
    const ChannelPair pair = gen_channels(2 + trial % 3, rng.uniform(), 400 + static_cast<std::uint64_t>(trial));
    const EffectiveChannel eff = effective(pair);
    const PowerConfig pc{rng.uniform(1.0, 20.0), rng.uniform(1.0, 20.0), 10.0};
    const double g1 = rng.uniform(0.05, 0.9) * pc.p2 * eff.theta1() * eff.theta2();
    const double g2 = rng.uniform(0.05, 0.9) * pc.p1 * eff.theta1() * eff.theta2();
    const MinPowerResult r = min_relay_power(eff, pc, g1, g2);
    if (r.status == SdpStatus::infeasible) continue;
    REQUIRE(r.B.has_value());
    const RatePair rates = rate_pair_reduced(*r.B, eff, pc);
    CHECK(rates.r21 >= bits(g1) - 1e-6);
    CHECK(rates.r12 >= bits(g2) - 1e-6);
    CHECK_THAT(relay_power_reduced(*r.B, eff, pc), WithinRel(r.p_star, 1e-6));
    // lifting to the antenna domain keeps rates and power
    const Beamformer bf{*r.B, eff.U};
    const ComplexMatrix A = bf.lift();
    CHECK_THAT(relay_power(A, pair, pc), WithinRel(r.p_star, 1e-6));
    CHECK_THAT(rate_pair(A, pair, pc).r21, WithinAbs(rates.r21, 1e-9));
  }
}

TEST_CASE("minimum power is monotone in each target") {
  Rng rng(207);
  for (int trial = 0; trial < 20; ++trial) {
    const EffectiveChannel eff = effective(gen_channels(4, rng.uniform(), 500 + static_cast<std::uint64_t>(trial)));
    const PowerConfig pc{10.0, 10.0, 10.0};
    const double g1 = rng.uniform(0.1, 3.0), g2 = rng.uniform(0.1, 3.0);
    const double base = min_relay_power(eff, pc, g1, g2).p_star;
    const double up1 = min_relay_power(eff, pc, g1 * rng.uniform(1.0, 2.0), g2).p_star;
    const double up2 = min_relay_power(eff, pc, g1, g2 * rng.uniform(1.0, 2.0)).p_star;
    CHECK(up1 >= base * (1.0 - 1e-7));
    CHECK(up2 >= base * (1.0 - 1e-7));
  }
}

TEST_CASE("sum rate on orthogonal channels") {
  const ChannelPair pair = orthogonal_pair();
  const EffectiveChannel eff = effective(pair);
  const PowerConfig pc{4.0, 4.0, 10.0};
  const double delta = 1e-6;
  const SumRateResult r = max_sum_rate(eff, pc, RateProfile{}, delta);
  CHECK_THAT(r.R_sum, WithinAbs(std::log2(3.0), 2.0 * delta));
  CHECK(r.R_sum <= std::log2(3.0) + 1e-9);
  CHECK_THAT(r.rates.r21, WithinAbs(0.5 * std::log2(3.0), 2.0 * delta));
  CHECK_THAT(r.rates.r12, WithinAbs(0.5 * std::log2(3.0), 2.0 * delta));
  CHECK(r.p_relay <= pc.P_R * (1.0 + 1e-7));
  CHECK_THAT(r.upper, WithinRel(c_ub0(pc, 1.0, 1.0), 1e-15));
  CHECK(check_bisection_contract(eff, pc, RateProfile{}, r.R_sum, delta).ok());

  CHECK(max_sum_rate(eff, {4.0, 4.0, 0.0}, RateProfile{}).R_sum == 0.0);
  CHECK_THROWS_AS(max_sum_rate(eff, pc, RateProfile{}, 0.0), InvalidInput);
  CHECK_THROWS_AS(max_sum_rate(eff, pc, RateProfile{0.7, 0.7}), InvalidInput);
}

TEST_CASE("single-direction profile reduces to the one-way capacity") {
  const double delta = 1e-6;
  SECTION("uncorrelated channels") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
      const ChannelPair pair = gen_channels(4, 0.0, seed);
      const EffectiveChannel eff = effective(pair);
      const PowerConfig pc{10.0, 10.0, 10.0};
      const double expected = c21(1.0, pc.P_R, eff.theta1(), eff.theta2(), pc.p2);
      const SumRateResult r = max_sum_rate(eff, pc, RateProfile{1.0, 0.0}, delta);
      CHECK_THAT(r.R_sum, WithinAbs(expected, 2.0 * delta));
    }
  }
  SECTION("silent S1") {
    for (double rho : {0.3, 0.7}) {
      const ChannelPair pair = gen_channels(3, rho, 21);
      const EffectiveChannel eff = effective(pair);
      const PowerConfig pc{0.0, 10.0, 10.0};
      const double expected = c21(1.0, pc.P_R, eff.theta1(), eff.theta2(), pc.p2);
      CHECK_THAT(max_sum_rate(eff, pc, RateProfile{1.0, 0.0}, delta).R_sum, WithinAbs(expected, 2.0 * delta));
    }
  }
  SECTION("interfering S1 can only lower the rate") {
    for (double rho : {0.3, 0.7}) {
      const ChannelPair pair = gen_channels(3, rho, 22);
      const EffectiveChannel eff = effective(pair);
      const PowerConfig pc{10.0, 10.0, 10.0};
      const double cap = c21(1.0, pc.P_R, eff.theta1(), eff.theta2(), pc.p2);
      CHECK(max_sum_rate(eff, pc, RateProfile{1.0, 0.0}, delta).R_sum <= cap + 1e-9);
    }
  }
}

TEST_CASE("bisection contract on random instances") {
  Rng rng(209);
  for (int trial = 0; trial < 12; ++trial) {
    const ChannelPair pair = gen_channels(2 + trial % 3, rng.uniform(), 600 + static_cast<std::uint64_t>(trial));
    const EffectiveChannel eff = effective(pair);
    const PowerConfig pc{rng.uniform(1.0, 20.0), rng.uniform(1.0, 20.0), rng.uniform(1.0, 20.0)};
    const RateProfile prof = RateProfile::from_alpha21(rng.uniform());
    const double delta = 1e-4;
    const SumRateResult r = max_sum_rate(eff, pc, prof, delta);
    CHECK(check_bisection_contract(eff, pc, prof, r.R_sum, delta).ok());
    CHECK(r.R_sum <= c_ub0(pc, eff.theta1(), eff.theta2()) + 1e-9);
    CHECK(r.rates.r21 >= prof.alpha21 * r.R_sum - 1e-6);
    CHECK(r.rates.r12 >= prof.alpha12 * r.R_sum - 1e-6);
    CHECK(r.p_relay <= pc.P_R * (1.0 + 1e-6));
  }
}

TEST_CASE("region boundary examples") {
  SECTION("orthogonal instance passes through the equal-rate point") {
    const EffectiveChannel eff = effective(orthogonal_pair());
    const RegionBoundary b = rate_region_boundary(eff, {4.0, 4.0, 10.0}, 5, 1e-6);
    REQUIRE(b.points.size() == 5);
    CHECK_THAT(b.points[2].rates.r21, WithinAbs(0.5 * std::log2(3.0), 1e-6));
    CHECK_THAT(b.points[2].rates.r12, WithinAbs(0.5 * std::log2(3.0), 1e-6));
    CHECK(b.is_pareto(1e-6));
    CHECK(b.points.front().rates.r21 == 0.0);
    CHECK(b.points.back().rates.r12 == 0.0);
  }
  SECTION("silent S1 collapses onto the r21 axis") {
    const EffectiveChannel eff = effective(gen_channels(4, 0.5, 31));
    const RegionBoundary b = rate_region_boundary(eff, {0.0, 10.0, 10.0}, 9);
    for (const auto& p : b.points) CHECK(p.rates.r12 == 0.0);
    CHECK(b.points.back().rates.r21 > 0.5);
  }
  SECTION("symmetric instance is symmetric under swapping the directions") {
    const ChannelPair pair = gen_channels(4, 0.5, 32);
    const EffectiveChannel eff = effective(pair);
    const RegionBoundary b = rate_region_boundary(eff, {10.0, 10.0, 10.0}, 9);
    const EffectiveChannel swapped = effective(ChannelPair(pair.h2(), pair.h1()));
    const RegionBoundary s = rate_region_boundary(swapped, {10.0, 10.0, 10.0}, 9);
    for (std::size_t i = 0; i < b.points.size(); ++i) {
      CHECK_THAT(b.points[i].rates.r21, WithinAbs(b.points[b.points.size() - 1 - i].rates.r12, 1e-3));
      CHECK_THAT(b.points[i].rates.r21, WithinAbs(s.points[s.points.size() - 1 - i].rates.r12, 1e-3));
    }
  }
  SECTION("thread count does not change the output") {
    const EffectiveChannel eff = effective(gen_channels(3, 0.4, 33));
    const RegionBoundary a = rate_region_boundary(eff, {5.0, 8.0, 10.0}, 7, 1e-4, 1);
    const RegionBoundary b = rate_region_boundary(eff, {5.0, 8.0, 10.0}, 7, 1e-4, 4);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
      CHECK(a.points[i].rates.r21 == b.points[i].rates.r21);
      CHECK(a.points[i].rates.r12 == b.points[i].rates.r12);
      CHECK(a.points[i].B == b.points[i].B);
    }
  }
  CHECK_THROWS_AS(uniform_profiles(1), InvalidInput);
}

TEST_CASE("power grid") {
  CHECK(power_grid(10.0, 1) == std::vector<double>{10.0});
  CHECK(power_grid(0.0, 5) == std::vector<double>{0.0});
  const std::vector<double> g = power_grid(100.0, 3);
  REQUIRE(g.size() == 3);
  CHECK_THAT(g[0], WithinRel(1.0, 1e-14));
  CHECK_THAT(g[1], WithinRel(10.0, 1e-14));
  CHECK(g[2] == 100.0);
  CHECK_THROWS_AS(power_grid(10.0, 0), InvalidInput);
  CHECK_THROWS_AS(power_grid(-1.0, 2), InvalidInput);
}

TEST_CASE("capacity region") {
  const ChannelPair pair = gen_channels(4, 0.5, 41);
  const EffectiveChannel eff = effective(pair);
  SECTION("a single grid point is the achievable region at full power") {
    const RegionBoundary c = capacity_region(pair, 10.0, 10.0, 10.0, 1, 9);
    const RegionBoundary r = pareto_envelope(rate_region_boundary(eff, {10.0, 10.0, 10.0}, 9).points);
    REQUIRE(c.points.size() == r.points.size());
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      CHECK(c.points[i].rates.r21 == r.points[i].rates.r21);
      CHECK(c.points[i].rates.r12 == r.points[i].rates.r12);
    }
  }
  SECTION("a finer grid never shrinks the envelope") {
    const RegionBoundary coarse = capacity_region(pair, std::vector<double>{10.0}, std::vector<double>{10.0}, 10.0, 9);
    const RegionBoundary fine = capacity_region(pair, std::vector<double>{1.0, 10.0}, std::vector<double>{1.0, 10.0}, 10.0, 9);
    CHECK(fine.is_pareto());
    for (const auto& p : coarse.points) CHECK(fine.r12_at(p.rates.r21) >= p.rates.r12);
  }
  SECTION("symmetric setting") {
    const RegionBoundary c = capacity_region(pair, 10.0, 10.0, 10.0, 2, 9);
    // every point reflected across r21 = r12 is dominated by the envelope within 1e-3
    for (const auto& p : c.points) CHECK(c.r12_at(p.rates.r12 - 1e-3) >= p.rates.r21 - 1e-3);
  }
}
