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

#include <Eigen/QR>

#include "twrc/beamformer.hpp"
#include "twrc/rng.hpp"
#include "twrc/sdp.hpp"

using namespace twrc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

RealMatrix diag(std::initializer_list<double> d) {
  RealVector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

RealMatrix random_orthogonal(Rng& rng, Eigen::Index n) {
  RealMatrix G(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) G(i, j) = rng.uniform(-1.0, 1.0);
  return Eigen::HouseholderQR<RealMatrix>(G).householderQ();
}

// min c.x s.t. a.x >= 1, b.x >= 1, x >= 0. Basic solutions have at most two nonzeros.
double diagonal_lp(const RealVector& c, const RealVector& a, const RealVector& b) {
  double best = std::numeric_limits<double>::infinity();
  const Eigen::Index n = c.size();
  auto consider = [&](const RealVector& x) {
    if ((x.array() < -1e-14).any()) return;
    if (a.dot(x) < 1.0 - 1e-12 || b.dot(x) < 1.0 - 1e-12) return;
    best = std::min(best, c.dot(x));
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    RealVector x = RealVector::Zero(n);
    const double need = std::max(a(i) > 0.0 ? 1.0 / a(i) : std::numeric_limits<double>::infinity(),
                                 b(i) > 0.0 ? 1.0 / b(i) : std::numeric_limits<double>::infinity());
    if (std::isfinite(need)) {
      x(i) = need;
      consider(x);
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double det = a(i) * b(j) - a(j) * b(i);
      if (std::abs(det) < 1e-14) continue;
      RealVector y = RealVector::Zero(n);
      y(i) = (b(j) - a(j)) / det;
      y(j) = (a(i) - b(i)) / det;
      consider(y);
    }
  }
  return best;
}

SdpProblem relay_problem(const ChannelPair& pair, double p1, double p2, double g1, double g2) {
  return build_qcqp(effective(pair), {p1, p2, 1.0}, g1, g2).prob;
}

}  // namespace

TEST_CASE("identity problem collapses to tr(X) >= 1") {
  const RealMatrix I = RealMatrix::Identity(8, 8);
  const SdpProblem prob(I, I, I);
  const SdpSolution sol = solve_sdp(prob);
  REQUIRE(sol.status == SdpStatus::optimal);
  CHECK_THAT(sol.objective, WithinAbs(1.0, 1e-8));
  const RealVector x = extract_rank_one(sol, prob);
  CHECK_THAT(x.squaredNorm(), WithinAbs(1.0, 1e-8));
}

TEST_CASE("diagonal problem attains its axis-aligned optimum") {
  const SdpProblem prob(diag({2, 1, 1, 1, 1, 1, 1, 1}), diag({1, 1, 0, 0, 0, 0, 0, 0}), diag({0, 1, 0, 0, 0, 0, 0, 0}));
  const SdpSolution sol = solve_sdp(prob);
  REQUIRE(sol.status == SdpStatus::optimal);
  CHECK_THAT(sol.objective, WithinAbs(1.0, 1e-8));
  RealMatrix expected = RealMatrix::Zero(8, 8);
  expected(1, 1) = 1.0;
  CHECK(max_abs(sol.X - expected) <= 1e-6);
  const RealVector x = extract_rank_one(sol, prob);
  CHECK_THAT(std::abs(x(1)), WithinAbs(1.0, 1e-6));
}

TEST_CASE("negative-definite constraint is infeasible with a certificate") {
  const RealMatrix I = RealMatrix::Identity(8, 8);
  const SdpProblem prob(I, -I, I);
  const SdpSolution sol = solve_sdp(prob);
  CHECK(sol.status == SdpStatus::infeasible);
  CHECK(sol.certificate_value <= 0.0);
  CHECK_FALSE(sol.message.empty());
  // certificate: the weighted constraint combination has no positive direction
  RealMatrix comb = RealMatrix::Zero(8, 8);
  for (std::size_t i = 0; i < prob.m(); ++i)
    comb += sol.certificate_weights(static_cast<Eigen::Index>(i)) * prob.constraints[i] / prob.constraints[i].norm();
  CHECK(eig_sym(comb).values(0) <= 1e-12);
  CHECK(sol.certificate_weights.minCoeff() >= 0.0);
  CHECK_THAT(sol.certificate_weights.sum(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("two individually feasible constraints can be jointly infeasible") {
  const SdpProblem prob(RealMatrix::Identity(2, 2), diag({1, -1}), diag({-1, 1}));
  CHECK(solve_sdp(prob).status == SdpStatus::infeasible);
  const SdpProblem ok(RealMatrix::Identity(2, 2), diag({1, -0.5}), diag({-0.5, 1}));
  const SdpSolution sol = solve_sdp(ok);
  REQUIRE(sol.status == SdpStatus::optimal);
  CHECK_THAT(sol.objective, WithinRel(4.0, 1e-8));  // x1 = x2 = 2
}

TEST_CASE("input validation") {
  const RealMatrix I = RealMatrix::Identity(4, 4);
  RealMatrix asym = I;
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(solve_sdp(SdpProblem(I, asym, I)), InvalidInput);
  CHECK_THROWS_AS(solve_sdp(SdpProblem(-I, I, I)), InvalidInput);
  const RealMatrix big = RealMatrix::Identity(33, 33);
  CHECK_THROWS_AS(solve_sdp(SdpProblem(big, big, big)), InvalidInput);
  CHECK_THROWS_AS(solve_sdp(SdpProblem(I, RealMatrix::Identity(3, 3), I)), InvalidInput);
}

TEST_CASE("rotated diagonal problems match vertex enumeration") {
  Rng rng(101);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + trial % 7;
    RealVector c(n), a(n), b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      c(i) = rng.uniform(0.1, 3.0);
      a(i) = rng.uniform(-1.0, 2.0);
      b(i) = rng.uniform(-1.0, 2.0);
    }
    const double expected = diagonal_lp(c, a, b);
    const RealMatrix Q = random_orthogonal(rng, n);
    const SdpProblem prob(Q * c.asDiagonal() * Q.transpose(), Q * a.asDiagonal() * Q.transpose(),
                          Q * b.asDiagonal() * Q.transpose());
    const SdpSolution sol = solve_sdp(prob);
    if (!std::isfinite(expected)) {
      CHECK(sol.status == SdpStatus::infeasible);
      continue;
    }
    REQUIRE(sol.status == SdpStatus::optimal);
    CHECK_THAT(sol.objective, WithinRel(expected, 1e-7));
    const RealVector x = extract_rank_one(sol, prob);
    CHECK_THAT(x.dot(prob.F0 * x), WithinRel(sol.objective, 1e-6));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("decompose_wrt examples") {
  const RealMatrix I = RealMatrix::Identity(2, 2);
  const RealMatrix M = diag({1, -1});
  const std::vector<RealVector> parts = decompose_wrt(I, M);
  REQUIRE(parts.size() == 2);
  RealMatrix sum = RealMatrix::Zero(2, 2);
  for (const auto& v : parts) {
    CHECK_THAT(v.dot(M * v), WithinAbs(0.0, 1e-15));
    CHECK_THAT(std::abs(v(0)), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
    CHECK_THAT(std::abs(v(1)), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
    sum += v * v.transpose();
  }
  CHECK(max_abs(sum - I) <= 1e-15);
  CHECK(parts[0].dot(parts[1]) == Catch::Approx(0.0).margin(1e-15));

  RealVector v(3);
  v << 1.0, -2.0, 0.5;
  const RealMatrix W = diag({1, 1, -3});
  const std::vector<RealVector> one = decompose_wrt(v * v.transpose(), W);
  REQUIRE(one.size() == 1);
  CHECK(std::min((one[0] - v).norm(), (one[0] + v).norm()) <= 1e-12);

  CHECK_THROWS_AS(decompose_wrt(I, diag({-1, -1})), InvalidInput);
}

TEST_CASE("decompose_wrt on random PSD matrices") {
  Rng rng(103);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index n = 2 + trial % 7;
    const Eigen::Index r = 1 + trial % n;
    RealMatrix F(n, r);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < r; ++j) F(i, j) = rng.uniform(-1.0, 1.0);
    const RealMatrix X = F * F.transpose();
    RealMatrix M(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) M(i, j) = rng.uniform(-1.0, 1.0);
    M = (M + M.transpose()).eval();
    double t = (M.array() * X.array()).sum();
    if (t < 0.0) M = (-M).eval();
    const std::vector<RealVector> parts = decompose_wrt(X, M);
    CHECK(static_cast<Eigen::Index>(parts.size()) == r);
    RealMatrix sum = RealMatrix::Zero(n, n);
    for (const auto& v : parts) {
      CHECK(v.dot(M * v) >= -1e-9);
      sum += v * v.transpose();
    }
    CHECK(max_abs(sum - X) <= 1e-8);
  }
}

TEST_CASE("basic LP rule") {
  RealVector y0(2), y1(2);
  y0 << 2, 3;
  y1 << 1, 3;
  BasicLpSolution s = solve_basic_lp(y0, y1);
  CHECK(s.index == 1);
  CHECK_THAT(s.t, WithinAbs(1.0 / 3.0, 1e-15));
  CHECK_THAT(s.cost, WithinAbs(1.0, 1e-15));

  RealVector z0(2), z1(2);
  z0 << 1, 1;
  z1 << 0, -1;
  CHECK_THROWS_AS(solve_basic_lp(z0, z1), NumericalFailure);

  RealVector w0(1), w1(1);
  w0 << 5;
  w1 << 2;
  s = solve_basic_lp(w0, w1);
  CHECK(s.index == 0);
  CHECK_THAT(s.t, WithinAbs(0.5, 1e-15));
  CHECK_THAT(s.cost, WithinAbs(2.5, 1e-15));

  RealVector tie0(2), tie1(2);
  tie0 << 2, 4;
  tie1 << 1, 2;
  CHECK(solve_basic_lp(tie0, tie1).index == 0);
}

TEST_CASE("extract_rank_one examples") {
  RealVector v(4);
  v << 0.5, -1.0, 0.25, 2.0;
  const RealMatrix F0 = RealMatrix::Identity(4, 4);
  const RealMatrix F1 = v * v.transpose() / v.squaredNorm() / v.squaredNorm();
  const SdpProblem prob(F0, F1, F1);
  SdpSolution fake;
  fake.status = SdpStatus::optimal;
  fake.X = v * v.transpose();
  fake.objective = v.squaredNorm();
  const RealVector x = extract_rank_one(fake, prob);
  CHECK(std::min((x - v).norm(), (x + v).norm()) <= 1e-12);

  const RealMatrix I2 = RealMatrix::Identity(2, 2);
  SdpSolution half;
  half.status = SdpStatus::optimal;
  half.X = 0.5 * I2;
  half.objective = 1.0;
  const RealVector u = extract_rank_one(half, SdpProblem(I2, I2, I2));
  CHECK_THAT(u.norm(), WithinAbs(1.0, 1e-12));

  SdpSolution inactive = half;
  inactive.X = I2;
  CHECK_THROWS_AS(extract_rank_one(inactive, SdpProblem(I2, I2, I2)), NumericalFailure);

  SdpSolution failed;
  CHECK_THROWS_AS(extract_rank_one(failed, SdpProblem(I2, I2, I2)), InvalidInput);
}

TEST_CASE("relaxation is exact on random relay instances") {
  Rng rng(107);
  int solved = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double rho = rng.uniform(0.0, 1.0);
    const ChannelPair pair = gen_channels(2 + trial % 5, rho, 5000 + static_cast<std::uint64_t>(trial));
    const double p1 = rng.uniform(0.5, 20.0), p2 = rng.uniform(0.5, 20.0);
    const double g1 = rng.uniform(0.05, 0.9) * p2, g2 = rng.uniform(0.05, 0.9) * p1;
    const SdpProblem prob = relay_problem(pair, p1, p2, g1, g2);
    const SdpSolution sol = solve_sdp(prob);
    if (sol.status == SdpStatus::infeasible) continue;
    REQUIRE(sol.status == SdpStatus::optimal);
    const double t1 = (prob.constraints[0].array() * sol.X.array()).sum();
    const double t2 = (prob.constraints[1].array() * sol.X.array()).sum();
    CHECK(t1 >= 1.0 - 1e-8);
    CHECK(t2 >= 1.0 - 1e-8);
    CHECK_THAT(std::min(t1, t2), WithinAbs(1.0, 1e-6));
    CHECK(eig_sym(0.5 * (sol.X + sol.X.transpose())).values.minCoeff() >= -1e-8);
    const RealVector x = extract_rank_one(sol, prob);
    CHECK_THAT(x.dot(prob.F0 * x), WithinRel(sol.objective, 1e-6));
    CHECK(x.dot(prob.constraints[0] * x) >= 1.0 - 1e-6);
    CHECK(x.dot(prob.constraints[1] * x) >= 1.0 - 1e-6);
    ++solved;
  }
  CHECK(solved > 500);
}

TEST_CASE("scaling the objective scales the optimum") {
  Rng rng(109);
  for (int trial = 0; trial < 20; ++trial) {
    const ChannelPair pair = gen_channels(4, 0.5, 77 + static_cast<std::uint64_t>(trial));
    const SdpProblem prob = relay_problem(pair, 10.0, 10.0, 1.0, 2.0);
    const double c = rng.uniform(0.01, 100.0);
    SdpProblem scaled = prob;
    scaled.F0 *= c;
    const SdpSolution a = solve_sdp(prob), b = solve_sdp(scaled);
    REQUIRE(a.status == SdpStatus::optimal);
    REQUIRE(b.status == SdpStatus::optimal);
    CHECK_THAT(b.objective, WithinRel(c * a.objective, 1e-7));
    CHECK(max_abs(a.X - b.X) <= 1e-5 * (1.0 + max_abs(a.X)));
  }
}

TEST_CASE("zero or one constraint") {
  const RealMatrix I = RealMatrix::Identity(3, 3);
  const SdpSolution none = solve_sdp(SdpProblem(I, std::vector<RealMatrix>{}));
  CHECK(none.status == SdpStatus::optimal);
  CHECK(none.objective == 0.0);
  const SdpProblem single(diag({3, 2, 5}), std::vector<RealMatrix>{diag({1, 1, 1})});
  const SdpSolution one = solve_sdp(single);
  REQUIRE(one.status == SdpStatus::optimal);
  CHECK_THAT(one.objective, WithinRel(2.0, 1e-8));
  const RealVector x = extract_rank_one(one, single);
  CHECK_THAT(std::abs(x(1)), WithinAbs(1.0, 1e-6));
}
