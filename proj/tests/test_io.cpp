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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "twrc/io.hpp"

using namespace twrc;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("shortest round-trip formatting") {
  CHECK(fmt(0.1) == "0.1");
  CHECK(fmt(1.0) == "1");
  CHECK(fmt(-2.5e-300) == "-2.5e-300");
  for (double v : {1.0 / 3.0, 2.0 / 7.0, 1e-17, 123456789.123}) CHECK(std::stod(fmt(v)) == v);
}

TEST_CASE("channel JSON round trip") {
  const ChannelPair pair = gen_channels(4, 0.5, 42);
  const ChannelPair back = channel_from_json(json::parse(to_json(pair).dump()));
  CHECK(back.M() == 4);
  CHECK(back.rho() == 0.5);
  CHECK(back.seed() == 42);
  CHECK(back.h1() == pair.h1());
  CHECK(back.h2() == pair.h2());

  json bad = to_json(pair);
  bad["h1_re"] = std::vector<double>{1.0};
  CHECK_THROWS_AS(channel_from_json(bad), InvalidInput);
  CHECK_THROWS_AS(channel_from_json(json::object()), InvalidInput);
}

TEST_CASE("SDP fixture round trip") {
  RealMatrix F0 = RealMatrix::Identity(3, 3);
  RealMatrix F1 = RealMatrix::Zero(3, 3);
  F1(0, 0) = 1.0;
  const SdpProblem prob(F0, std::vector<RealMatrix>{F1});
  const SdpSolution sol = solve_sdp(prob);
  const json j = json::parse(sdp_debug_json(prob, sol).dump());
  CHECK(j["status"] == "optimal");
  const SdpProblem back = sdp_problem_from_json(j);
  CHECK(back.F0 == F0);
  REQUIRE(back.constraints.size() == 1);
  CHECK(back.constraints[0] == F1);
  CHECK_THROWS_AS(matrix_from_json(json::parse("[[1,2],[3]]")), InvalidInput);
}

TEST_CASE("bounds JSON") {
  const json j = to_json(bounds_report({10.0, 10.0, 10.0}, 1.0, 1.0, 1.0));
  CHECK(j["r_lb_zf"].is_null());
  CHECK(j["c_ub_sym"].is_number());
  CHECK(j.contains("kappa21_star"));
}

TEST_CASE("region CSV layout") {
  RegionBoundary r;
  BoundaryPoint p;
  p.alpha21 = 0.5;
  p.rates = {0.25, 0.75};
  p.p1 = 10.0;
  p.p2 = 4.0;
  p.B << cd(1, 5), cd(2, 6), cd(3, 7), cd(4, 8);
  p.p_relay = 9.5;
  r.points.push_back(p);
  const std::string csv = region_csv(r);
  CHECK(csv == region_csv_header() + "\n0.5,0.25,0.75,10,4,1,2,3,4,5,6,7,8,9.5\n");
  CHECK(scheme_region_csv("mr", r) == "scheme," + region_csv_header() + "\nmr,0.5,0.25,0.75,10,4,1,2,3,4,5,6,7,8,9.5\n");
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(tau_csv({{0.5, {1.0, 2.0}}}) == "tau,r21,r12\n0.5,1,2\n");
}

TEST_CASE("atomic write replaces the target") {
  const auto dir = std::filesystem::temp_directory_path() / "twrc_io_test";
  std::filesystem::create_directories(dir);
  const auto target = dir / "out.csv";
  write_atomic(target, "first\n");
  write_atomic(target, "second\n");
  CHECK(slurp(target) == "second\n");
  CHECK_FALSE(std::filesystem::exists(dir / "out.csv.tmp"));
  CHECK_THROWS(write_atomic(dir / "missing" / "x.csv", "x"));
  std::filesystem::remove_all(dir);
}
