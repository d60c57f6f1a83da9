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
 * @file io.hpp
 * @brief JSON fixtures, CSV writers and atomic file output.
 *
 * CSV: '.' decimal, LF endings, header row first, doubles in shortest round-trip form.
 */

#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "twrc/bounds.hpp"
#include "twrc/channel.hpp"
#include "twrc/df.hpp"
#include "twrc/errors.hpp"
#include "twrc/region.hpp"
#include "twrc/sdp.hpp"

#define TWRC_VERSION "1.0.0"

namespace twrc {

using json = nlohmann::json;

/// Shortest decimal form that parses back to the same double.
inline std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline json to_json(const ChannelPair& pair) {
  json j;
  j["M"] = pair.M();
  j["rho"] = pair.rho();
  j["seed"] = pair.seed();
  std::vector<double> h1r, h1i, h2r, h2i;
  for (Eigen::Index i = 0; i < pair.M(); ++i) {
    h1r.push_back(pair.h1()(i).real());
    h1i.push_back(pair.h1()(i).imag());
    h2r.push_back(pair.h2()(i).real());
    h2i.push_back(pair.h2()(i).imag());
  }
  j["h1_re"] = h1r;
  j["h1_im"] = h1i;
  j["h2_re"] = h2r;
  j["h2_im"] = h2i;
  return j;
}

inline ChannelPair channel_from_json(const json& j) {
  try {
    const auto M = j.at("M").get<Eigen::Index>();
    auto read = [&](const char* re, const char* im) {
      const auto r = j.at(re).get<std::vector<double>>();
      const auto i = j.at(im).get<std::vector<double>>();
      if (static_cast<Eigen::Index>(r.size()) != M || static_cast<Eigen::Index>(i.size()) != M)
        throw InvalidInput("channel JSON: vector length does not match M");
      ComplexVector h(M);
      for (Eigen::Index k = 0; k < M; ++k) h(k) = cd(r[static_cast<std::size_t>(k)], i[static_cast<std::size_t>(k)]);
      return h;
    };
    const double rho = j.contains("rho") && !j["rho"].is_null() ? j["rho"].get<double>() : std::numeric_limits<double>::quiet_NaN();
    const auto seed = j.contains("seed") ? j["seed"].get<std::uint64_t>() : 0;
    return ChannelPair(read("h1_re", "h1_im"), read("h2_re", "h2_im"), rho, seed);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("channel JSON: ") + e.what());
  }
}

inline json matrix_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r;
    for (Eigen::Index k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
    rows.push_back(r);
  }
  return rows;
}

inline RealMatrix matrix_from_json(const json& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  RealMatrix m(n, n == 0 ? 0 : static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != m.cols()) throw InvalidInput("ragged matrix JSON");
    for (Eigen::Index k = 0; k < m.cols(); ++k) m(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
  }
  return m;
}

/// Debug dump of an SDP instance and its solution, for regression fixtures.
inline json sdp_debug_json(const SdpProblem& prob, const SdpSolution& sol) {
  json j;
  j["F0"] = matrix_json(prob.F0);
  json cons = json::array();
  for (const auto& F : prob.constraints) cons.push_back(matrix_json(F));
  j["constraints"] = cons;
  j["status"] = to_string(sol.status);
  j["objective"] = sol.objective;
  if (sol.X.size() > 0) j["X"] = matrix_json(sol.X);
  if (sol.x_hat) j["x_hat"] = std::vector<double>(sol.x_hat->data(), sol.x_hat->data() + sol.x_hat->size());
  return j;
}

inline SdpProblem sdp_problem_from_json(const json& j) {
  SdpProblem p;
  p.F0 = matrix_from_json(j.at("F0"));
  for (const auto& F : j.at("constraints")) p.constraints.push_back(matrix_from_json(F));
  return p;
}

inline json to_json(const BoundsReport& r) {
  json j;
  j["c21"] = r.c21;
  j["c12"] = r.c12;
  j["c_ub"] = r.c_ub;
  j["c_ub0"] = r.c_ub0;
  j["c_ub_sym"] = r.c_ub_sym ? json(*r.c_ub_sym) : json(nullptr);
  j["r_lb_mr"] = r.r_lb_mr;
  j["r_lb_zf"] = r.r_lb_zf ? json(*r.r_lb_zf) : json(nullptr);
  j["kappa21_star"] = r.kappa21_star;
  j["p21_star"] = r.p21_star;
  return j;
}

/// Write via a temporary file in the same directory, then rename over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
}

inline const std::string& region_csv_header() {
  static const std::string h =
      "alpha21,r21,r12,p1,p2,B_re0,B_re1,B_re2,B_re3,B_im0,B_im1,B_im2,B_im3,p_relay";
  return h;
}

inline void append_region_row(std::ostringstream& os, const BoundaryPoint& p) {
  os << fmt(p.alpha21) << ',' << fmt(p.rates.r21) << ',' << fmt(p.rates.r12) << ',' << fmt(p.p1) << ',' << fmt(p.p2);
  const cd b[4] = {p.B(0, 0), p.B(0, 1), p.B(1, 0), p.B(1, 1)};
  for (const cd& v : b) os << ',' << fmt(v.real());
  for (const cd& v : b) os << ',' << fmt(v.imag());
  os << ',' << fmt(p.p_relay) << '\n';
}

/// Boundary CSV; B entries in row-stacked order (B11, B12, B21, B22).
inline std::string region_csv(const RegionBoundary& r) {
  std::ostringstream os;
  os << region_csv_header() << '\n';
  for (const auto& p : r.points) append_region_row(os, p);
  return os.str();
}

/// Boundary CSV with a leading scheme column.
inline std::string scheme_region_csv(const std::string& scheme, const RegionBoundary& r) {
  std::ostringstream os;
  os << "scheme," << region_csv_header() << '\n';
  for (const auto& p : r.points) {
    os << scheme << ',';
    append_region_row(os, p);
  }
  return os.str();
}

/// tau,r21,r12 rows; a NaN tau marks rows that belong to no single tau (envelopes, BC/MAC sets).
inline std::string tau_csv(const std::vector<std::pair<double, RatePair>>& rows) {
  std::ostringstream os;
  os << "tau,r21,r12\n";
  for (const auto& [t, r] : rows) os << fmt(t) << ',' << fmt(r.r21) << ',' << fmt(r.r12) << '\n';
  return os.str();
}

}  // namespace twrc
