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

// twrc: command-line front end. Writes region/bound data as CSV plus a JSON manifest.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twrc/twrc.hpp"

namespace fs = std::filesystem;
using namespace twrc;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Linear power, or dB with a "db" suffix (case-insensitive).
double parse_power(const std::string& flag, const std::string& text) {
  std::string s = trim(text);
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  bool db = false;
  if (lower.size() > 2 && lower.compare(lower.size() - 2, 2, "db") == 0) {
    db = true;
    s = trim(s.substr(0, s.size() - 2));
  }
  double v = 0.0;
  std::size_t used = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError(flag + ": '" + text + "' is not a power (expected e.g. 10 or 20db)");
  }
  if (used != s.size()) throw UsageError(flag + ": '" + text + "' is not a power (expected e.g. 10 or 20db)");
  if (db) v = std::pow(10.0, v / 10.0);
  if (!std::isfinite(v) || v < 0.0) throw UsageError(flag + ": power must be finite and >= 0");
  return v;
}

// Append key=value settings from --config files for every key not given as a flag.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::vector<std::string> files;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) files.push_back(args[i + 1]);
    else if (args[i].rfind("--config=", 0) == 0) files.push_back(args[i].substr(9));
  }
  auto given = [&](const std::string& key) {
    for (std::size_t i = 1; i < args.size(); ++i)
      if (args[i] == "--" + key || args[i].rfind("--" + key + "=", 0) == 0) return true;
    return false;
  };
  std::vector<std::string> extra;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw UsageError("--config: cannot read '" + file + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw UsageError("--config: " + file + ":" + std::to_string(lineno) + ": expected key=value");
      std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.rfind("--", 0) == 0) key.erase(0, 2);
      if (key.empty() || key == "config" || given(key)) continue;
      if (value == "true") {
        extra.push_back("--" + key);
      } else if (value != "false") {
        extra.push_back("--" + key);
        extra.push_back(value);
      }
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

struct Channel {
  int m = 4;
  double rho = 0.5;
  std::uint64_t seed = 42;
};

void add_channel_options(CLI::App* sub, Channel& c) {
  sub->add_option("--m", c.m, "relay antennas")->capture_default_str()->check(CLI::Range(2, 64));
  sub->add_option("--rho", c.rho, "channel correlation |h1^H h2|^2 / (||h1||^2 ||h2||^2)")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--seed", c.seed, "channel seed")->capture_default_str();
}

json channel_settings(const Channel& c) { return {{"m", c.m}, {"rho", c.rho}, {"seed", c.seed}}; }

struct Output {
  fs::path dir;
  json manifest;
  std::vector<std::string> files;

  void write(const std::string& name, const std::string& content) {
    write_atomic(dir / name, content);
    files.push_back(name);
  }

  void finish() {
    manifest["outputs"] = files;
    write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
  }
};

Output start_output(const std::string& dir, const std::string& command) {
  Output o;
  o.dir = dir;
  std::error_code ec;
  fs::create_directories(o.dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
  o.manifest["command"] = command;
  o.manifest["version"] = TWRC_VERSION;
  return o;
}

json sdp_settings(const SdpOptions& s) {
  return {{"tol", s.tol}, {"max_iterations", s.max_iterations}, {"feasibility_margin", s.feasibility_margin}};
}

// ---------------------------------------------------------------- region

struct RegionArgs {
  Channel ch;
  std::string p1 = "10", p2 = "10", pr = "10";
  std::string scheme = "all";
  int profiles = 33;
  int ratios = 65;
  double delta_r = 1e-4;
  unsigned threads = 0;
  std::string out = "out/region";
};

int cmd_region(const RegionArgs& a) {
  const PowerConfig pc{parse_power("--p1", a.p1), parse_power("--p2", a.p2), parse_power("--pr", a.pr)};
  if (!(pc.P_R > 0.0)) throw UsageError("--pr: relay power must be > 0");
  const ChannelPair pair = gen_channels(a.ch.m, a.ch.rho, a.ch.seed);
  const bool want_opt = a.scheme == "all" || a.scheme == "opt";
  const bool want_mr = a.scheme == "all" || a.scheme == "mr";
  const bool want_zf = a.scheme == "all" || a.scheme == "zf";
  const bool zf_defined = a.ch.rho < 1.0;
  if (a.scheme == "zf" && !zf_defined)
    throw RankDeficiency("zero forcing is undefined at rho = 1: the two channels are parallel");

  Output out = start_output(a.out, "region");
  const SdpOptions sdp;
  out.manifest["settings"] = {{"channel", channel_settings(a.ch)},
                              {"p1", pc.p1},
                              {"p2", pc.p2},
                              {"P_R", pc.P_R},
                              {"scheme", a.scheme},
                              {"profiles", a.profiles},
                              {"ratios", a.ratios},
                              {"delta_r", a.delta_r},
                              {"threads", a.threads},
                              {"sdp", sdp_settings(sdp)}};
  out.manifest["channel"] = to_json(pair);
  Stopwatch sw;
  json timings;
  if (want_opt) {
    const RegionBoundary r = rate_region_boundary(effective(pair), pc, a.profiles, a.delta_r, a.threads, sdp);
    out.write("optimal.csv", region_csv(r));
    timings["optimal"] = sw.lap();
  }
  if (want_mr) {
    out.write("mr.csv", scheme_region_csv("mr", sweep_region(Scheme::MR, pair, pc, a.ratios)));
    timings["mr"] = sw.lap();
  }
  if (want_zf) {
    if (zf_defined) {
      out.write("zf.csv", scheme_region_csv("zf", sweep_region(Scheme::ZF, pair, pc, a.ratios)));
      timings["zf"] = sw.lap();
    } else {
      out.manifest["skipped"]["zf"] = "zero forcing is undefined at rho = 1";
    }
  }
  out.manifest["timings_s"] = timings;
  out.finish();
  std::cout << "wrote " << out.files.size() << " region file(s) to " << out.dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- capacity

struct CapacityArgs {
  Channel ch;
  std::string p1 = "10", p2 = "10", pr = "10";
  int grid = 8;
  int profiles = 33;
  double delta_r = 1e-4;
  unsigned threads = 0;
  std::string out = "out/capacity";
};

int cmd_capacity(const CapacityArgs& a) {
  const double P1 = parse_power("--p1", a.p1), P2 = parse_power("--p2", a.p2), PR = parse_power("--pr", a.pr);
  if (!(PR > 0.0)) throw UsageError("--pr: relay power must be > 0");
  const ChannelPair pair = gen_channels(a.ch.m, a.ch.rho, a.ch.seed);
  Output out = start_output(a.out, "capacity");
  const SdpOptions sdp;
  out.manifest["settings"] = {{"channel", channel_settings(a.ch)},
                              {"P1", P1},
                              {"P2", P2},
                              {"P_R", PR},
                              {"grid", a.grid},
                              {"p1_grid", power_grid(P1, a.grid)},
                              {"p2_grid", power_grid(P2, a.grid)},
                              {"profiles", a.profiles},
                              {"delta_r", a.delta_r},
                              {"threads", a.threads},
                              {"sdp", sdp_settings(sdp)}};
  out.manifest["channel"] = to_json(pair);
  Stopwatch sw;
  const RegionBoundary r = capacity_region(pair, P1, P2, PR, a.grid, a.profiles, a.delta_r, a.threads, sdp);
  out.write("capacity.csv", region_csv(r));
  out.manifest["timings_s"] = {{"capacity", sw.lap()}};
  out.finish();
  std::cout << "wrote capacity envelope (" << r.points.size() << " points) to " << out.dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- sumrate

struct SumrateArgs {
  Channel ch{4, 1.0 / 3.0, 42};
  double snr_min = 0.0, snr_max = 40.0, snr_step = 2.0;
  int ratios = 257;
  std::string out = "out/sumrate";
};

int cmd_sumrate(const SumrateArgs& a) {
  if (!(a.snr_step > 0.0)) throw UsageError("--snr-step: must be > 0");
  if (a.snr_max < a.snr_min) throw UsageError("--snr-max: must be >= --snr-min");
  if (a.ch.rho >= 1.0) throw UsageError("--rho: zero forcing columns need rho < 1");
  const ChannelPair pair = gen_channels(a.ch.m, a.ch.rho, a.ch.seed);
  const double t1 = pair.theta1(), t2 = pair.theta2();
  const auto rows = static_cast<int>(std::llround((a.snr_max - a.snr_min) / a.snr_step)) + 1;

  Output out = start_output(a.out, "sumrate");
  out.manifest["settings"] = {{"channel", channel_settings(a.ch)},
                              {"snr_min_db", a.snr_min},
                              {"snr_max_db", a.snr_max},
                              {"snr_step_db", a.snr_step},
                              {"ratios", a.ratios},
                              {"powers", "p1 = p2 = P_R = 10^(snr/10)"},
                              {"oneway_power", "per-slot P_R"}};
  out.manifest["channel"] = to_json(pair);
  Stopwatch sw;
  std::ostringstream os;
  os << "snr_db,c_ub_sym,r_lb_mr,r_mr,r_lb_zf,r_zf,r_dr,r_ow\n";
  for (int i = 0; i < rows; ++i) {
    const double snr_db = a.snr_min + a.snr_step * i;
    const double P = std::pow(10.0, snr_db / 10.0);
    const PowerConfig pc{P, P, P};
    os << fmt(snr_db) << ',' << fmt(c_ub_sym(t1, P)) << ',' << fmt(r_lb_mr(pc, t1, t2, a.ch.rho)) << ','
       << fmt(sweep_region(Scheme::MR, pair, pc, a.ratios).max_sum()) << ',' << fmt(r_lb_zf(pc, t1, t2, a.ch.rho)) << ','
       << fmt(sweep_region(Scheme::ZF, pair, pc, a.ratios).max_sum()) << ','
       << fmt(rate_pair(direct_relay(pair, pc), pair, pc).sum()) << ',' << fmt(oneway_alternating(pair, pc).sum())
       << '\n';
  }
  out.write("sumrate.csv", os.str());
  out.manifest["timings_s"] = {{"sumrate", sw.lap()}};
  out.finish();
  std::cout << "wrote " << rows << " rows to " << (out.dir / "sumrate.csv").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
  double theta1 = 1.0, theta2 = 1.0, rho = 0.5;
  std::string p1 = "10", p2 = "10", pr = "10";
  int grid = 33;
  bool as_json = false;
  std::string out;
};

int cmd_bounds(const BoundsArgs& a) {
  const PowerConfig pc{parse_power("--p1", a.p1), parse_power("--p2", a.p2), parse_power("--pr", a.pr)};
  const BoundsReport r = bounds_report(pc, a.theta1, a.theta2, a.rho, a.grid);
  json j = to_json(r);
  j["gap_mr_asymptotic"] = gap_mr(a.rho);
  j["gap_zf_asymptotic"] = a.rho < 1.0 ? json(gap_zf(a.rho)) : json(nullptr);
  if (!a.out.empty()) {
    Output out = start_output(a.out, "bounds");
    out.manifest["settings"] = {{"theta1", a.theta1}, {"theta2", a.theta2}, {"rho", a.rho}, {"p1", pc.p1},
                                {"p2", pc.p2},         {"P_R", pc.P_R},       {"grid", a.grid}};
    out.write("bounds.json", j.dump(2) + "\n");
    out.finish();
  }
  if (a.as_json) {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  auto line = [](const char* name, const json& v) {
    std::printf("%-20s %s\n", name, v.is_null() ? "n/a" : fmt(v.get<double>()).c_str());
  };
  for (const char* k : {"c21", "c12", "c_ub", "c_ub0", "c_ub_sym", "r_lb_mr", "r_lb_zf", "kappa21_star", "p21_star",
                        "gap_mr_asymptotic", "gap_zf_asymptotic"})
    line(k, j[k]);
  return 0;
}

// ---------------------------------------------------------------- df-compare

struct DfArgs {
  Channel ch{4, 0.95, 7};
  std::string p = "100";
  int taus = 65;
  int weights = 65;
  int grid = 8;
  int profiles = 33;
  double delta_r = 1e-4;
  unsigned threads = 0;
  std::string out = "out/df";
};

int cmd_df(const DfArgs& a) {
  const double P = parse_power("--p", a.p);
  if (!(P > 0.0)) throw UsageError("--p: power must be > 0");
  const ChannelPair pair = gen_channels(a.ch.m, a.ch.rho, a.ch.seed);
  Output out = start_output(a.out, "df-compare");
  const SdpOptions sdp;
  out.manifest["settings"] = {{"channel", channel_settings(a.ch)},
                              {"P1", P},
                              {"P2", P},
                              {"P_R", P},
                              {"taus", a.taus},
                              {"weights", a.weights},
                              {"grid", a.grid},
                              {"profiles", a.profiles},
                              {"delta_r", a.delta_r},
                              {"threads", a.threads},
                              {"sdp", sdp_settings(sdp)}};
  out.manifest["channel"] = to_json(pair);
  Stopwatch sw;
  json timings;
  const DfRegion df = df_capacity_region(pair, P, P, P, a.taus, a.weights, a.threads);
  timings["df"] = sw.lap();

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<double, RatePair>> mac_rows, bc_rows, env_rows, tau_rows;
  const Polygon half_mac = mac_polygon(df.mac, 0.5);
  for (const auto& v : half_mac) mac_rows.push_back({0.5, {v.x, v.y}});
  for (const auto& p : df.bc.points) bc_rows.push_back({0.5, {0.5 * p.r21, 0.5 * p.r12}});
  for (const auto& p : df.envelope.points) env_rows.push_back({nan, p.rates});
  for (std::size_t i = 0; i < df.taus.size(); ++i)
    for (const auto& v : df.per_tau[i]) tau_rows.push_back({df.taus[i], {v.x, v.y}});
  out.write("half_mac.csv", tau_csv(mac_rows));
  out.write("half_bc.csv", tau_csv(bc_rows));
  out.write("c_df.csv", tau_csv(env_rows));
  out.write("c_df_tau.csv", tau_csv(tau_rows));

  const RegionBoundary af = capacity_region(pair, P, P, P, a.grid, a.profiles, a.delta_r, a.threads, sdp);
  out.write("c_af.csv", region_csv(af));
  timings["af"] = sw.lap();

  const Polygon half_bc = bc_polygon(df.bc, 0.5);
  bool inside = true;
  for (const auto& v : half_mac) inside = inside && in_convex_polygon(half_bc, v, 1e-9);
  out.manifest["half_mac_inside_half_bc"] = inside;
  out.manifest["timings_s"] = timings;
  out.finish();
  std::cout << "wrote DF/AF comparison to " << out.dir.string() << " (half MAC inside half BC: "
            << (inside ? "yes" : "no") << ")\n";
  return 0;
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
  std::string suite = "all";
  std::uint64_t seed = 13;
  bool quick = false;
  unsigned threads = 0;
};

struct SuiteResult {
  int checks = 0;
  int failures = 0;
  std::string first_failure;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failures;
      if (first_failure.empty()) first_failure = what;
    }
  }
};

struct Instance {
  ChannelPair pair;
  EffectiveChannel eff;
  PowerConfig pc;
  double rho;
};

Instance random_instance(Rng& rng) {
  static const double rhos[] = {0.1, 0.5, 0.8};
  const double rho = rhos[rng.next_u64() % 3];
  const auto M = static_cast<Eigen::Index>(2 + rng.next_u64() % 3);
  ChannelPair pair = gen_channels(M, rho, rng.next_u64());
  EffectiveChannel eff = effective(pair);
  const PowerConfig pc{rng.uniform(1.0, 20.0), rng.uniform(1.0, 20.0), rng.uniform(1.0, 20.0)};
  return {std::move(pair), std::move(eff), pc, rho};
}

SuiteResult suite_sdp(Rng& rng, int n) {
  SuiteResult s;
  for (int i = 0; i < n; ++i) {
    const Instance in = random_instance(rng);
    const double g1 = rng.uniform(0.05, 0.9) * in.pc.p2, g2 = rng.uniform(0.05, 0.9) * in.pc.p1;
    const MinPowerResult r = min_relay_power(in.eff, in.pc, g1, g2);
    s.expect(r.status != SdpStatus::numerical_failure, "sdp: numerical failure");
    if (!r.B) continue;
    const SnrPair snr = snr_pair_reduced(*r.B, in.eff, in.pc);
    s.expect(snr.gamma1 >= g1 * (1.0 - 1e-6) && snr.gamma2 >= g2 * (1.0 - 1e-6), "sdp: SNR targets missed");
    const double p = relay_power_reduced(*r.B, in.eff, in.pc);
    s.expect(std::abs(p - r.p_star) <= 1e-6 * std::max(1.0, r.p_star), "sdp: rank-one power differs from SDP value");
  }
  return s;
}

SuiteResult suite_bisection(Rng& rng, int n) {
  SuiteResult s;
  for (int i = 0; i < n; ++i) {
    const Instance in = random_instance(rng);
    const RateProfile prof = RateProfile::from_alpha21(rng.uniform());
    const double delta = 1e-4;
    const SumRateResult r = max_sum_rate(in.eff, in.pc, prof, delta);
    s.expect(check_bisection_contract(in.eff, in.pc, prof, r.R_sum, delta).ok(), "bisection: contract violated");
    s.expect(r.R_sum <= c_ub0(in.pc, in.eff.theta1(), in.eff.theta2()) + 1e-9, "bisection: above C_UB0");
  }
  return s;
}

SuiteResult suite_oracle(Rng& rng, int n, int restarts, int iters, unsigned threads) {
  SuiteResult s;
  for (int i = 0; i < n; ++i) {
    const Instance in = random_instance(rng);
    const RateProfile prof = RateProfile::from_alpha21(rng.uniform());
    const double delta = 1e-4;
    const SumRateResult r = max_sum_rate(in.eff, in.pc, prof, delta);
    const OracleResult w = oracle_max_sum_rate(in.eff, in.pc, prof, restarts, iters, rng.next_u64(), threads);
    s.expect(w.value <= r.R_sum + 1e-3, "oracle: witness above max_sum_rate");
    s.expect(r.R_sum <= c_ub0(in.pc, in.eff.theta1(), in.eff.theta2()) + 1e-9, "oracle: max_sum_rate above C_UB0");
  }
  return s;
}

SuiteResult suite_bounds(Rng& rng, int n) {
  SuiteResult s;
  for (int i = 0; i < n; ++i) {
    const Instance in = random_instance(rng);
    const double t1 = in.pair.theta1(), t2 = in.pair.theta2();
    const RatePair mr = rate_pair(mrr_mrt(in.pair, 1.0, in.pc).A, in.pair, in.pc);
    std::vector<RateProfile> profiles = uniform_profiles(9);
    profiles.push_back(RateProfile::from_alpha21(mr.r21 / mr.sum()));
    double opt = 0.0;
    for (const auto& prof : profiles) opt = std::max(opt, max_sum_rate(in.eff, in.pc, prof, 1e-7).R_sum);
    const double cub = c_ub(in.pc, t1, t2).value;
    s.expect(r_lb_mr(in.pc, t1, t2, in.rho) <= mr.sum() + 1e-6, "bounds: R_LB^MR above R^MR");
    s.expect(mr.sum() <= opt + 1e-6, "bounds: R^MR above the optimum");
    s.expect(opt <= cub + 1e-6, "bounds: optimum above C_UB");
    s.expect(cub <= c_ub0(in.pc, t1, t2) + 1e-9, "bounds: C_UB above C_UB0");
  }
  return s;
}

SuiteResult suite_df(Rng& rng, int n) {
  SuiteResult s;
  for (int i = 0; i < n; ++i) {
    const Instance in = random_instance(rng);
    const BcResult one = bc_wsrmax(in.pair, in.pc.P_R, 1.0, 0.0);
    s.expect(std::abs(one.rates.r21 - std::log2(1.0 + in.pc.P_R * in.pair.theta1())) <= 1e-8, "df: single-user BC rate");
    const MacPentagon m = mac_region(in.pair, in.pc.p1, in.pc.p2);
    const Eigen::Index M = in.pair.M();
    const ComplexMatrix K = ComplexMatrix::Identity(M, M) + in.pc.p1 * in.pair.h1() * in.pair.h1().adjoint() +
                            in.pc.p2 * in.pair.h2() * in.pair.h2().adjoint();
    s.expect(std::abs(m.c_sum - std::log2(K.determinant().real())) <= 1e-10, "df: MAC determinant reduction");
  }
  return s;
}

int cmd_validate(const ValidateArgs& a) {
  static const std::vector<std::string> names{"sdp", "bisection", "oracle", "bounds", "df"};
  if (a.suite != "all" && std::find(names.begin(), names.end(), a.suite) == names.end())
    throw UsageError("--suite: unknown suite '" + a.suite + "'");
  const int n = a.quick ? 4 : 20;
  bool all_ok = true;
  for (std::size_t k = 0; k < names.size(); ++k) {
    const std::string& name = names[k];
    if (a.suite != "all" && a.suite != name) continue;
    Rng rng(a.seed * 1000003ULL + k);
    Stopwatch sw;
    SuiteResult r;
    if (name == "sdp") r = suite_sdp(rng, 5 * n);
    if (name == "bisection") r = suite_bisection(rng, n);
    if (name == "oracle") r = suite_oracle(rng, a.quick ? 2 : 10, a.quick ? 8 : 64, a.quick ? 300 : 2000, a.threads);
    if (name == "bounds") r = suite_bounds(rng, a.quick ? 2 : 10);
    if (name == "df") r = suite_df(rng, n);
    const bool ok = r.failures == 0;
    all_ok = all_ok && ok;
    std::printf("%-10s %s  %d checks, %d failed, %.2fs%s%s\n", name.c_str(), ok ? "PASS" : "FAIL", r.checks,
                r.failures, sw.lap(), ok ? "" : "  first: ", r.first_failure.c_str());
  }
  return all_ok ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beamforming and capacity tools for the two-way multi-antenna relay channel"};
  app.set_version_flag("--version", TWRC_VERSION);
  app.require_subcommand(1);
  std::string config;

  RegionArgs region;
  auto* sr = app.add_subcommand("region", "optimal, MR and ZF rate-region boundaries");
  add_channel_options(sr, region.ch);
  sr->add_option("--p1", region.p1, "S1 power (linear, or dB with suffix db)")->capture_default_str();
  sr->add_option("--p2", region.p2, "S2 power")->capture_default_str();
  sr->add_option("--pr", region.pr, "relay power")->capture_default_str();
  sr->add_option("--scheme", region.scheme, "which boundaries")
      ->capture_default_str()
      ->check(CLI::IsMember({"all", "opt", "mr", "zf"}));
  sr->add_option("--profiles", region.profiles, "rate profiles")->capture_default_str()->check(CLI::Range(2, 100000));
  sr->add_option("--ratios", region.ratios, "MR/ZF sweep angles")->capture_default_str()->check(CLI::Range(2, 100000));
  sr->add_option("--delta-r", region.delta_r, "bisection width (bits)")->capture_default_str()->check(CLI::PositiveNumber);
  sr->add_option("--threads", region.threads, "worker threads (0 = all cores)")->capture_default_str();
  sr->add_option("--out", region.out, "output directory")->capture_default_str();
  sr->add_option("--config", config, "key=value settings file; flags win");

  CapacityArgs cap;
  auto* sc = app.add_subcommand("capacity", "capacity region: envelope over source powers");
  add_channel_options(sc, cap.ch);
  sc->add_option("--p1", cap.p1, "S1 power budget")->capture_default_str();
  sc->add_option("--p2", cap.p2, "S2 power budget")->capture_default_str();
  sc->add_option("--pr", cap.pr, "relay power")->capture_default_str();
  sc->add_option("--grid", cap.grid, "source powers per axis")->capture_default_str()->check(CLI::Range(1, 1000));
  sc->add_option("--profiles", cap.profiles, "rate profiles")->capture_default_str()->check(CLI::Range(2, 100000));
  sc->add_option("--delta-r", cap.delta_r, "bisection width (bits)")->capture_default_str()->check(CLI::PositiveNumber);
  sc->add_option("--threads", cap.threads, "worker threads (0 = all cores)")->capture_default_str();
  sc->add_option("--out", cap.out, "output directory")->capture_default_str();
  sc->add_option("--config", config, "key=value settings file; flags win");

  SumrateArgs sum;
  auto* ss = app.add_subcommand("sumrate", "sum rate versus SNR for bounds and schemes");
  add_channel_options(ss, sum.ch);
  ss->add_option("--snr-min", sum.snr_min, "first SNR (dB)")->capture_default_str();
  ss->add_option("--snr-max", sum.snr_max, "last SNR (dB)")->capture_default_str();
  ss->add_option("--snr-step", sum.snr_step, "SNR step (dB)")->capture_default_str();
  ss->add_option("--ratios", sum.ratios, "MR/ZF sweep angles")->capture_default_str()->check(CLI::Range(2, 100000));
  ss->add_option("--out", sum.out, "output directory")->capture_default_str();
  ss->add_option("--config", config, "key=value settings file; flags win");

  BoundsArgs bnd;
  auto* sb = app.add_subcommand("bounds", "closed-form upper and lower sum-rate bounds");
  sb->add_option("--theta1", bnd.theta1, "||h1||^2")->capture_default_str()->check(CLI::PositiveNumber);
  sb->add_option("--theta2", bnd.theta2, "||h2||^2")->capture_default_str()->check(CLI::PositiveNumber);
  sb->add_option("--rho", bnd.rho, "channel correlation")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  sb->add_option("--p1", bnd.p1, "S1 power")->capture_default_str();
  sb->add_option("--p2", bnd.p2, "S2 power")->capture_default_str();
  sb->add_option("--pr", bnd.pr, "relay power")->capture_default_str();
  sb->add_option("--grid", bnd.grid, "pre-scan points for the tightest bound")->capture_default_str()->check(CLI::Range(3, 100000));
  sb->add_flag("--json", bnd.as_json, "print JSON");
  sb->add_option("--out", bnd.out, "also write bounds.json and a manifest here");
  sb->add_option("--config", config, "key=value settings file; flags win");

  DfArgs dfa;
  auto* sd = app.add_subcommand("df-compare", "decode-and-forward regions against the AF capacity region");
  add_channel_options(sd, dfa.ch);
  sd->add_option("--p", dfa.p, "P1 = P2 = P_R")->capture_default_str();
  sd->add_option("--taus", dfa.taus, "time-share grid points")->capture_default_str()->check(CLI::Range(2, 100000));
  sd->add_option("--weights", dfa.weights, "BC weight sweep points")->capture_default_str()->check(CLI::Range(2, 100000));
  sd->add_option("--grid", dfa.grid, "AF source powers per axis")->capture_default_str()->check(CLI::Range(1, 1000));
  sd->add_option("--profiles", dfa.profiles, "AF rate profiles")->capture_default_str()->check(CLI::Range(2, 100000));
  sd->add_option("--delta-r", dfa.delta_r, "bisection width (bits)")->capture_default_str()->check(CLI::PositiveNumber);
  sd->add_option("--threads", dfa.threads, "worker threads (0 = all cores)")->capture_default_str();
  sd->add_option("--out", dfa.out, "output directory")->capture_default_str();
  sd->add_option("--config", config, "key=value settings file; flags win");

  ValidateArgs val;
  auto* sv = app.add_subcommand("validate", "run invariant suites on random instances");
  sv->add_option("--suite", val.suite, "all, sdp, bisection, oracle, bounds or df")->capture_default_str();
  sv->add_option("--seed", val.seed, "instance seed")->capture_default_str();
  sv->add_flag("--quick", val.quick, "smaller budgets");
  sv->add_option("--threads", val.threads, "worker threads (0 = all cores)")->capture_default_str();
  sv->add_option("--config", config, "key=value settings file; flags win");

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::vector<char*> ptrs;
    for (auto& s : args) ptrs.push_back(s.data());
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*sr) return cmd_region(region);
    if (*sc) return cmd_capacity(cap);
    if (*ss) return cmd_sumrate(sum);
    if (*sb) return cmd_bounds(bnd);
    if (*sd) return cmd_df(dfa);
    if (*sv) return cmd_validate(val);
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const RankDeficiency& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
