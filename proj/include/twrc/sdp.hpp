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
 * @file sdp.hpp
 * @brief Small dense semidefinite programs with one PSD block and linear ">= 1" constraints,
 *        plus exact rank-one recovery for the two-constraint case.
 *
 * Problem:   minimize tr(F0 X)  subject to  tr(Fi X) >= 1 (i = 1..m),  X >= 0,
 * with F0 positive semidefinite and n <= 32.
 *
 * The solver first decides feasibility exactly: a feasible X exists iff
 *   min over lambda in the simplex of lambda_max(sum_i lambda_i Fi / ||Fi||) > 0,
 * and a minimizing lambda with a nonpositive value is an infeasibility certificate. Feasible
 * problems are then strictly feasible in both primal and dual form, and an infeasible-start
 * primal-dual path-following method with Nesterov-Todd scaling solves them. The constraint slacks
 * are carried as a nonnegative-orthant block next to the PSD block.
 *
 * Rank-one recovery: at an optimum at least one constraint is active. X is split as
 * sum_j x_j x_j^T with x_j^T (F_other - F_active) x_j >= 0 for all j (decompose_wrt), which makes
 * the other constraint redundant in the LP over weights t_j; the LP has a basic optimal solution
 * with a single positive t_k, and t_k x_k x_k^T is a rank-one optimum.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "twrc/errors.hpp"
#include "twrc/linalg.hpp"

namespace twrc {

struct SdpProblem {
  RealMatrix F0;
  std::vector<RealMatrix> constraints;  // F1, F2, ...

  SdpProblem() = default;
  SdpProblem(RealMatrix f0, std::vector<RealMatrix> fs) : F0(std::move(f0)), constraints(std::move(fs)) {}
  SdpProblem(RealMatrix f0, RealMatrix f1, RealMatrix f2) : F0(std::move(f0)) {
    constraints.push_back(std::move(f1));
    constraints.push_back(std::move(f2));
  }

  Eigen::Index n() const { return F0.rows(); }
  std::size_t m() const { return constraints.size(); }

  void validate() const {
    const Eigen::Index dim = n();
    if (dim < 1 || dim > 32) throw InvalidInput("SdpProblem: dimension must be in [1, 32]");
    auto check_sym = [&](const RealMatrix& F, const char* name) {
      if (F.rows() != dim || F.cols() != dim) throw InvalidInput(std::string("SdpProblem: wrong shape for ") + name);
      if (!F.allFinite()) throw InvalidInput(std::string("SdpProblem: non-finite entry in ") + name);
      if (max_abs(F - F.transpose()) > 1e-12 * std::max(1.0, max_abs(F)))
        throw InvalidInput(std::string("SdpProblem: ") + name + " is not symmetric");
    };
    check_sym(F0, "F0");
    for (const auto& F : constraints) check_sym(F, "Fi");
    const double scale = std::max(max_abs(F0), std::numeric_limits<double>::min());
    const SymmetricEigen e = eig_sym(0.5 * (F0 + F0.transpose()), 1e-15);
    if (e.values(dim - 1) < -1e-10 * scale) throw InvalidInput("SdpProblem: F0 is not positive semidefinite");
  }
};

enum class SdpStatus { optimal, infeasible, numerical_failure };

inline const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical_failure;
  RealMatrix X;
  double objective = std::numeric_limits<double>::infinity();
  std::optional<RealVector> x_hat;
  // Infeasibility certificate: weights y >= 0 (sum 1) with sum_i y_i Fi / ||Fi|| having largest
  // eigenvalue certificate_value <= 0.
  RealVector certificate_weights;
  double certificate_value = 0.0;
  std::string message;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
};

struct SdpOptions {
  double tol = 1e-9;
  int max_iterations = 150;
  // Feasibility threshold on min_lambda lambda_max(sum lambda_i Fi/||Fi||).
  double feasibility_margin = 1e-12;
};

namespace detail {

inline double frob_inner(const RealMatrix& a, const RealMatrix& b) { return (a.array() * b.array()).sum(); }

inline RealMatrix sym(const RealMatrix& a) { return 0.5 * (a + a.transpose()); }

// Largest step alpha with X + alpha dX >= 0, given the Cholesky factor L of X.
inline double max_psd_step(const Eigen::LLT<RealMatrix>& chol, const RealMatrix& dX) {
  const RealMatrix L = chol.matrixL();
  RealMatrix tmp = L.triangularView<Eigen::Lower>().solve(dX);
  RealMatrix scaled = L.triangularView<Eigen::Lower>().solve(tmp.transpose());
  scaled = sym(scaled);
  const double lmin = eig_sym(scaled, 1e-15).values(scaled.rows() - 1);
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

inline double max_orthant_step(const RealVector& v, const RealVector& dv) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv(i) < 0.0) a = std::min(a, -v(i) / dv(i));
  return a;
}

struct Feasibility {
  bool feasible = false;
  RealVector weights;
  double value = 0.0;
};

// min over the simplex of lambda_max(sum_i w_i A_i). lambda_max of an affine matrix pencil is
// convex, so golden-section search on the segment is exact up to its bracket width.
inline Feasibility check_feasibility(const std::vector<RealMatrix>& A, double margin) {
  Feasibility out;
  auto lmax = [](const RealMatrix& S) { return eig_sym(sym(S), 1e-15).values(0); };
  if (A.size() == 1) {
    out.weights = RealVector::Ones(1);
    out.value = lmax(A[0]);
  } else if (A.size() == 2) {
    auto f = [&](double w) { return lmax(w * A[0] + (1.0 - w) * A[1]); };
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = 1.0;
    double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > 1e-13) {
      if (fc <= fd) {
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
    double best_w = 0.5 * (lo + hi);
    double best = f(best_w);
    for (double w : {0.0, 1.0}) {
      const double v = f(w);
      if (v < best) {
        best = v;
        best_w = w;
      }
    }
    out.weights = RealVector(2);
    out.weights << best_w, 1.0 - best_w;
    out.value = best;
  } else {
    throw InvalidInput("solve_sdp: at most two constraints are supported");
  }
  out.feasible = out.value > margin;
  return out;
}

}  // namespace detail

/**
 * Solve min tr(F0 X) s.t. tr(Fi X) >= 1, X >= 0.
 *
 * Returns status infeasible with a certificate when no PSD X meets the constraints, and
 * numerical_failure when the iteration cap is hit. On success the KKT residuals (relative) and the
 * relative duality gap are at most opts.tol.
 */
inline SdpSolution solve_sdp(const SdpProblem& prob, const SdpOptions& opts = {}) {
  prob.validate();
  const Eigen::Index n = prob.n();
  const auto m = static_cast<Eigen::Index>(prob.m());
  SdpSolution sol;

  if (m == 0) {
    sol.status = SdpStatus::optimal;
    sol.X = RealMatrix::Zero(n, n);
    sol.objective = 0.0;
    return sol;
  }

  std::vector<RealMatrix> A;
  RealVector b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const RealMatrix Fi = detail::sym(prob.constraints[static_cast<std::size_t>(i)]);
    const double nrm = Fi.norm();
    if (nrm == 0.0) {
      sol.status = SdpStatus::infeasible;
      sol.certificate_weights = RealVector::Unit(m, i);
      sol.certificate_value = 0.0;
      sol.message = "constraint matrix is zero; tr(0 X) >= 1 is impossible";
      return sol;
    }
    A.push_back(Fi / nrm);
    b(i) = 1.0 / nrm;
  }

  const detail::Feasibility feas = detail::check_feasibility(A, opts.feasibility_margin);
  if (!feas.feasible) {
    sol.status = SdpStatus::infeasible;
    sol.certificate_weights = feas.weights;
    sol.certificate_value = feas.value;
    std::ostringstream os;
    os << "weights (";
    for (Eigen::Index i = 0; i < m; ++i) os << (i ? ", " : "") << feas.weights(i);
    os << ") give lambda_max(sum w_i Fi/||Fi||) = " << feas.value << " <= 0, so no PSD X satisfies all constraints";
    sol.message = os.str();
    return sol;
  }

  // Scale X so the largest right-hand side is 1.
  const double beta = b.maxCoeff();
  b /= beta;
  const RealMatrix F0s = detail::sym(prob.F0);
  const double c0 = F0s.norm() > 0.0 ? F0s.norm() : 1.0;
  const RealMatrix C = F0s / c0;

  const double dn = static_cast<double>(n);
  const double xi = std::max({10.0, std::sqrt(dn), dn * (1.0 + b.maxCoeff()) / 2.0});
  const double eta = std::max(10.0, std::sqrt(dn));
  RealMatrix X = xi * RealMatrix::Identity(n, n);
  RealMatrix Z = eta * RealMatrix::Identity(n, n);
  RealVector s = RealVector::Constant(m, xi);
  RealVector y = RealVector::Constant(m, eta);

  const double nu = static_cast<double>(n + m);
  auto accept = [&](int iter, double rp, double rd, double gap) {
    sol.status = SdpStatus::optimal;
    sol.X = beta * detail::sym(X);
    sol.objective = detail::frob_inner(prob.F0, sol.X);
    sol.iterations = iter;
    sol.primal_residual = rp;
    sol.dual_residual = rd;
    sol.gap = gap;
    sol.message = "optimal";
  };

  double last_rp = 0.0, last_rd = 0.0, last_gap = 0.0;
  for (int iter = 0; iter <= opts.max_iterations; ++iter) {
    RealVector rp(m);
    RealMatrix Rd = C - Z;
    for (Eigen::Index i = 0; i < m; ++i) {
      rp(i) = b(i) - detail::frob_inner(A[static_cast<std::size_t>(i)], X) + s(i);
      Rd -= y(i) * A[static_cast<std::size_t>(i)];
    }
    const double pobj = detail::frob_inner(C, X);
    const double dobj = b.dot(y);
    const double mu = (detail::frob_inner(X, Z) + s.dot(y)) / nu;
    const double rel_p = (rp.array().abs() / b.array()).maxCoeff();
    const double rel_d = Rd.norm();
    const double rel_gap = std::abs(pobj - dobj) / std::max(std::abs(pobj) + std::abs(dobj), 1e-14);
    last_rp = rel_p;
    last_rd = rel_d;
    last_gap = rel_gap;
    const double comp_rel = nu * mu / std::max(std::abs(pobj) + std::abs(dobj), 1e-14);
    if (rel_p <= opts.tol && rel_d <= opts.tol && rel_gap <= opts.tol && comp_rel <= opts.tol) {
      accept(iter, rel_p, rel_d, rel_gap);
      return sol;
    }
    if (iter == opts.max_iterations) break;

    Eigen::LLT<RealMatrix> cholX(detail::sym(X));
    Eigen::LLT<RealMatrix> cholZ(detail::sym(Z));
    if (cholX.info() != Eigen::Success || cholZ.info() != Eigen::Success) break;

    // NT scaling point W = L (L^T Z L)^{-1/2} L^T with X = L L^T; W Z W = X.
    const RealMatrix L = cholX.matrixL();
    const SymmetricEigen ez = eig_sym(detail::sym(L.transpose() * Z * L), 1e-15);
    if (ez.values.minCoeff() <= 0.0) break;
    const RealVector inv_sqrt = ez.values.cwiseSqrt().cwiseInverse();
    const RealMatrix LQ = L * ez.vectors;
    const RealMatrix W = detail::sym(LQ * inv_sqrt.asDiagonal() * LQ.transpose());
    const RealMatrix Zinv = cholZ.solve(RealMatrix::Identity(n, n));

    std::vector<RealMatrix> WAW;
    RealMatrix schur(m, m);
    for (Eigen::Index j = 0; j < m; ++j) WAW.push_back(W * A[static_cast<std::size_t>(j)] * W);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        schur(i, j) = detail::frob_inner(A[static_cast<std::size_t>(i)], WAW[static_cast<std::size_t>(j)]);
    for (Eigen::Index i = 0; i < m; ++i) schur(i, i) += s(i) / y(i);
    const Eigen::PartialPivLU<RealMatrix> lu(schur);
    const RealMatrix WRdW = W * Rd * W;

    struct Step {
      RealMatrix dX, dZ;
      RealVector ds, dy;
    };
    auto direction = [&](double target) {
      const RealMatrix Rc = target * Zinv - X;
      const RealMatrix base = Rc - WRdW;
      RealVector rhs(m);
      for (Eigen::Index i = 0; i < m; ++i)
        rhs(i) = rp(i) - detail::frob_inner(A[static_cast<std::size_t>(i)], base) + (target - s(i) * y(i)) / y(i);
      Step st;
      st.dy = lu.solve(rhs);
      st.dZ = Rd;
      st.dX = base;
      for (Eigen::Index j = 0; j < m; ++j) {
        st.dZ -= st.dy(j) * A[static_cast<std::size_t>(j)];
        st.dX += st.dy(j) * WAW[static_cast<std::size_t>(j)];
      }
      st.dX = detail::sym(st.dX);
      st.dZ = detail::sym(st.dZ);
      st.ds = RealVector(m);
      for (Eigen::Index i = 0; i < m; ++i) st.ds(i) = (target - s(i) * y(i) - s(i) * st.dy(i)) / y(i);
      return st;
    };
    auto step_lengths = [&](const Step& st, double frac) {
      const double ap = std::min({1.0, frac * detail::max_psd_step(cholX, st.dX), frac * detail::max_orthant_step(s, st.ds)});
      const double ad = std::min({1.0, frac * detail::max_psd_step(cholZ, st.dZ), frac * detail::max_orthant_step(y, st.dy)});
      return std::pair{ap, ad};
    };

    const Step pred = direction(0.0);
    const auto [ap_aff, ad_aff] = step_lengths(pred, 1.0);
    const double mu_aff = (detail::frob_inner(X + ap_aff * pred.dX, Z + ad_aff * pred.dZ) +
                           (s + ap_aff * pred.ds).dot(y + ad_aff * pred.dy)) /
                          nu;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);
    const Step corr = direction(sigma * mu);
    const double frac = 0.9 + 0.09 * std::min(ap_aff, ad_aff);
    const auto [ap, ad] = step_lengths(corr, frac);
    if (!(ap > 0.0) || !(ad > 0.0)) break;

    X = detail::sym(X + ap * corr.dX);
    s += ap * corr.ds;
    Z = detail::sym(Z + ad * corr.dZ);
    y += ad * corr.dy;
    sol.iterations = iter + 1;
  }

  // Stalled close to the optimum: accept when everything is within a looser threshold.
  const double loose = std::sqrt(opts.tol) * 1e-2;
  if (last_rp <= loose && last_rd <= loose && last_gap <= loose) {
    accept(sol.iterations, last_rp, last_rd, last_gap);
    sol.message = "optimal (stalled within relaxed tolerance)";
    return sol;
  }
  sol.status = SdpStatus::numerical_failure;
  sol.primal_residual = last_rp;
  sol.dual_residual = last_rd;
  sol.gap = last_gap;
  sol.message = "interior-point iterations did not reach the requested tolerance";
  return sol;
}

/**
 * Write X = sum_i x_i x_i^T with x_i^T M x_i >= 0 for every i.
 *
 * Start from the eigenvector factors p_i = sqrt(lambda_i) u_i (eigenvalues below 1e-9 lambda_max
 * dropped). While a factor with a negative M-form remains, pair it with one whose form is positive
 * and rotate the pair so that one of the rotated vectors has zero M-form; that vector is final.
 * The rotation preserves p_i p_i^T + p_j p_j^T, and the last remaining factor carries
 * tr(M X) >= 0. At most rank - 1 rotations.
 */
inline std::vector<RealVector> decompose_wrt(const RealMatrix& X, const RealMatrix& M) {
  if (X.rows() != X.cols() || M.rows() != X.rows() || M.cols() != X.cols())
    throw InvalidInput("decompose_wrt: shape mismatch");
  const RealMatrix Ms = detail::sym(M);
  const double trMX = detail::frob_inner(Ms, X);
  if (trMX < -1e-9 * std::max(1.0, Ms.norm() * X.norm()))
    throw InvalidInput("decompose_wrt: requires tr(M X) >= 0");

  const SymmetricEigen e = eig_sym(detail::sym(X), 1e-15);
  std::vector<RealVector> pool;
  const double lmax = e.values(0);
  if (!(lmax > 0.0)) return pool;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > 1e-9 * lmax) pool.push_back(std::sqrt(e.values(i)) * e.vectors.col(i));

  std::vector<RealVector> done;
  auto form = [&](const RealVector& v) { return v.dot(Ms * v); };
  while (pool.size() > 1) {
    std::size_t neg = pool.size(), pos = pool.size();
    double most_neg = 0.0, most_pos = 0.0;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      const double f = form(pool[k]);
      if (f < most_neg) {
        most_neg = f;
        neg = k;
      }
      if (f > most_pos) {
        most_pos = f;
        pos = k;
      }
    }
    if (neg == pool.size()) break;
    if (pos == pool.size()) break;  // only possible through rounding when tr(MX) ~ 0
    const RealVector& pi = pool[neg];
    const RealVector& pj = pool[pos];
    const double ai = most_neg, aj = most_pos, c = pi.dot(Ms * pj);
    // a_i + 2 c t + a_j t^2 = 0 has a real root since a_i < 0 < a_j.
    const double disc = std::sqrt(c * c - ai * aj);
    const double t = c >= 0.0 ? -ai / (c + disc) : (disc - c) / aj;
    const double scale = 1.0 / std::sqrt(1.0 + t * t);
    RealVector v1 = scale * (pi + t * pj);
    RealVector v2 = scale * (pj - t * pi);
    done.push_back(std::move(v1));
    const std::size_t hi = std::max(neg, pos), lo = std::min(neg, pos);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(hi));
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(lo));
    pool.push_back(std::move(v2));
  }
  done.insert(done.end(), pool.begin(), pool.end());
  return done;
}

/// Basic optimal solution of min sum y0_j t_j s.t. sum y1_j t_j >= 1, t >= 0: a single t_k = 1/y1_k.
struct BasicLpSolution {
  std::size_t index = 0;
  double t = 0.0;
  double cost = 0.0;
};

inline BasicLpSolution solve_basic_lp(const RealVector& y0, const RealVector& y1) {
  if (y0.size() != y1.size()) throw InvalidInput("solve_basic_lp: size mismatch");
  BasicLpSolution best;
  bool found = false;
  for (Eigen::Index j = 0; j < y1.size(); ++j) {
    if (!(y1(j) > 0.0)) continue;
    const double cost = y0(j) / y1(j);
    if (!found || cost < best.cost) {
      best = {static_cast<std::size_t>(j), 1.0 / y1(j), cost};
      found = true;
    }
  }
  if (!found) throw NumericalFailure("solve_basic_lp: no component with positive constraint weight; LP infeasible");
  return best;
}

/**
 * Rank-one optimum x (X** = x x^T) from an optimal SDP solution.
 *
 * Throws NumericalFailure when no constraint is active within 1e-6, which cannot happen at an
 * exact optimum.
 */
inline RealVector extract_rank_one(const SdpSolution& sol, const SdpProblem& prob) {
  if (sol.status != SdpStatus::optimal) throw InvalidInput("extract_rank_one: solution is not optimal");
  const Eigen::Index n = prob.n();
  if (prob.m() == 0) return RealVector::Zero(n);
  if (prob.m() > 2) throw InvalidInput("extract_rank_one: at most two constraints are supported");

  std::vector<double> traces;
  for (const auto& F : prob.constraints) traces.push_back(detail::frob_inner(F, sol.X));
  std::size_t active = 0;
  for (std::size_t i = 1; i < traces.size(); ++i)
    if (traces[i] < traces[active]) active = i;
  if (std::abs(traces[active] - 1.0) > 1e-6)
    throw NumericalFailure("extract_rank_one: no active constraint at the returned optimum");

  const RealMatrix& Fa = prob.constraints[active];
  const RealMatrix ref = prob.m() == 2 ? RealMatrix(prob.constraints[1 - active] - Fa) : RealMatrix::Zero(n, n);
  const std::vector<RealVector> parts = decompose_wrt(sol.X, ref);
  if (parts.empty()) throw NumericalFailure("extract_rank_one: optimal X is numerically zero");

  RealVector y0(static_cast<Eigen::Index>(parts.size())), y1(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    y0(jj) = parts[j].dot(prob.F0 * parts[j]);
    y1(jj) = parts[j].dot(Fa * parts[j]);
  }
  const BasicLpSolution lp = solve_basic_lp(y0, y1);
  return std::sqrt(lp.t) * parts[lp.index];
}

}  // namespace twrc
