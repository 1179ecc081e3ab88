// Copyright 2026 The uavpe Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uavpe/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "uavpe/sca.hpp"

namespace uavpe::opt {

namespace {

using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Affine expression over reduced (free) variables with merged indices.
struct RExpr {
  std::vector<int> idx;
  std::vector<double> val;
  double c = 0.0;

  double eval(const VectorXd& x) const {
    double v = c;
    for (std::size_t k = 0; k < idx.size(); ++k) v += val[k] * x[idx[k]];
    return v;
  }
  void add(int i, double v) {
    idx.push_back(i);
    val.push_back(v);
  }
  void merge() {
    std::vector<std::size_t> order(idx.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return idx[a] < idx[b]; });
    std::vector<int> ni;
    std::vector<double> nv;
    for (std::size_t o : order) {
      if (!ni.empty() && ni.back() == idx[o]) {
        nv.back() += val[o];
      } else {
        ni.push_back(idx[o]);
        nv.push_back(val[o]);
      }
    }
    idx = std::move(ni);
    val = std::move(nv);
  }
};

struct RAtom {
  AtomKind kind;
  double w;
  RExpr arg;
  std::vector<int> pos;
};

enum class Origin { kConstraint, kLower, kUpper, kPhaseFloor, kBox };

constexpr double kBoxRadius = 1e3;

// One barrier term: scalar  affine + sum(atoms) < 0, or cone  ||args|| < bound.
struct Term {
  bool cone = false;
  Origin origin = Origin::kConstraint;
  int source = -1;  // constraint index or original variable index
  RExpr affine;     // scalar part, or the cone bound
  std::vector<int> affine_pos;
  std::vector<RAtom> atoms;
  std::vector<RExpr> args;
  std::vector<std::vector<int>> arg_pos;
  std::vector<int> support;

  void finalize() {
    std::vector<int> all(affine.idx);
    for (const RAtom& a : atoms) all.insert(all.end(), a.arg.idx.begin(), a.arg.idx.end());
    for (const RExpr& e : args) all.insert(all.end(), e.idx.begin(), e.idx.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    support = std::move(all);
    auto positions = [&](const RExpr& e) {
      std::vector<int> p;
      for (int i : e.idx)
        p.push_back(static_cast<int>(std::lower_bound(support.begin(), support.end(), i) - support.begin()));
      return p;
    };
    affine_pos = positions(affine);
    for (RAtom& a : atoms) a.pos = positions(a.arg);
    arg_pos.clear();
    for (const RExpr& e : args) arg_pos.push_back(positions(e));
  }
};

struct BarrierProblem {
  int n = 0;
  VectorXd c;
  SpMat a;  // equality rows
  VectorXd b;
  std::vector<int> eq_source;  // original constraint per row
  std::vector<Term> terms;

  double theta() const {
    double th = 0.0;
    for (const Term& t : terms) th += t.cone ? 2.0 : 1.0;
    return th;
  }
};

struct AtomEval {
  double f, d1, d2;
  bool ok;
};

AtomEval eval_atom(AtomKind kind, double w, double a) {
  switch (kind) {
    case AtomKind::kSquare:
      return {w * a * a, 2.0 * w * a, 2.0 * w, true};
    case AtomKind::kPositiveCube: {
      const double p = std::max(a, 0.0);
      return {w * p * p * p, 3.0 * w * p * p, 6.0 * w * p, true};
    }
    case AtomKind::kInverseSquare:
      if (!(a > 0.0)) return {0, 0, 0, false};
      return {w / (a * a), -2.0 * w / (a * a * a), 6.0 * w / (a * a * a * a), true};
    case AtomKind::kNegativeLog:
      if (!(a > 0.0)) return {0, 0, 0, false};
      return {-w * std::log(a), -w / a, w / (a * a), true};
  }
  return {0, 0, 0, false};
}

// Slack of a term (> 0 strictly inside): -g for scalars, bound^2 - |u|^2
// for cones. NaN outside the domain.
double term_slack(const Term& t, const VectorXd& x) {
  if (t.cone) {
    const double beta = t.affine.eval(x);
    if (!(beta > 0.0)) return kNaN;
    double sq = 0.0;
    for (const RExpr& e : t.args) {
      const double u = e.eval(x);
      sq += u * u;
    }
    // Factored form keeps relative accuracy near the cone boundary.
    const double nrm = std::sqrt(sq);
    const double w = (beta - nrm) * (beta + nrm);
    return w > 0.0 ? w : kNaN;
  }
  double g = t.affine.eval(x);
  for (const RAtom& a : t.atoms) {
    const AtomEval ae = eval_atom(a.kind, a.w, a.arg.eval(x));
    if (!ae.ok) return kNaN;
    g += ae.f;
  }
  return -g > 0.0 ? -g : kNaN;
}

// Barrier value; +inf outside the domain.
double barrier_value(const BarrierProblem& bp, const VectorXd& x) {
  double phi = 0.0;
  for (const Term& t : bp.terms) {
    const double s = term_slack(t, x);
    if (std::isnan(s)) return std::numeric_limits<double>::infinity();
    phi -= std::log(s);
  }
  return phi;
}

struct Derivatives {
  VectorXd grad;
  VectorXd hdiag;
  std::vector<Triplet> hess;  // lower triangle, duplicates summed later
};

// Gradient (and Hessian when `with_hessian`) of the barrier. Returns false
// outside the domain.
bool barrier_derivatives(const BarrierProblem& bp, const VectorXd& x, bool with_hessian, Derivatives* out) {
  out->grad.setZero(bp.n);
  if (with_hessian) {
    out->hdiag.setZero(bp.n);
    out->hess.clear();
  }
  std::vector<double> g;
  std::vector<double> h;
  for (const Term& t : bp.terms) {
    const int m = static_cast<int>(t.support.size());
    g.assign(m, 0.0);
    if (with_hessian) h.assign(static_cast<std::size_t>(m) * m, 0.0);
    auto H = [&](int i, int j) -> double& { return h[static_cast<std::size_t>(i) * m + j]; };
    auto rank1 = [&](const std::vector<int>& pos, const std::vector<double>& val, double s) {
      for (std::size_t p = 0; p < pos.size(); ++p)
        for (std::size_t q = 0; q < pos.size(); ++q) H(pos[p], pos[q]) += s * val[p] * val[q];
    };
    double slack;
    if (t.cone) {
      const double beta = t.affine.eval(x);
      if (!(beta > 0.0)) return false;
      double sq = 0.0;
      std::vector<double> u(t.args.size());
      for (std::size_t k = 0; k < t.args.size(); ++k) {
        u[k] = t.args[k].eval(x);
        sq += u[k] * u[k];
      }
      const double nrm = std::sqrt(sq);
      const double w = (beta - nrm) * (beta + nrm);
      if (!(w > 0.0)) return false;
      slack = w;
      // grad w = 2 beta grad(beta) - 2 sum u_k grad(u_k)
      for (std::size_t p = 0; p < t.affine_pos.size(); ++p) g[t.affine_pos[p]] += 2.0 * beta * t.affine.val[p];
      for (std::size_t k = 0; k < t.args.size(); ++k)
        for (std::size_t p = 0; p < t.arg_pos[k].size(); ++p)
          g[t.arg_pos[k][p]] -= 2.0 * u[k] * t.args[k].val[p];
      if (with_hessian) {
        // -hess(w)/w + grad(w) grad(w)'/w^2
        rank1(t.affine_pos, t.affine.val, -2.0 / w);
        for (std::size_t k = 0; k < t.args.size(); ++k) rank1(t.arg_pos[k], t.args[k].val, 2.0 / w);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) H(i, j) += g[i] * g[j] / (w * w);
      }
      for (int i = 0; i < m; ++i) out->grad[t.support[i]] -= g[i] / w;
    } else {
      double val = t.affine.eval(x);
      for (std::size_t p = 0; p < t.affine_pos.size(); ++p) g[t.affine_pos[p]] += t.affine.val[p];
      for (const RAtom& a : t.atoms) {
        const AtomEval ae = eval_atom(a.kind, a.w, a.arg.eval(x));
        if (!ae.ok) return false;
        val += ae.f;
        for (std::size_t p = 0; p < a.pos.size(); ++p) g[a.pos[p]] += ae.d1 * a.arg.val[p];
        if (with_hessian && ae.d2 != 0.0) rank1(a.pos, a.arg.val, ae.d2);
      }
      slack = -val;
      if (!(slack > 0.0)) return false;
      if (with_hessian) {
        // hess(g)/(-g) + grad(g) grad(g)'/g^2
        for (double& e : h) e /= slack;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) H(i, j) += g[i] * g[j] / (slack * slack);
      }
      for (int i = 0; i < m; ++i) out->grad[t.support[i]] += g[i] / slack;
    }
    if (with_hessian) {
      for (int i = 0; i < m; ++i) {
        out->hdiag[t.support[i]] += H(i, i);
        for (int j = 0; j <= i; ++j) out->hess.emplace_back(t.support[i], t.support[j], H(i, j));
      }
    }
  }
  return true;
}

// Solves [H A'; A 0] [dx; w] = [-grad; -rp] with symmetric diagonal scaling,
// small quasi-definite regularization and iterative refinement.
class KktSolver {
 public:
  bool solve(const BarrierProblem& bp, const Derivatives& d, const VectorXd& rhs_x, const VectorXd& rhs_y,
             VectorXd* dx, VectorXd* w) {
    const int n = bp.n;
    const int m = static_cast<int>(bp.a.rows());
    VectorXd s(n);
    for (int i = 0; i < n; ++i) s[i] = d.hdiag[i] > 0.0 ? 1.0 / std::sqrt(d.hdiag[i]) : 1.0;
    VectorXd r = VectorXd::Zero(m);
    for (int k = 0; k < bp.a.outerSize(); ++k)
      for (SpMat::InnerIterator it(bp.a, k); it; ++it)
        r[it.row()] = std::max(r[it.row()], std::abs(it.value() * s[it.col()]));
    for (int k = 0; k < m; ++k) r[k] = r[k] > 0.0 ? 1.0 / r[k] : 1.0;

    triplets_.clear();
    triplets_.reserve(d.hess.size() + bp.a.nonZeros() + n + m);
    for (const Triplet& tr : d.hess) triplets_.emplace_back(tr.row(), tr.col(), tr.value() * s[tr.row()] * s[tr.col()]);
    for (int i = 0; i < n; ++i) triplets_.emplace_back(i, i, kReg);
    for (int k = 0; k < bp.a.outerSize(); ++k)
      for (SpMat::InnerIterator it(bp.a, k); it; ++it)
        triplets_.emplace_back(n + it.row(), it.col(), it.value() * r[it.row()] * s[it.col()]);
    for (int k = 0; k < m; ++k) triplets_.emplace_back(n + k, n + k, -kReg);
    kkt_.resize(n + m, n + m);
    kkt_.setFromTriplets(triplets_.begin(), triplets_.end());
    if (!analyzed_) {
      ldlt_.analyzePattern(kkt_);
      analyzed_ = true;
    }
    ldlt_.factorize(kkt_);
    if (ldlt_.info() != Eigen::Success) return false;

    VectorXd rhs(n + m);
    rhs.head(n) = rhs_x.cwiseProduct(s);
    rhs.tail(m) = rhs_y.cwiseProduct(r);
    VectorXd sol = ldlt_.solve(rhs);
    for (int it = 0; it < 20; ++it) {
      VectorXd kv = kkt_.selfadjointView<Eigen::Lower>() * sol;
      kv.head(n) -= kReg * sol.head(n);
      kv.tail(m) += kReg * sol.tail(m);
      const VectorXd res = rhs - kv;
      if (res.lpNorm<Eigen::Infinity>() <= 1e-14 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) break;
      sol += ldlt_.solve(res);
    }
    if (!sol.allFinite()) return false;
    *dx = sol.head(n).cwiseProduct(s);
    *w = sol.tail(m).cwiseProduct(r);
    return true;
  }

 private:
  static constexpr double kReg = 1e-9;
  std::vector<Triplet> triplets_;
  SpMat kkt_;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
  bool analyzed_ = false;
};

enum class Phase { kOne, kTwo };

struct BarrierOutcome {
  SolveStatus status = SolveStatus::kMaxIter;
  VectorXd x;
  VectorXd nu;
  double t = 0.0;
  double gap = std::numeric_limits<double>::infinity();
  std::string message;
};

double eq_residual(const BarrierProblem& bp, const VectorXd& x) {
  if (bp.a.rows() == 0) return 0.0;
  return (bp.a * x - bp.b).lpNorm<Eigen::Infinity>();
}

// Follows the central path from a point inside every inequality domain.
// Phase one stops as soon as the slack variable (last coordinate) is
// negative with the equalities met, or when infeasibility is certified.
BarrierOutcome run_barrier(const BarrierProblem& bp, VectorXd x, double t, Phase phase, const SolverOptions& opt,
                           int* iterations) {
  const double theta = bp.theta();
  const double eq_tol = std::min(1e-9, 0.01 * opt.feas_tol);
  const int m = static_cast<int>(bp.a.rows());
  VectorXd nu = VectorXd::Zero(m);
  Derivatives d;
  Derivatives dtrial;
  KktSolver kkt;
  BarrierOutcome out;
  VectorXd dx;
  VectorXd w;

  auto finish = [&](SolveStatus st, std::string msg) {
    out.status = st;
    out.x = x;
    out.nu = nu;
    out.t = t;
    out.gap = theta / t;
    out.message = std::move(msg);
    return out;
  };
  auto phase_one_done = [&]() { return phase == Phase::kOne && x[bp.n - 1] < 0.0 && eq_residual(bp, x) <= eq_tol; };

  // Extra Newton steps at the final t: the loose centering tolerance leaves
  // a gradient that is small in the Newton norm but not in the Euclidean one.
  int polish_steps = -1;
  for (;;) {
    // Centering.
    for (;;) {
      if (polish_steps >= 0 && (polish_steps >= 3 || *iterations >= opt.max_iterations)) break;
      if (*iterations >= opt.max_iterations) return finish(SolveStatus::kMaxIter, "iteration limit reached");
      if (!barrier_derivatives(bp, x, true, &d)) return finish(SolveStatus::kMaxIter, "left the barrier domain");
      const VectorXd grad_f = t * bp.c + d.grad;
      const VectorXd rp = m > 0 ? VectorXd(bp.a * x - bp.b) : VectorXd(VectorXd::Zero(0));
      const double rp_norm = m > 0 ? rp.lpNorm<Eigen::Infinity>() : 0.0;
      if (!kkt.solve(bp, d, -grad_f, -rp, &dx, &w))
        return finish(SolveStatus::kMaxIter, "KKT factorization failed");
      ++*iterations;

      if (rp_norm > eq_tol) {
        // Infeasible-start step: backtrack on the full residual norm.
        const VectorXd dnu = w - nu;
        auto residual_norm = [&](const VectorXd& xx, const VectorXd& vv, const Derivatives& dd) {
          VectorXd rd = t * bp.c + dd.grad;
          if (m > 0) rd += bp.a.transpose() * vv;
          const double r1 = rd.squaredNorm();
          const double r2 = m > 0 ? (bp.a * xx - bp.b).squaredNorm() : 0.0;
          return std::sqrt(r1 + r2);
        };
        const double r0 = residual_norm(x, nu, d);
        double alpha = 1.0;
        bool accepted = false;
        for (int k = 0; k < 60; ++k, alpha *= 0.5) {
          const VectorXd xn = x + alpha * dx;
          if (!barrier_derivatives(bp, xn, false, &dtrial)) continue;
          const VectorXd vn = nu + alpha * dnu;
          if (residual_norm(xn, vn, dtrial) <= (1.0 - 0.01 * alpha) * r0) {
            x = xn;
            nu = vn;
            accepted = true;
            break;
          }
        }
        if (!accepted) {
          if (phase == Phase::kOne) return finish(SolveStatus::kInfeasible, "equality constraints cannot be met");
          return finish(SolveStatus::kMaxIter, "line search failed on the equality residual");
        }
        if (phase_one_done()) return finish(SolveStatus::kOptimal, "strictly feasible point found");
        continue;
      }

      const double decrement = -grad_f.dot(dx);
      nu = w;
      if (polish_steps >= 0) ++polish_steps;
      if (decrement <= (polish_steps >= 0 ? 1e-14 : 2e-7)) break;
      const double phi0 = barrier_value(bp, x);
      const double slope = grad_f.dot(dx);
      const double cdx = bp.c.dot(dx);
      double alpha = 1.0;
      bool accepted = false;
      for (int k = 0; k < 80; ++k, alpha *= 0.5) {
        const VectorXd xn = x + alpha * dx;
        const double phi1 = barrier_value(bp, xn);
        if (!std::isfinite(phi1)) continue;
        if (t * alpha * cdx + (phi1 - phi0) <= 0.01 * alpha * slope) {
          x = xn;
          accepted = true;
          break;
        }
      }
      if (!accepted) break;  // numerically centered
      if (phase_one_done()) return finish(SolveStatus::kOptimal, "strictly feasible point found");
    }

    const double gap = theta / t;
    if (polish_steps >= 0) return finish(SolveStatus::kOptimal, "optimal");
    if (phase == Phase::kOne) {
      const double s = x[bp.n - 1];
      if (s - gap > 0.0) return finish(SolveStatus::kInfeasible, "phase one certifies infeasibility");
      if (gap < 1e-12 * (1.0 + std::abs(s))) return finish(SolveStatus::kInfeasible, "no strictly feasible point");
    } else {
      const double f = bp.c.dot(x);
      if (gap <= opt.opt_tol * std::max(1.0, std::abs(f)) && eq_residual(bp, x) <= opt.feas_tol) {
        polish_steps = 0;
        continue;
      }
    }
    t *= opt.barrier_growth;
  }
}

struct Reduction {
  std::vector<int> reduced;   // original -> reduced index, -1 when fixed
  std::vector<int> original;  // reduced -> original
  std::vector<double> fixed;  // value for fixed variables
  std::vector<bool> is_fixed;
  std::vector<bool> row_eliminated;
  bool infeasible = false;
  std::string message;
};

Reduction presolve(const ConvexProgram& p, double feas_tol) {
  const int nv = p.variable_count();
  Reduction r;
  r.is_fixed.assign(nv, false);
  r.fixed.assign(nv, 0.0);
  r.row_eliminated.assign(p.constraint_count(), false);
  for (int i = 0; i < nv; ++i) {
    const Variable& v = p.variable(i);
    if (v.lower == v.upper) {
      r.is_fixed[i] = true;
      r.fixed[i] = v.lower;
    }
  }
  bool changed = true;
  while (changed && !r.infeasible) {
    changed = false;
    for (int ci = 0; ci < p.constraint_count(); ++ci) {
      const Constraint& c = p.constraints()[ci];
      if (c.kind != ConstraintKind::kEquality || r.row_eliminated[ci]) continue;
      double constant = c.affine.constant;
      std::vector<std::pair<int, double>> free_terms;
      for (const LinearTerm& t : c.affine.terms) {
        if (r.is_fixed[t.var]) {
          constant += t.coef * r.fixed[t.var];
        } else {
          auto it = std::find_if(free_terms.begin(), free_terms.end(), [&](const auto& ft) { return ft.first == t.var; });
          if (it == free_terms.end()) free_terms.emplace_back(t.var, t.coef);
          else it->second += t.coef;
        }
      }
      std::erase_if(free_terms, [](const auto& ft) { return ft.second == 0.0; });
      if (free_terms.empty()) {
        r.row_eliminated[ci] = true;
        if (std::abs(constant) > feas_tol) {
          r.infeasible = true;
          r.message = "equality " + c.label + " is inconsistent";
        }
        changed = true;
      } else if (free_terms.size() == 1) {
        const int var = free_terms[0].first;
        const double value = -constant / free_terms[0].second;
        const Variable& v = p.variable(var);
        if (value < v.lower - feas_tol || value > v.upper + feas_tol) {
          r.infeasible = true;
          r.message = "equality " + c.label + " conflicts with the bounds of " + v.name;
        }
        r.is_fixed[var] = true;
        r.fixed[var] = value;
        r.row_eliminated[ci] = true;
        changed = true;
      }
    }
  }
  r.reduced.assign(nv, -1);
  for (int i = 0; i < nv; ++i) {
    if (!r.is_fixed[i]) {
      r.reduced[i] = static_cast<int>(r.original.size());
      r.original.push_back(i);
    }
  }
  return r;
}

RExpr reduce(const LinearExpr& e, const Reduction& r) {
  RExpr out;
  out.c = e.constant;
  for (const LinearTerm& t : e.terms) {
    if (r.is_fixed[t.var]) out.c += t.coef * r.fixed[t.var];
    else out.add(r.reduced[t.var], t.coef);
  }
  out.merge();
  return out;
}

BarrierProblem build_barrier_problem(const ConvexProgram& p, const Reduction& r) {
  BarrierProblem bp;
  bp.n = static_cast<int>(r.original.size());
  bp.c = VectorXd::Zero(bp.n);
  const double sign = p.sense() == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  const RExpr obj = reduce(p.objective(), r);
  for (std::size_t k = 0; k < obj.idx.size(); ++k) bp.c[obj.idx[k]] += sign * obj.val[k];

  std::vector<Triplet> eq;
  std::vector<double> rhs;
  for (int ci = 0; ci < p.constraint_count(); ++ci) {
    const Constraint& c = p.constraints()[ci];
    switch (c.kind) {
      case ConstraintKind::kEquality: {
        if (r.row_eliminated[ci]) break;
        const RExpr e = reduce(c.affine, r);
        const int row = static_cast<int>(rhs.size());
        for (std::size_t k = 0; k < e.idx.size(); ++k) eq.emplace_back(row, e.idx[k], e.val[k]);
        rhs.push_back(-e.c);
        bp.eq_source.push_back(ci);
        break;
      }
      case ConstraintKind::kLessEqual:
      case ConstraintKind::kSmoothConvex: {
        Term t;
        t.source = ci;
        t.affine = reduce(c.affine, r);
        for (const Atom& a : c.atoms) t.atoms.push_back({a.kind, a.weight, reduce(a.arg, r), {}});
        bp.terms.push_back(std::move(t));
        break;
      }
      case ConstraintKind::kCone: {
        Term t;
        t.cone = true;
        t.source = ci;
        t.affine = reduce(c.affine, r);
        for (const LinearExpr& e : c.cone_args) t.args.push_back(reduce(e, r));
        bp.terms.push_back(std::move(t));
        break;
      }
    }
  }
  for (int j = 0; j < bp.n; ++j) {
    const Variable& v = p.variable(r.original[j]);
    if (std::isfinite(v.lower)) {
      Term t;
      t.origin = Origin::kLower;
      t.source = r.original[j];
      t.affine.c = v.lower;
      t.affine.add(j, -1.0);
      bp.terms.push_back(std::move(t));
    }
    if (std::isfinite(v.upper)) {
      Term t;
      t.origin = Origin::kUpper;
      t.source = r.original[j];
      t.affine.c = -v.upper;
      t.affine.add(j, 1.0);
      bp.terms.push_back(std::move(t));
    }
  }
  for (Term& t : bp.terms) t.finalize();
  bp.a.resize(static_cast<int>(rhs.size()), bp.n);
  bp.a.setFromTriplets(eq.begin(), eq.end());
  bp.b = Eigen::Map<VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  return bp;
}

// Variables without a finite bound get a wide box around the start x0.
// A zero-cost direction along which the barrier is unbounded (a free slack
// running off to -inf) would otherwise stall centering in either phase.
void add_safeguard_box(BarrierProblem* bp, const VectorXd& x0) {
  std::vector<bool> has_lower(bp->n, false);
  std::vector<bool> has_upper(bp->n, false);
  for (const Term& t : bp->terms) {
    if (t.origin == Origin::kLower) has_lower[t.affine.idx[0]] = true;
    if (t.origin == Origin::kUpper) has_upper[t.affine.idx[0]] = true;
  }
  for (int j = 0; j < bp->n; ++j) {
    const double radius = kBoxRadius * std::max(1.0, std::abs(x0[j]));
    if (!has_lower[j]) {
      Term t;
      t.origin = Origin::kBox;
      t.source = j;
      t.affine.c = x0[j] - radius;
      t.affine.add(j, -1.0);
      t.finalize();
      bp->terms.push_back(std::move(t));
    }
    if (!has_upper[j]) {
      Term t;
      t.origin = Origin::kBox;
      t.source = j;
      t.affine.c = -x0[j] - radius;
      t.affine.add(j, 1.0);
      t.finalize();
      bp->terms.push_back(std::move(t));
    }
  }
}

// Phase-one problem in (x, s): every inequality relaxed by s, s >= -1,
// minimize s. The safeguard box is not relaxed.
BarrierProblem phase_one_problem(const BarrierProblem& bp) {
  BarrierProblem p1;
  p1.n = bp.n + 1;
  const int s = bp.n;
  p1.c = VectorXd::Zero(p1.n);
  p1.c[s] = 1.0;
  p1.a = bp.a;
  p1.a.conservativeResize(bp.a.rows(), p1.n);
  p1.b = bp.b;
  p1.eq_source = bp.eq_source;
  p1.terms = bp.terms;
  for (Term& t : p1.terms) {
    if (t.origin == Origin::kBox) continue;
    t.affine.add(s, t.cone ? 1.0 : -1.0);
    t.finalize();
  }
  Term floor;
  floor.origin = Origin::kPhaseFloor;
  floor.affine.c = -1.0;
  floor.affine.add(s, -1.0);
  floor.finalize();
  p1.terms.push_back(std::move(floor));
  return p1;
}

// Largest amount by which a term is violated at x (scalar g, or |u| - bound).
double term_violation(const Term& t, const VectorXd& x) {
  if (t.cone) {
    double sq = 0.0;
    for (const RExpr& e : t.args) {
      const double u = e.eval(x);
      sq += u * u;
    }
    return std::sqrt(sq) - t.affine.eval(x);
  }
  double g = t.affine.eval(x);
  for (const RAtom& a : t.atoms) g += eval_atom(a.kind, a.w, a.arg.eval(x)).f;
  return g;
}

// Moves the start into the domain of every atom whose argument is a single
// positively weighted variable; returns false if some atom stays outside.
bool repair_domains(const BarrierProblem& bp, VectorXd* x) {
  for (const Term& t : bp.terms) {
    for (const RAtom& a : t.atoms) {
      if (a.kind != AtomKind::kInverseSquare && a.kind != AtomKind::kNegativeLog) continue;
      if (a.arg.eval(*x) > 0.0) continue;
      if (a.arg.idx.size() != 1 || !(a.arg.val[0] > 0.0)) return false;
      (*x)[a.arg.idx[0]] = (1.0 - a.arg.c) / a.arg.val[0];
    }
  }
  for (const Term& t : bp.terms)
    for (const RAtom& a : t.atoms)
      if ((a.kind == AtomKind::kInverseSquare || a.kind == AtomKind::kNegativeLog) && !(a.arg.eval(*x) > 0.0))
        return false;
  return true;
}

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kMaxIter: return "max_iter";
  }
  return "?";
}

SolverOptions SolverOptions::from_environment(SolverOptions base) {
  if (const char* env = std::getenv("UAVPE_SOLVER_MAX_ITER")) {
    const int cap = std::atoi(env);
    if (cap > 0) base.max_iterations = std::min(base.max_iterations, cap);
  }
  return base;
}

Solution solve(const ConvexProgram& p, const SolverOptions& options) {
  p.validate();
  const auto t_begin = std::chrono::steady_clock::now();
  Solution sol;
  sol.equality_multipliers.assign(p.constraint_count(), 0.0);
  auto stamp = [&]() {
    sol.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
  };

  const Reduction red = presolve(p, options.feas_tol);
  std::vector<double> full = p.start_point();
  for (int i = 0; i < p.variable_count(); ++i)
    if (red.is_fixed[i]) full[i] = red.fixed[i];
  auto expand = [&](const VectorXd& xr) {
    std::vector<double> v = full;
    for (std::size_t j = 0; j < red.original.size(); ++j) v[red.original[j]] = xr[static_cast<Eigen::Index>(j)];
    return v;
  };
  if (red.infeasible) {
    sol.status = SolveStatus::kInfeasible;
    sol.message = red.message;
    sol.values = full;
    sol.residual = kkt_residuals(p, sol).max_violation;
    stamp();
    return sol;
  }

  BarrierProblem bp = build_barrier_problem(p, red);
  VectorXd x(bp.n);
  for (int j = 0; j < bp.n; ++j) {
    const Variable& v = p.variable(red.original[j]);
    double s = v.start;
    // Pull starts strictly inside finite boxes.
    if (std::isfinite(v.lower) && std::isfinite(v.upper)) {
      const double margin = 1e-3 * (v.upper - v.lower);
      s = std::clamp(s, v.lower + margin, v.upper - margin);
    } else if (std::isfinite(v.lower)) {
      s = std::max(s, v.lower + 1e-6 * std::max(1.0, std::abs(v.lower)));
    } else if (std::isfinite(v.upper)) {
      s = std::min(s, v.upper - 1e-6 * std::max(1.0, std::abs(v.upper)));
    }
    x[j] = s;
  }
  if (!repair_domains(bp, &x)) {
    sol.status = SolveStatus::kInfeasible;
    sol.message = "start point outside an atom domain";
    sol.values = expand(x);
    sol.residual = kkt_residuals(p, sol).max_violation;
    stamp();
    return sol;
  }

  add_safeguard_box(&bp, x);

  int iterations = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (const Term& t : bp.terms) worst = std::max(worst, term_violation(t, x));
  const bool interior = bp.terms.empty() || worst < 0.0;
  const double eq_tol = std::min(1e-9, 0.01 * options.feas_tol);
  if (!interior || eq_residual(bp, x) > eq_tol) {
    const BarrierProblem p1 = phase_one_problem(bp);
    VectorXd x1(p1.n);
    x1.head(bp.n) = x;
    x1[bp.n] = worst + std::max(1.0, std::abs(worst));
    const BarrierOutcome o1 = run_barrier(p1, x1, 1.0, Phase::kOne, options, &iterations);
    if (o1.status != SolveStatus::kOptimal) {
      sol.status = o1.status;
      sol.message = "phase one: " + o1.message;
      sol.iterations = iterations;
      sol.values = expand(o1.x.head(bp.n));
      sol.objective = p.objective_value(sol.values);
      sol.residual = kkt_residuals(p, sol).max_violation;
      stamp();
      return sol;
    }
    x = o1.x.head(bp.n);
  }

  const double theta = bp.theta();
  const double f0 = bp.c.dot(x);
  const double t0 = theta > 0.0 ? std::clamp(theta / std::max(1.0, std::abs(f0)), 1e-3, 1e6) : 1.0;
  BarrierOutcome o2;
  if (bp.terms.empty()) {
    // Pure equality-constrained linear objective: one KKT solve decides.
    o2 = run_barrier(bp, x, 1.0, Phase::kTwo, options, &iterations);
  } else {
    o2 = run_barrier(bp, x, t0, Phase::kTwo, options, &iterations);
  }
  sol.status = o2.status;
  sol.message = o2.message;
  sol.iterations = iterations;
  sol.values = expand(o2.x);
  sol.objective = p.objective_value(sol.values);
  sol.gap = o2.gap;
  sol.barrier_parameter = o2.t;
  for (std::size_t k = 0; k < bp.eq_source.size(); ++k)
    sol.equality_multipliers[bp.eq_source[k]] = o2.nu[static_cast<Eigen::Index>(k)] / o2.t;
  sol.residual = kkt_residuals(p, sol).max_violation;
  if (sol.status == SolveStatus::kOptimal && sol.residual > options.feas_tol) {
    sol.status = SolveStatus::kMaxIter;
    sol.message = "converged but residual exceeds feas_tol";
  }
  stamp();
  return sol;
}

std::vector<int> KktReport::violated(double tol) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < constraint_violation.size(); ++i)
    if (constraint_violation[i] > tol) out.push_back(static_cast<int>(i));
  return out;
}

KktReport kkt_residuals(const ConvexProgram& p, const Solution& sol) {
  KktReport rep;
  const std::vector<double>& x = sol.values;
  if (static_cast<int>(x.size()) != p.variable_count())
    throw std::invalid_argument("kkt_residuals: solution size does not match the program");
  rep.constraint_violation.assign(p.constraint_count(), 0.0);
  rep.bound_violation.assign(p.variable_count(), 0.0);
  for (int ci = 0; ci < p.constraint_count(); ++ci) {
    const double v = std::max(0.0, p.constraints()[ci].violation(x));
    rep.constraint_violation[ci] = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    if (rep.constraint_violation[ci] > rep.max_violation) {
      rep.max_violation = rep.constraint_violation[ci];
      rep.worst_constraint = ci;
    }
  }
  for (int i = 0; i < p.variable_count(); ++i) {
    const Variable& v = p.variable(i);
    rep.bound_violation[i] = std::max({0.0, v.lower - x[i], x[i] - v.upper});
    if (rep.bound_violation[i] > rep.max_violation) {
      rep.max_violation = rep.bound_violation[i];
      rep.worst_constraint = -1;
    }
  }

  const double t = sol.barrier_parameter;
  if (!(t > 0.0) || sol.equality_multipliers.size() != static_cast<std::size_t>(p.constraint_count()))
    return rep;
  rep.has_multipliers = true;

  // Free variables are those not pinned by bounds or singleton equalities.
  const Reduction red = presolve(p, std::numeric_limits<double>::infinity());
  std::vector<double> grad(p.variable_count(), 0.0);
  const double sign = p.sense() == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  for (const LinearTerm& lt : p.objective().terms) grad[lt.var] += sign * lt.coef;
  double compl_sum = 0.0;
  auto add_expr = [&](const LinearExpr& e, double scale) {
    for (const LinearTerm& lt : e.terms) grad[lt.var] += scale * lt.coef;
  };
  for (int ci = 0; ci < p.constraint_count(); ++ci) {
    const Constraint& c = p.constraints()[ci];
    switch (c.kind) {
      case ConstraintKind::kEquality:
        add_expr(c.affine, sol.equality_multipliers[ci]);
        break;
      case ConstraintKind::kLessEqual:
      case ConstraintKind::kSmoothConvex: {
        const double g = c.violation(x);
        const double lambda = 1.0 / (t * -g);
        compl_sum += lambda * -g;
        add_expr(c.affine, lambda);
        for (const Atom& a : c.atoms) {
          const AtomEval ae = eval_atom(a.kind, a.weight, a.arg.evaluate(x));
          add_expr(a.arg, lambda * ae.d1);
        }
        break;
      }
      case ConstraintKind::kCone: {
        const double beta = c.affine.evaluate(x);
        double sq = 0.0;
        std::vector<double> u;
        for (const LinearExpr& e : c.cone_args) {
          u.push_back(e.evaluate(x));
          sq += u.back() * u.back();
        }
        const double w = beta * beta - sq;
        // Dual point z = (2/(t w)) (beta, -u) paired with (-beta, u).
        add_expr(c.affine, -2.0 * beta / (t * w));
        for (std::size_t k = 0; k < u.size(); ++k) add_expr(c.cone_args[k], 2.0 * u[k] / (t * w));
        compl_sum += 2.0 / t;
        break;
      }
    }
  }
  for (int i = 0; i < p.variable_count(); ++i) {
    if (red.is_fixed[i]) continue;
    const Variable& v = p.variable(i);
    if (std::isfinite(v.lower)) {
      grad[i] -= 1.0 / (t * (x[i] - v.lower));
      compl_sum += 1.0 / t;
    }
    if (std::isfinite(v.upper)) {
      grad[i] += 1.0 / (t * (v.upper - x[i]));
      compl_sum += 1.0 / t;
    }
  }
  double stat = 0.0;
  for (int i = 0; i < p.variable_count(); ++i)
    if (!red.is_fixed[i]) stat = std::max(stat, std::abs(grad[i]));
  rep.stationarity = stat;
  rep.complementarity = compl_sum;
  return rep;
}

double power_constraint_lhs(const PowerSlot& slot, double power) {
  const AffineBound ub = ub_rd1_power(slot.link, slot.h2_ed, slot.previous_power);
  return ub.evaluate({{"p_e", power}}) - destination_rate2(slot.link, slot.h2_ed, power);
}

PowerDecision solve_power_bisection(const PowerSlot& slot, double tol) {
  if (power_constraint_lhs(slot, 0.0) <= slot.rate_e) return {0.0, true};
  // The left-hand side is convex in P with its minimum at P^(j) + signal/h2.
  const double p_min = std::min(slot.max_power, slot.previous_power + slot.link.signal_d / slot.h2_ed);
  if (power_constraint_lhs(slot, p_min) > slot.rate_e) return {slot.max_power, false};
  double lo = 0.0;
  double hi = p_min;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (power_constraint_lhs(slot, mid) <= slot.rate_e) hi = mid;
    else lo = mid;
  }
  return {hi, true};
}

}  // namespace uavpe::opt
