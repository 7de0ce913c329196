// Primal barrier path-following method for relative entropy programs.
//
// Each entropy triple (nu, zeta, delta) carries the self-concordant barrier
//   -log(delta - nu log(nu/zeta)) - log nu - log zeta,
// linear inequalities carry -log(rhs - row.x), and nonnegative variables not
// covered by a triple carry -log x. Equalities are kept exactly inside the
// Newton KKT system. Phase I minimizes the total infeasibility sum(w) with
// one nonnegative slack per cone and inequality constraint; the decision
// against feas_threshold uses the certified minimum of that sum.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <set>

#include "sonc/rep.hpp"

namespace sonc {

namespace {

// All path-following linear algebra runs in extended precision: the barrier
// Hessian carries 1/u^2 entries, and at duality gaps near 1e-10 the reduced
// Newton direction loses its sign in plain double.
using Scalar = long double;
using SpMat = Eigen::SparseMatrix<Scalar>;
using Triplet = Eigen::Triplet<Scalar>;
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

constexpr Scalar kDivergenceLimit = 1e13;

// Barrier model over n variables. In phase I, constraint k is relaxed by its
// own slack variable slack_of[k] (an index >= base problem size).
struct Model {
  int n = 0;
  std::vector<EntropyTriple> triples;
  std::vector<std::pair<SparseRow, double>> ineqs;
  std::vector<int> logged;    // standalone -log x terms
  std::vector<int> tethered;  // nonnegative vars carrying the linear tether
  Scalar tether = 1.0L;
  std::vector<int> cone_slack;      // per-triple slack var, empty in phase II
  std::vector<int> ineq_slack;      // per-inequality slack var

  bool relaxed() const { return !cone_slack.empty() || !ineq_slack.empty(); }

  Scalar barrier_complexity() const {
    return 3.0L * static_cast<Scalar>(triples.size()) + static_cast<Scalar>(ineqs.size()) +
           static_cast<Scalar>(logged.size());
  }

  // The strict feasible region of an assembled REP can contain rays along
  // which every log term decreases (paired coefficient blocks inflating in
  // step). The tether mu * sum(x) over the nonnegative variables grows
  // linearly along any such ray, so the barrier subproblems stay bounded,
  // while on the central path its bias enters as mu/t and vanishes.
  Scalar tether_value(const Vec& x) const {
    Scalar s = 0;
    for (int v : tethered) s += x[v];
    return tether * s;
  }

  Scalar cone_arg(const Vec& x, std::size_t t) const {
    const auto& tr = triples[t];
    Scalar nu = x[tr.nu], zeta = x[tr.zeta];
    Scalar u = x[tr.delta] - nu * (std::log(nu) - std::log(zeta));
    if (!cone_slack.empty()) u += x[cone_slack[t]];
    return u;
  }

  Scalar ineq_arg(const Vec& x, std::size_t k) const {
    const auto& [row, rhs] = ineqs[k];
    Scalar w = rhs;
    for (const auto& [idx, coeff] : row) w -= coeff * x[idx];
    if (!ineq_slack.empty()) w += x[ineq_slack[k]];
    return w;
  }

  bool domain_ok(const Vec& x) const {
    for (int v : logged)
      if (x[v] <= 0.0) return false;
    for (std::size_t t = 0; t < triples.size(); ++t) {
      if (x[triples[t].nu] <= 0.0 || x[triples[t].zeta] <= 0.0) return false;
      if (cone_arg(x, t) <= 0.0) return false;
    }
    for (std::size_t k = 0; k < ineqs.size(); ++k)
      if (ineq_arg(x, k) <= 0.0) return false;
    return true;
  }

  Scalar value(const Vec& x) const {
    Scalar phi = tether_value(x);
    for (int v : logged) phi -= std::log(x[v]);
    for (std::size_t t = 0; t < triples.size(); ++t)
      phi -= std::log(cone_arg(x, t)) + std::log(x[triples[t].nu]) + std::log(x[triples[t].zeta]);
    for (std::size_t k = 0; k < ineqs.size(); ++k) phi -= std::log(ineq_arg(x, k));
    return phi;
  }

  void grad_hess(const Vec& x, Vec& grad, std::vector<Triplet>& hess) const {
    grad.setZero(n);
    hess.clear();

    for (int v : logged) {
      grad[v] -= 1.0 / x[v];
      hess.emplace_back(v, v, 1.0 / (x[v] * x[v]));
    }
    for (int v : tethered) grad[v] += tether;

    for (std::size_t t = 0; t < triples.size(); ++t) {
      const auto& tr = triples[t];
      Scalar nu = x[tr.nu], zeta = x[tr.zeta];
      Scalar logratio = std::log(nu) - std::log(zeta);
      Scalar u = cone_arg(x, t);

      int idx[4] = {tr.nu, tr.zeta, tr.delta, -1};
      Scalar du[4] = {-(logratio + 1.0L), nu / zeta, 1.0L, 1.0L};
      int count = 3;
      if (!cone_slack.empty()) {
        idx[3] = cone_slack[t];
        count = 4;
      }

      for (int a = 0; a < count; ++a) grad[idx[a]] -= du[a] / u;
      grad[tr.nu] -= 1.0 / nu;
      grad[tr.zeta] -= 1.0 / zeta;

      for (int a = 0; a < count; ++a)
        for (int b = 0; b < count; ++b)
          hess.emplace_back(idx[a], idx[b], du[a] * du[b] / (u * u));
      // -(1/u) * hess(u) on the (nu, zeta) block, which is PSD.
      hess.emplace_back(tr.nu, tr.nu, 1.0 / (u * nu));
      hess.emplace_back(tr.nu, tr.zeta, -1.0 / (u * zeta));
      hess.emplace_back(tr.zeta, tr.nu, -1.0 / (u * zeta));
      hess.emplace_back(tr.zeta, tr.zeta, nu / (u * zeta * zeta));
      hess.emplace_back(tr.nu, tr.nu, 1.0 / (nu * nu));
      hess.emplace_back(tr.zeta, tr.zeta, 1.0 / (zeta * zeta));
    }

    for (std::size_t k = 0; k < ineqs.size(); ++k) {
      const auto& [row, rhs] = ineqs[k];
      Scalar w = ineq_arg(x, k);
      auto each_entry = [&](auto&& fn) {
        for (const auto& [idx, coeff] : row) fn(idx, static_cast<Scalar>(-coeff));
        if (!ineq_slack.empty()) fn(ineq_slack[k], Scalar(1));
      };
      each_entry([&](int i, Scalar dw) { grad[i] -= dw / w; });
      each_entry([&](int i, Scalar dwi) {
        each_entry([&](int j, Scalar dwj) { hess.emplace_back(i, j, dwi * dwj / (w * w)); });
      });
    }
  }
};

struct Equalities {
  SpMat A;  // m x n
  Vec b;
  int rows() const { return static_cast<int>(A.rows()); }
};

Equalities build_equalities(const Rep& rep, int n_ext) {
  Equalities eq;
  const auto& rows = rep.eqs();
  eq.A.resize(static_cast<int>(rows.size()), n_ext);
  eq.b.resize(static_cast<int>(rows.size()));
  std::vector<Triplet> trips;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& [idx, coeff] : rows[r].first)
      trips.emplace_back(static_cast<int>(r), idx, coeff);
    eq.b[static_cast<int>(r)] = rows[r].second;
  }
  eq.A.setFromTriplets(trips.begin(), trips.end());
  return eq;
}

// Factored least-squares projector onto {A x = b} and onto null(A).
class EqProjector {
 public:
  explicit EqProjector(const Equalities& eq) : eq_(eq) {
    if (eq_.rows() == 0) {
      ok_ = true;
      return;
    }
    SpMat AAt = (eq_.A * SpMat(eq_.A.transpose())).pruned();
    for (int i = 0; i < AAt.rows(); ++i) AAt.coeffRef(i, i) += 1e-15L;
    chol_.compute(AAt);
    ok_ = chol_.info() == Eigen::Success;
  }

  bool ok() const { return ok_; }

  void project_point(Vec& x) const {
    if (eq_.rows() == 0) return;
    for (int round = 0; round < 3; ++round) {
      Vec r = eq_.A * x - eq_.b;
      if (r.lpNorm<Eigen::Infinity>() < 1e-16L) break;
      x -= eq_.A.transpose() * chol_.solve(r);
    }
  }

  // Removes the row-space component so that A dx = 0 to working precision;
  // without this, per-step solve error accumulates as equality drift.
  void project_direction(Vec& dx) const {
    if (eq_.rows() == 0) return;
    for (int round = 0; round < 2; ++round) {
      Vec r = eq_.A * dx;
      if (r.lpNorm<Eigen::Infinity>() < 1e-18L * (1.0L + dx.lpNorm<Eigen::Infinity>())) break;
      dx -= eq_.A.transpose() * chol_.solve(r);
    }
  }

 private:
  const Equalities& eq_;
  Eigen::SimplicialLDLT<SpMat> chol_;
  bool ok_ = false;
};

bool project_onto_equalities(const Equalities& eq, Vec& x) {
  EqProjector projector(eq);
  if (!projector.ok()) return false;
  projector.project_point(x);
  return true;
}

class KktSolver {
 public:
  KktSolver(const Equalities& eq, int n) : eq_(eq), n_(n) {}

  // Solves [H A'; A 0] [dx; y] = [-g; 0]. The system is symmetrically
  // equilibrated before the quasi-definite regularized factorization, and
  // iterative refinement against the unregularized scaled system removes the
  // regularization bias, which otherwise leaks eps * y into the equality
  // rows. Without the equilibration the barrier Hessian's 1/u^2 entries make
  // refinement useless at large path parameters.
  bool solve(const std::vector<Triplet>& hess, const Vec& grad, Vec& dx) {
    const int m = eq_.rows();
    const int dim = n_ + m;
    std::vector<Triplet> trips = hess;
    trips.reserve(hess.size() + 2 * eq_.A.nonZeros());
    for (int k = 0; k < eq_.A.outerSize(); ++k)
      for (SpMat::InnerIterator it(eq_.A, k); it; ++it) {
        trips.emplace_back(n_ + static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        trips.emplace_back(static_cast<int>(it.col()), n_ + static_cast<int>(it.row()), it.value());
      }

    Vec row_max = Vec::Zero(dim);
    for (const auto& t : trips)
      row_max[t.row()] = std::max(row_max[t.row()], std::abs(t.value()));
    Vec d(dim);
    for (int i = 0; i < dim; ++i)
      d[i] = row_max[i] > 0 ? Scalar(1) / std::sqrt(row_max[i]) : Scalar(1);

    std::vector<Triplet> scaled;
    scaled.reserve(trips.size());
    for (const auto& t : trips)
      scaled.emplace_back(t.row(), t.col(), t.value() * d[t.row()] * d[t.col()]);
    SpMat plain(dim, dim);
    plain.setFromTriplets(scaled.begin(), scaled.end());

    Vec rhs = Vec::Zero(dim);
    rhs.head(n_) = -grad;
    Vec rhs_scaled = rhs.cwiseProduct(d);
    const Scalar rhs_scale = 1.0L + rhs_scaled.lpNorm<Eigen::Infinity>();

    Scalar reg = 0;
    for (int attempt = 0; attempt < 4; ++attempt, reg = std::max(1e-13L, reg * 1e3L)) {
      std::vector<Triplet> all = scaled;
      if (reg > 0) {
        for (int i = 0; i < n_; ++i) all.emplace_back(i, i, reg);
        for (int i = n_; i < dim; ++i) all.emplace_back(i, i, -reg);
      }
      SpMat kkt(dim, dim);
      kkt.setFromTriplets(all.begin(), all.end());
      kkt.makeCompressed();
      Eigen::SparseLU<SpMat> lu(kkt);
      if (lu.info() != Eigen::Success) continue;
      Vec sol = lu.solve(rhs_scaled);
      if (!sol.allFinite()) continue;
      Scalar resid_norm = 0;
      for (int round = 0; round < 4; ++round) {
        Vec resid = rhs_scaled - plain * sol;
        resid_norm = resid.lpNorm<Eigen::Infinity>();
        if (resid_norm <= 1e-17L * rhs_scale) break;
        Vec corr = lu.solve(resid);
        if (!corr.allFinite()) break;
        sol += corr;
      }
      if (resid_norm > 1e-10L * rhs_scale || !sol.allFinite()) {
        if (std::getenv("SONC_SOLVER_TRACE"))
          std::fprintf(stderr, "    [kkt attempt reg=%.1Le resid=%.3Le scale=%.3Le]\n", reg,
                       resid_norm, rhs_scale);
        continue;
      }
      dx = sol.head(n_).cwiseProduct(d.head(n_));
      return true;
    }
    return false;
  }

 private:
  const Equalities& eq_;
  int n_;
};

struct CenterResult {
  bool converged = false;
  bool diverged = false;
  bool stalled = false;
  int steps = 0;
};

// Damped Newton for min t*c.x + barrier(x) subject to the equalities.
CenterResult center(const Model& model, const Equalities& eq, const EqProjector& projector,
                    const Vec& c, Scalar t, Vec& x, int step_budget, Scalar lambda2_tol,
                    const std::function<bool(const Vec&)>& early_stop) {
  CenterResult result;
  KktSolver kkt(eq, model.n);
  Vec grad;
  std::vector<Triplet> hess;
  Scalar best_lambda2 = std::numeric_limits<Scalar>::infinity();
  int no_progress = 0;
  while (result.steps < step_budget) {
    model.grad_hess(x, grad, hess);
    Vec full_grad = grad + t * c;
    Vec dx;
    if (!kkt.solve(hess, full_grad, dx)) {
      result.stalled = true;
      return result;
    }
    projector.project_direction(dx);
    Scalar lambda2 = -full_grad.dot(dx);
    if (std::getenv("SONC_SOLVER_TRACE") && result.steps == 0)
      std::fprintf(stderr, "  [round t=%.3Le first lambda2=%.6Le]\n", t, lambda2);
    if (!dx.allFinite()) {
      result.stalled = true;
      return result;
    }
    if (lambda2 <= 0) {
      // A slightly negative decrement is convergence noise; a substantial
      // one means the Newton system was solved too poorly to trust.
      if (lambda2 > -10.0L * lambda2_tol)
        result.converged = true;
      else
        result.stalled = true;
      return result;
    }
    if (lambda2 / 2.0 <= lambda2_tol) {
      result.converged = true;
      return result;
    }
    // The decrement bottoms out at the float noise floor of the KKT solve;
    // once it stops improving inside the quadratic zone, the iterate is as
    // centered as the arithmetic allows.
    if (lambda2 < 0.8 * best_lambda2) {
      best_lambda2 = lambda2;
      no_progress = 0;
    } else if (++no_progress >= 4 && best_lambda2 < 0.5) {
      result.converged = true;
      return result;
    }

    Scalar phi0 = t * c.dot(x) + model.value(x);
    Scalar slope = full_grad.dot(dx);
    // Armijo backtracking down to the self-concordant damped step 1/(1+l),
    // which still guarantees progress on barrier cliffs where the domain
    // caps the step far below 1.
    Scalar alpha_sc = 1.0L / (1.0L + std::sqrt(lambda2));
    Scalar alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 70 && alpha >= alpha_sc; ++bt) {
      Vec trial = x + alpha * dx;
      if (model.domain_ok(trial)) {
        Scalar phi = t * c.dot(trial) + model.value(trial);
        if (phi <= phi0 + 0.25L * alpha * slope) {
          accepted = true;
          break;
        }
      }
      alpha *= 0.5L;
    }
    if (!accepted) {
      alpha = alpha_sc;
      for (int bt = 0; bt < 60; ++bt) {
        Vec trial = x + alpha * dx;
        if (model.domain_ok(trial)) {
          Scalar phi = t * c.dot(trial) + model.value(trial);
          if (phi < phi0) {
            accepted = true;
            break;
          }
        }
        alpha *= 0.5L;
      }
    }
    if (!accepted) {
      result.stalled = true;
      return result;
    }
    if (std::getenv("SONC_SOLVER_TRACE2")) {
      int arg = 0;
      Scalar best = 0;
      for (int i = 0; i < model.n; ++i)
        if (std::abs(alpha * dx[i]) > best) {
          best = std::abs(alpha * dx[i]);
          arg = i;
        }
      std::fprintf(stderr, "    move var=%d delta=%+.3Le to=%.3Le\n", arg,
                   (long double)(alpha * dx[arg]), (long double)(x[arg] + alpha * dx[arg]));
    }
    x += alpha * dx;
    ++result.steps;
    if (std::getenv("SONC_SOLVER_TRACE"))
      std::fprintf(stderr, "  t=%.3Le lambda2=%.3Le alpha=%.3Le phi0=%.6Le\n", t, lambda2, alpha,
                   phi0);

    if (x.lpNorm<Eigen::Infinity>() > kDivergenceLimit) {
      result.diverged = true;
      return result;
    }
    if (early_stop && early_stop(x)) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

struct PhaseOutcome {
  enum Kind { Interior, BoundaryFeasible, Infeasible, Limit, Diverged } kind = Limit;
  Vec x;               // base variables only
  Scalar slack = 0.0;  // final total infeasibility
  bool synth_failed = false;
};

// Starting point: equalities exact, positive variables clear of the boundary.
// Violated coordinates are pulled up through repeated projections.
bool synthesize_start(const Equalities& eq, const std::vector<int>& positives, int n, Vec& x) {
  Vec ref = Vec::Zero(n);
  for (int v : positives) ref[v] = 1.0;
  const Scalar floor = 1e-3;
  for (int round = 0; round < 80; ++round) {
    x = ref;
    if (!project_onto_equalities(eq, x)) return false;
    bool ok = true;
    for (int v : positives)
      if (x[v] < floor) {
        ok = false;
        ref[v] += 2.0L * (floor - x[v]) + 0.1L;
      }
    if (ok) return true;
  }
  return false;
}

PhaseOutcome run_phase1(const Model& base, const Equalities& eq_base, const SolveOptions& opts,
                        int& iterations) {
  PhaseOutcome outcome;
  const int n = base.n;
  const int num_slacks = static_cast<int>(base.triples.size() + base.ineqs.size());
  const int n_ext = n + num_slacks;

  std::vector<int> positives = base.logged;
  for (const auto& t : base.triples) {
    positives.push_back(t.nu);
    positives.push_back(t.zeta);
  }
  std::sort(positives.begin(), positives.end());
  positives.erase(std::unique(positives.begin(), positives.end()), positives.end());

  Vec x0;
  if (!synthesize_start(eq_base, positives, n, x0)) {
    outcome.synth_failed = true;
    return outcome;
  }
  if (eq_base.rows() > 0) {
    Vec resid = eq_base.A * x0 - eq_base.b;
    Scalar scale = 1.0L + eq_base.b.lpNorm<Eigen::Infinity>();
    if (std::getenv("SONC_SOLVER_TRACE"))
      std::fprintf(stderr, "[phase1] synth residual=%.3Le scale=%.3Le |x0|=%.3Le\n",
                   resid.lpNorm<Eigen::Infinity>(), scale, x0.lpNorm<Eigen::Infinity>());
    if (resid.lpNorm<Eigen::Infinity>() > 1e-8L * scale) {
      outcome.kind = PhaseOutcome::Infeasible;  // inconsistent equalities
      outcome.slack = resid.lpNorm<Eigen::Infinity>();
      return outcome;
    }
  }

  // Free delta variables (not pinned by any equality) start with unit cone
  // slack, so only genuinely linked constraints start violated.
  {
    std::vector<bool> in_eq(static_cast<std::size_t>(n), false);
    for (int k = 0; k < eq_base.A.outerSize(); ++k)
      for (SpMat::InnerIterator it(eq_base.A, k); it; ++it)
        in_eq[static_cast<std::size_t>(it.col())] = true;
    for (const auto& t : base.triples) {
      if (in_eq[static_cast<std::size_t>(t.delta)]) continue;
      Scalar nu = x0[t.nu], zeta = x0[t.zeta];
      Scalar k = nu * (std::log(nu) - std::log(zeta));
      x0[t.delta] = std::max(x0[t.delta], k + 1.0L);
    }
  }

  Model model = base;
  model.n = n_ext;
  for (std::size_t t = 0; t < base.triples.size(); ++t)
    model.cone_slack.push_back(n + static_cast<int>(t));
  for (std::size_t k = 0; k < base.ineqs.size(); ++k)
    model.ineq_slack.push_back(n + static_cast<int>(base.triples.size() + k));
  for (int s = n; s < n_ext; ++s) model.logged.push_back(s);

  Equalities eq = eq_base;
  eq.A.conservativeResize(eq.A.rows(), n_ext);
  EqProjector projector(eq);
  if (!projector.ok()) {
    outcome.synth_failed = true;
    return outcome;
  }

  // Initial slacks cover the violations with unit margin.
  // `base` has no slack columns, so its arguments are the unrelaxed ones.
  Vec x(n_ext);
  x.head(n) = x0;
  Scalar v0 = 0.0;
  for (std::size_t t = 0; t < base.triples.size(); ++t)
    v0 = std::max(v0, -base.cone_arg(x0, t));
  for (std::size_t k = 0; k < base.ineqs.size(); ++k)
    v0 = std::max(v0, -base.ineq_arg(x0, k));
  for (int s = 0; s < num_slacks; ++s) x[n + s] = v0 + 1.0;

  Vec c = Vec::Zero(n_ext);
  for (int s = n; s < n_ext; ++s) c[s] = 1.0;

  const Scalar exit_margin = 1e-4L * (1.0L + v0);
  auto strictly_feasible = [&](const Vec& point) {
    Vec head = point.head(n);
    for (std::size_t t = 0; t < base.triples.size(); ++t)
      if (base.cone_arg(head, t) <= exit_margin) return false;
    for (std::size_t k = 0; k < base.ineqs.size(); ++k)
      if (base.ineq_arg(head, k) <= exit_margin) return false;
    return true;
  };
  if (num_slacks == 0 || strictly_feasible(x)) {
    outcome.kind = PhaseOutcome::Interior;
    outcome.x = x0;
    return outcome;
  }

  const Scalar complexity = model.barrier_complexity();
  const Scalar gap_target =
      std::min({Scalar(1e-9), Scalar(opts.tol), Scalar(0.01) * Scalar(opts.feas_threshold)});
  Scalar t = std::max(Scalar(1), complexity / (1.0L + c.dot(x)));
  bool converged = false;

  while (iterations < opts.max_iter) {
    auto res = center(model, eq, projector, c, t, x, opts.max_iter - iterations, Scalar(1e-8),
                      strictly_feasible);
    iterations += res.steps;
    if (res.diverged) {
      outcome.kind = PhaseOutcome::Diverged;
      return outcome;
    }
    if (strictly_feasible(x)) {
      outcome.kind = PhaseOutcome::Interior;
      outcome.x = x.head(n);
      outcome.slack = 0.0;
      return outcome;
    }
    Scalar gap = 1.5L * (complexity + model.tether_value(x)) / t;
    if (gap <= gap_target && res.converged) {
      converged = true;
      break;
    }
    if (res.stalled) {
      if (gap <= 1e3L * gap_target) {
        converged = true;  // close enough for the threshold decision below
        break;
      }
      outcome.x = x.head(n);
      outcome.slack = c.dot(x);
      return outcome;  // Limit
    }
    t *= 10.0L;
  }

  Scalar sw = c.dot(x);
  Scalar gap = 1.5L * (complexity + model.tether_value(x)) / t;
  outcome.x = x.head(n);
  outcome.slack = sw;
  if (!converged) return outcome;  // Limit: budget exhausted
  if (sw <= static_cast<Scalar>(opts.feas_threshold))
    outcome.kind = PhaseOutcome::BoundaryFeasible;
  else if (sw - gap > static_cast<Scalar>(opts.feas_threshold))
    outcome.kind = PhaseOutcome::Infeasible;
  return outcome;
}

}  // namespace

Solution solve(const Rep& rep, const SolveOptions& opts) {
  Solution sol;
  const int n = rep.num_vars();
  sol.x.assign(static_cast<std::size_t>(n), 0.0);

  Model model;
  model.n = n;
  model.triples = rep.triples();
  model.ineqs = rep.ineqs();
  {
    std::set<int> covered;
    for (const auto& t : model.triples) {
      covered.insert(t.nu);
      covered.insert(t.zeta);
    }
    for (int v : rep.nonneg_vars())
      if (!covered.count(v)) model.logged.push_back(v);
  }
  for (int v : rep.nonneg_vars()) model.tethered.push_back(v);

  Vec c = Vec::Zero(n);
  for (const auto& [idx, coeff] : rep.objective()) c[idx] += coeff;
  const bool pure_feasibility = (n == 0) || (c.lpNorm<Eigen::Infinity>() == 0.0);

  Equalities eq = build_equalities(rep, n);

  if (n == 0) {
    sol.status = SolveStatus::Optimal;
    return sol;
  }

  // A variable with objective weight but no constraint coverage at all is a
  // structurally unbounded ray.
  {
    std::vector<bool> covered_any(static_cast<std::size_t>(n), false);
    for (const auto& [row, rhs] : rep.eqs())
      for (const auto& [idx, coeff] : row) covered_any[static_cast<std::size_t>(idx)] = true;
    for (const auto& [row, rhs] : rep.ineqs())
      for (const auto& [idx, coeff] : row) covered_any[static_cast<std::size_t>(idx)] = true;
    for (const auto& t : rep.triples())
      for (int idx : {t.nu, t.zeta, t.delta}) covered_any[static_cast<std::size_t>(idx)] = true;
    for (int v : rep.nonneg_vars()) covered_any[static_cast<std::size_t>(v)] = true;
    for (int i = 0; i < n; ++i)
      if (c[i] != 0.0 && !covered_any[static_cast<std::size_t>(i)]) {
        sol.status = SolveStatus::IllPosed;
        return sol;
      }
  }

  int iterations = 0;
  PhaseOutcome phase1 = run_phase1(model, eq, opts, iterations);
  sol.iterations = iterations;
  sol.phase1_slack = static_cast<double>(phase1.slack);

  auto finish = [&](const Vec& x) {
    for (int i = 0; i < n; ++i) sol.x[static_cast<std::size_t>(i)] = static_cast<double>(x[i]);
    sol.objective_value = static_cast<double>(c.dot(x));
    auto report = check_solution(rep, sol);
    sol.residuals.primal_lin = std::max(report.max_eq_float, report.max_ineq);
    sol.residuals.cone = report.max_cone;
  };

  switch (phase1.kind) {
    case PhaseOutcome::Infeasible:
      sol.status = SolveStatus::Infeasible;
      return sol;
    case PhaseOutcome::Diverged:
      sol.status = SolveStatus::IllPosed;
      return sol;
    case PhaseOutcome::Limit:
      sol.status = SolveStatus::IterationLimit;
      if (phase1.x.size() == n) finish(phase1.x);
      return sol;
    case PhaseOutcome::BoundaryFeasible:
      if (pure_feasibility) {
        sol.status = SolveStatus::Optimal;
        finish(phase1.x);
        return sol;
      }
      // No strict interior to run phase II from.
      sol.status = SolveStatus::IterationLimit;
      finish(phase1.x);
      return sol;
    case PhaseOutcome::Interior:
      break;
  }

  if (pure_feasibility) {
    sol.status = SolveStatus::Optimal;
    finish(phase1.x);
    return sol;
  }

  // Phase II along the central path.
  Vec x = phase1.x;
  EqProjector projector(eq);
  if (!projector.ok()) {
    sol.status = SolveStatus::IterationLimit;
    finish(x);
    return sol;
  }
  projector.project_point(x);
  if (std::getenv("SONC_SOLVER_TRACE")) {
    Scalar min_arg = std::numeric_limits<Scalar>::infinity(), min_pos = min_arg;
    for (std::size_t t = 0; t < model.triples.size(); ++t)
      min_arg = std::min(min_arg, model.cone_arg(x, t));
    for (std::size_t k = 0; k < model.ineqs.size(); ++k)
      min_arg = std::min(min_arg, model.ineq_arg(x, k));
    for (int v : model.logged) min_pos = std::min(min_pos, x[v]);
    for (const auto& t : model.triples) min_pos = std::min({min_pos, x[t.nu], x[t.zeta]});
    std::fprintf(stderr, "[phase2 start] min_arg=%.3Le min_pos=%.3Le |x|=%.3Le\n", min_arg,
                 min_pos, x.lpNorm<Eigen::Infinity>());
  }
  const Scalar complexity = std::max(Scalar(1), model.barrier_complexity());
  Scalar t = std::max(Scalar(1), complexity / (1.0L + std::abs(c.dot(x))));
  const Scalar obj_scale0 = 1.0L + std::abs(c.dot(x));
  int stall_rounds = 0;

  while (iterations < opts.max_iter) {
    auto res = center(model, eq, projector, c, t, x, opts.max_iter - iterations, Scalar(1e-5),
                      nullptr);
    iterations += res.steps;
    sol.iterations = iterations;
    if (res.diverged || std::abs(c.dot(x)) > kDivergenceLimit * obj_scale0) {
      sol.status = SolveStatus::IllPosed;
      finish(x);
      return sol;
    }
    // 1.5x covers the off-center correction at the centering tolerance above.
    Scalar gap = 1.5L * (complexity + model.tether_value(x)) / t;
    bool gap_ok = gap <= static_cast<Scalar>(opts.tol) * (1.0L + std::abs(c.dot(x)));
    if (gap_ok && res.converged) {
      sol.status = SolveStatus::Optimal;
      finish(x);
      return sol;
    }
    if (res.stalled) {
      if (++stall_rounds >= 3) {
        sol.status = gap_ok ? SolveStatus::Optimal : SolveStatus::IterationLimit;
        finish(x);
        return sol;
      }
    } else {
      stall_rounds = 0;
    }
    t *= 10.0L;
  }

  sol.status = SolveStatus::IterationLimit;
  finish(x);
  return sol;
}

}  // namespace sonc
