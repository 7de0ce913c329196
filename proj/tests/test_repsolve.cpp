#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "sonc/rep.hpp"

using namespace sonc;

namespace {

// minimize delta subject to nu = a, zeta = b, (nu, zeta, delta) in the cone.
Rep closed_form_instance(double a, double b) {
  Rep rep;
  int nu = rep.add_var("nu");
  int zeta = rep.add_var("zeta");
  int delta = rep.add_var("delta");
  rep.add_eq({{nu, 1.0}}, a);
  rep.add_eq({{zeta, 1.0}}, b);
  rep.add_entropy_triple(nu, zeta, delta);
  rep.set_objective({{delta, 1.0}});
  return rep;
}

}  // namespace

TEST_CASE("modeling errors") {
  Rep rep;
  int a = rep.add_var();
  int b = rep.add_var();
  int c = rep.add_var();
  CHECK_THROWS_AS(rep.add_entropy_triple(a, a, c), std::invalid_argument);
  CHECK_THROWS_AS(rep.add_entropy_triple(a, b, 7), std::out_of_range);
  rep.add_entropy_triple(a, b, c);
  CHECK_THROWS_AS(rep.add_entropy_triple(a, b, c), std::invalid_argument);
  CHECK(rep.nonneg_vars().count(a) == 1);
  CHECK(rep.nonneg_vars().count(b) == 1);
  CHECK(rep.nonneg_vars().count(c) == 0);
}

TEST_CASE("closed-form optimum: nu=1, zeta=e gives delta* = -1") {
  SolveOptions options;
  options.tol = 1e-10;
  Solution sol = solve(closed_form_instance(1.0, std::exp(1.0)), options);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(std::abs(sol.objective_value - (-1.0)) <= 1e-9);

  auto report = check_solution(closed_form_instance(1.0, std::exp(1.0)), sol);
  CHECK(report.max_eq_float <= 1e-8);
  CHECK(report.max_cone <= 1e-8);

  // a perturbed point shows up in the independent residual check
  Solution perturbed = sol;
  perturbed.x[2] -= 1e-3;
  auto bad = check_solution(closed_form_instance(1.0, std::exp(1.0)), perturbed);
  CHECK(bad.max_cone >= 1e-4);
}

TEST_CASE("infeasible: nu=2, zeta=1, delta=0") {
  Rep rep;
  int nu = rep.add_var();
  int zeta = rep.add_var();
  int delta = rep.add_var();
  rep.add_eq({{nu, 1.0}}, 2.0);
  rep.add_eq({{zeta, 1.0}}, 1.0);
  rep.add_eq({{delta, 1.0}}, 0.0);
  rep.add_entropy_triple(nu, zeta, delta);
  Solution sol = solve(rep);
  CHECK(sol.status == SolveStatus::Infeasible);
  CHECK(sol.phase1_slack > 1e-6);
}

TEST_CASE("minimize zeta with nu=1, delta=0 gives zeta* = 1") {
  Rep rep;
  int nu = rep.add_var();
  int zeta = rep.add_var();
  int delta = rep.add_var();
  rep.add_eq({{nu, 1.0}}, 1.0);
  rep.add_eq({{delta, 1.0}}, 0.0);
  rep.add_entropy_triple(nu, zeta, delta);
  rep.set_objective({{zeta, 1.0}});
  SolveOptions options;
  options.tol = 1e-9;
  Solution sol = solve(rep, options);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(std::abs(sol.objective_value - 1.0) <= 1e-6);
}

TEST_CASE("closed-form family: delta* = a log(a/b) over 50 random instances") {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> range(0.1, 10.0);
  SolveOptions options;
  options.tol = 1e-11;
  options.max_iter = 400;
  for (int k = 0; k < 50; ++k) {
    double a = range(rng), b = range(rng);
    Solution sol = solve(closed_form_instance(a, b), options);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(std::abs(sol.objective_value - a * std::log(a / b)) <= 1e-9);
  }
}

TEST_CASE("determinism: bitwise identical runs") {
  Rep rep = closed_form_instance(3.5, 0.7);
  Solution s1 = solve(rep);
  Solution s2 = solve(rep);
  CHECK(s1.iterations == s2.iterations);
  CHECK(std::memcmp(&s1.objective_value, &s2.objective_value, sizeof(double)) == 0);
  REQUIRE(s1.x.size() == s2.x.size());
  CHECK(std::memcmp(s1.x.data(), s2.x.data(), s1.x.size() * sizeof(double)) == 0);
}

TEST_CASE("feasible instances built from interior points are never declared infeasible") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> pos(0.2, 5.0);
  std::uniform_real_distribution<double> margin(0.05, 1.0);
  for (int k = 0; k < 20; ++k) {
    Rep rep;
    int triples = 1 + static_cast<int>(rng() % 3);
    for (int t = 0; t < triples; ++t) {
      int nu = rep.add_var();
      int zeta = rep.add_var();
      int delta = rep.add_var();
      double a = pos(rng), b = pos(rng);
      rep.add_eq({{nu, 1.0}}, a);
      rep.add_eq({{zeta, 1.0}}, b);
      // delta pinned above the entropy value: strictly feasible by build
      rep.add_eq({{delta, 1.0}}, a * std::log(a / b) + margin(rng));
      rep.add_entropy_triple(nu, zeta, delta);
    }
    Solution sol = solve(rep);
    CHECK(sol.status != SolveStatus::Infeasible);
  }
}

TEST_CASE("triples sharing a budget row model sum(delta) <= 0") {
  // Feasibility form of the single-circuit entropy program: nu_j pinned to
  // |f_beta| lambda_j, zeta_j to the outer coefficients, sum delta_j <= 0.
  auto build = [](double fb) {
    Rep rep;
    double lambda[3] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    SparseRow budget;
    for (int j = 0; j < 3; ++j) {
      int nu = rep.add_var();
      int zeta = rep.add_var();
      int delta = rep.add_var();
      rep.add_eq({{nu, 1.0}}, fb * lambda[j]);
      rep.add_eq({{zeta, 1.0}}, 1.0);
      rep.add_entropy_triple(nu, zeta, delta);
      budget.emplace_back(delta, 1.0);
    }
    rep.add_ineq(std::move(budget), 0.0);
    return rep;
  };
  CHECK(solve(build(2.9)).status == SolveStatus::Optimal);    // |f_beta| < Theta = 3
  CHECK(solve(build(3.0 + 1e-9)).status == SolveStatus::Optimal);  // boundary within threshold
  CHECK(solve(build(3.2)).status == SolveStatus::Infeasible);
}

TEST_CASE("empty rep and ill-posed objectives") {
  Rep empty;
  Solution sol = solve(empty);
  CHECK(sol.status == SolveStatus::Optimal);
  CHECK(check_solution(empty, sol).max_eq_float == 0.0);

  Rep unbounded;
  int x = unbounded.add_var();
  unbounded.set_objective({{x, 1.0}});
  CHECK(solve(unbounded).status == SolveStatus::IllPosed);
}
