#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sonc/rational.hpp"

namespace sonc {

using SparseRow = std::vector<std::pair<int, double>>;

struct EntropyTriple {
  int nu = -1;
  int zeta = -1;
  int delta = -1;
};

// A relative entropy program: linear objective, linear equalities and
// inequalities, and relative-entropy cone constraints
// nu * log(nu / zeta) <= delta over designated variable triples.
class Rep {
 public:
  int add_var(std::string name = "");
  int num_vars() const { return static_cast<int>(names_.size()); }
  const std::string& var_name(int i) const { return names_.at(static_cast<std::size_t>(i)); }

  void set_objective(SparseRow objective);
  void add_eq(SparseRow row, double rhs);
  void add_ineq(SparseRow row, double rhs);  // row . x <= rhs
  void add_entropy_triple(int nu, int zeta, int delta);
  void mark_nonneg(int var);

  const SparseRow& objective() const { return objective_; }
  const std::vector<std::pair<SparseRow, double>>& eqs() const { return eqs_; }
  const std::vector<std::pair<SparseRow, double>>& ineqs() const { return ineqs_; }
  const std::vector<EntropyTriple>& triples() const { return triples_; }
  const std::set<int>& nonneg_vars() const { return nonneg_; }

 private:
  void check_row(const SparseRow& row) const;
  std::vector<std::string> names_;
  SparseRow objective_;
  std::vector<std::pair<SparseRow, double>> eqs_;
  std::vector<std::pair<SparseRow, double>> ineqs_;
  std::vector<EntropyTriple> triples_;
  std::set<int> nonneg_;
};

enum class SolveStatus { Optimal, Infeasible, IllPosed, IterationLimit };

const char* to_string(SolveStatus status);

struct SolveOptions {
  double tol = 1e-8;
  int max_iter = 200;            // Newton steps per phase
  double feas_threshold = 1e-6;  // phase-I slack above which we declare infeasible
};

struct Residuals {
  double primal_lin = 0.0;
  double cone = 0.0;
};

struct Solution {
  SolveStatus status = SolveStatus::IterationLimit;
  std::vector<double> x;
  double objective_value = 0.0;
  Residuals residuals;
  int iterations = 0;
  double phase1_slack = 0.0;  // certified minimum slack from phase I
};

Solution solve(const Rep& rep, const SolveOptions& options = {});

struct ResidualReport {
  double max_eq_float = 0.0;
  double max_eq_exact = 0.0;  // rationalized snapshot, evaluated exactly
  double max_ineq = 0.0;
  double max_cone = 0.0;
  double max_nonneg = 0.0;
};

// Recomputes all constraint violations independently of the solve path.
ResidualReport check_solution(const Rep& rep, const Solution& sol);

}  // namespace sonc
