#include "sonc/rep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sonc {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::IllPosed: return "ill_posed";
    case SolveStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

int Rep::add_var(std::string name) {
  if (name.empty()) name = "x" + std::to_string(names_.size());
  names_.push_back(std::move(name));
  return static_cast<int>(names_.size()) - 1;
}

void Rep::check_row(const SparseRow& row) const {
  for (const auto& [idx, coeff] : row) {
    if (idx < 0 || idx >= num_vars()) throw std::out_of_range("row references unknown variable");
    if (!std::isfinite(coeff)) throw std::invalid_argument("non-finite row coefficient");
  }
}

void Rep::set_objective(SparseRow objective) {
  check_row(objective);
  objective_ = std::move(objective);
}

void Rep::add_eq(SparseRow row, double rhs) {
  check_row(row);
  if (row.empty()) return;  // empty rows carry no constraint
  eqs_.emplace_back(std::move(row), rhs);
}

void Rep::add_ineq(SparseRow row, double rhs) {
  check_row(row);
  if (row.empty()) return;
  ineqs_.emplace_back(std::move(row), rhs);
}

void Rep::add_entropy_triple(int nu, int zeta, int delta) {
  for (int idx : {nu, zeta, delta})
    if (idx < 0 || idx >= num_vars())
      throw std::out_of_range("entropy triple references unknown variable");
  if (nu == zeta || nu == delta || zeta == delta)
    throw std::invalid_argument("entropy triple indices must be distinct");
  for (const auto& t : triples_)
    if (t.nu == nu && t.zeta == zeta && t.delta == delta)
      throw std::invalid_argument("duplicate entropy triple");
  triples_.push_back({nu, zeta, delta});
  nonneg_.insert(nu);
  nonneg_.insert(zeta);
}

void Rep::mark_nonneg(int var) {
  if (var < 0 || var >= num_vars()) throw std::out_of_range("unknown variable");
  nonneg_.insert(var);
}

namespace {

double entropy_term(double nu, double zeta) {
  // Closure conventions: 0 log(0/zeta) = 0; nu log(nu/0) = +inf for nu > 0.
  const double floor = 1e-300;
  if (nu <= floor) return 0.0;
  if (zeta <= floor) return std::numeric_limits<double>::infinity();
  return nu * std::log(nu / zeta);
}

}  // namespace

ResidualReport check_solution(const Rep& rep, const Solution& sol) {
  if (static_cast<int>(sol.x.size()) != rep.num_vars())
    throw std::invalid_argument("solution dimension mismatch");
  ResidualReport report;

  std::vector<Rational> exact;
  exact.reserve(sol.x.size());
  for (double v : sol.x) exact.push_back(rational_from_double(v));

  for (const auto& [row, rhs] : rep.eqs()) {
    double acc = 0.0;
    Rational acc_exact(0);
    for (const auto& [idx, coeff] : row) {
      acc += coeff * sol.x[static_cast<std::size_t>(idx)];
      acc_exact += rational_from_double(coeff) * exact[static_cast<std::size_t>(idx)];
    }
    report.max_eq_float = std::max(report.max_eq_float, std::abs(acc - rhs));
    Rational diff = acc_exact - rational_from_double(rhs);
    report.max_eq_exact = std::max(report.max_eq_exact, std::abs(to_double(diff)));
  }

  for (const auto& [row, rhs] : rep.ineqs()) {
    double acc = 0.0;
    for (const auto& [idx, coeff] : row) acc += coeff * sol.x[static_cast<std::size_t>(idx)];
    report.max_ineq = std::max(report.max_ineq, std::max(0.0, acc - rhs));
  }

  for (const auto& t : rep.triples()) {
    double nu = sol.x[static_cast<std::size_t>(t.nu)];
    double zeta = sol.x[static_cast<std::size_t>(t.zeta)];
    double delta = sol.x[static_cast<std::size_t>(t.delta)];
    report.max_cone = std::max(report.max_cone, std::max(0.0, entropy_term(nu, zeta) - delta));
  }

  for (int idx : rep.nonneg_vars())
    report.max_nonneg =
        std::max(report.max_nonneg, std::max(0.0, -sol.x[static_cast<std::size_t>(idx)]));

  return report;
}

}  // namespace sonc
