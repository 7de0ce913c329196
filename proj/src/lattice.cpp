#include "sonc/lattice.hpp"

#include <algorithm>

namespace sonc {

namespace {

void enumerate_rec(int n, int degree, int coord, std::vector<int>& current, int used,
                   std::vector<Exponent>& out) {
  if (coord == n) {
    out.push_back(Exponent(current));
    return;
  }
  for (int v = 0; v <= degree - used; ++v) {
    current[static_cast<std::size_t>(coord)] = v;
    enumerate_rec(n, degree, coord + 1, current, used + v, out);
  }
  current[static_cast<std::size_t>(coord)] = 0;
}

}  // namespace

SimplexLattice lattice_points_simplex(int n, int degree) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");
  SimplexLattice lattice;
  lattice.n = n;
  lattice.degree = degree;
  std::vector<int> current(static_cast<std::size_t>(n), 0);
  enumerate_rec(n, degree, 0, current, 0, lattice.points);
  std::sort(lattice.points.begin(), lattice.points.end(), GrlexLess{});
  return lattice;
}

std::vector<Exponent> even_points(const SimplexLattice& lattice) {
  std::vector<Exponent> out;
  for (const auto& p : lattice.points)
    if (p.is_even()) out.push_back(p);
  return out;
}

namespace {

// Phase-I simplex for {M mu = rhs, mu >= 0} with exact rationals.
// Columns of M are the candidate points plus the all-ones row; rhs is the
// target plus 1. All data is nonnegative here, which keeps the setup simple,
// but pivoting uses Bland's rule anyway so degenerate ties cannot cycle.
class ExactFeasibility {
 public:
  ExactFeasibility(const Exponent& target, const std::vector<Exponent>& points) {
    rows_ = target.dim() + 1;
    cols_ = static_cast<int>(points.size());
    tableau_.assign(static_cast<std::size_t>(rows_),
                    std::vector<Rational>(static_cast<std::size_t>(cols_ + rows_ + 1), Rational(0)));
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) {
        Rational v = (i < target.dim()) ? Rational(points[static_cast<std::size_t>(j)][i])
                                        : Rational(1);
        tableau_[i][static_cast<std::size_t>(j)] = v;
      }
      tableau_[i][static_cast<std::size_t>(cols_ + i)] = 1;  // artificial
      tableau_[i].back() = (i < target.dim()) ? Rational(target[i]) : Rational(1);
    }
    basis_.resize(static_cast<std::size_t>(rows_));
    for (int i = 0; i < rows_; ++i) basis_[static_cast<std::size_t>(i)] = cols_ + i;
  }

  std::optional<std::vector<Rational>> solve() {
    // Reduced costs for minimizing the sum of artificials.
    std::vector<Rational> cost(static_cast<std::size_t>(cols_ + rows_), Rational(0));
    for (int j = cols_; j < cols_ + rows_; ++j) cost[static_cast<std::size_t>(j)] = 1;

    while (true) {
      // z_j - c_j with Bland's rule: pick the lowest eligible column index.
      int enter = -1;
      for (int j = 0; j < cols_ + rows_; ++j) {
        Rational zj(0);
        for (int i = 0; i < rows_; ++i)
          zj += cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] *
                tableau_[i][static_cast<std::size_t>(j)];
        if (zj - cost[static_cast<std::size_t>(j)] > 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) break;

      int leave = -1;
      Rational best_ratio(0);
      for (int i = 0; i < rows_; ++i) {
        const Rational& a = tableau_[i][static_cast<std::size_t>(enter)];
        if (a > 0) {
          Rational ratio = tableau_[i].back() / a;
          if (leave < 0 || ratio < best_ratio ||
              (ratio == best_ratio &&
               basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) return std::nullopt;  // unbounded: cannot happen with sum row
      pivot(leave, enter);
    }

    Rational objective(0);
    for (int i = 0; i < rows_; ++i)
      if (basis_[static_cast<std::size_t>(i)] >= cols_) objective += tableau_[i].back();
    if (objective != 0) return std::nullopt;

    std::vector<Rational> mu(static_cast<std::size_t>(cols_), Rational(0));
    for (int i = 0; i < rows_; ++i)
      if (basis_[static_cast<std::size_t>(i)] < cols_)
        mu[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = tableau_[i].back();
    return mu;
  }

 private:
  void pivot(int row, int col) {
    auto& pr = tableau_[static_cast<std::size_t>(row)];
    Rational p = pr[static_cast<std::size_t>(col)];
    for (auto& v : pr) v /= p;
    for (int i = 0; i < rows_; ++i) {
      if (i == row) continue;
      Rational factor = tableau_[i][static_cast<std::size_t>(col)];
      if (factor == 0) continue;
      for (std::size_t j = 0; j < pr.size(); ++j) tableau_[i][j] -= factor * pr[j];
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  int rows_, cols_;
  std::vector<std::vector<Rational>> tableau_;
  std::vector<int> basis_;
};

}  // namespace

std::optional<std::vector<Rational>> convex_combination(const Exponent& target,
                                                        const std::vector<Exponent>& points) {
  if (points.empty()) return std::nullopt;
  for (const auto& p : points)
    if (p.dim() != target.dim()) throw std::invalid_argument("dimension mismatch");
  return ExactFeasibility(target, points).solve();
}

std::vector<Exponent> newton_vertices(const std::vector<Exponent>& support) {
  if (support.empty()) throw std::invalid_argument("empty support");
  if (support.size() == 1) return support;
  std::vector<Exponent> vertices;
  for (std::size_t i = 0; i < support.size(); ++i) {
    std::vector<Exponent> others;
    others.reserve(support.size() - 1);
    for (std::size_t j = 0; j < support.size(); ++j)
      if (j != i) others.push_back(support[j]);
    if (!convex_combination(support[i], others)) vertices.push_back(support[i]);
  }
  std::sort(vertices.begin(), vertices.end(), GrlexLess{});
  return vertices;
}

NecessaryReport necessary_conditions(const Poly& p) {
  if (p.is_zero()) throw std::invalid_argument("necessary_conditions needs a nonzero polynomial");
  NecessaryReport report;
  auto vertices = newton_vertices(p.support());
  for (const auto& v : vertices) {
    if (!v.is_even() || p.coeff(v) <= 0) {
      report.pass = false;
      report.witness = v;
      return report;
    }
  }
  report.pass = true;
  return report;
}

}  // namespace sonc
