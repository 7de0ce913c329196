#pragma once

#include <optional>
#include <vector>

#include "sonc/poly.hpp"

namespace sonc {

// All integer points of the standard simplex with edge length `degree`,
// i.e. nonnegative integer vectors with coordinate sum <= degree.
struct SimplexLattice {
  int n = 0;
  int degree = 0;
  std::vector<Exponent> points;  // graded lexicographic order
};

SimplexLattice lattice_points_simplex(int n, int degree);

std::vector<Exponent> even_points(const SimplexLattice& lattice);

// Exact rational weights mu >= 0 with sum(mu) = 1 and sum(mu_i * points_i) =
// target, when target lies in conv(points). Decided by a phase-I simplex in
// rational arithmetic, so the answer is exact.
std::optional<std::vector<Rational>> convex_combination(const Exponent& target,
                                                        const std::vector<Exponent>& points);

// The members of `support` that are vertices of conv(support), decided
// point by point against the hull of the remaining points.
std::vector<Exponent> newton_vertices(const std::vector<Exponent>& support);

struct NecessaryReport {
  bool pass = false;
  std::optional<Exponent> witness;  // first failing vertex in term order
};

// Necessary conditions for global nonnegativity: every Newton-polytope
// vertex exponent is even and carries a strictly positive coefficient.
NecessaryReport necessary_conditions(const Poly& p);

}  // namespace sonc
