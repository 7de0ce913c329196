#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "sonc/certify.hpp"

namespace sonc {

// A constrained minimization instance: objective f over the semi-algebraic
// set cut out by the constraints. When `box` is set, the 2n redundant cube
// constraints N - x_i and N + x_i are materialized and appended.
struct Problem {
  Poly f;
  std::vector<Poly> constraints;
  std::optional<Rational> box;

  explicit Problem(Poly objective) : f(std::move(objective)) {}
};

std::vector<Poly> effective_constraints(const Problem& p);

class ProductCapExceeded : public std::runtime_error {
 public:
  explicit ProductCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// R_q(K): all products of at most q constraints, the empty product included.
struct ProductSet {
  int q = 0;
  std::vector<Poly> members;            // deduplicated, 1 first
  std::uint64_t multiset_count = 0;     // count before deduplication
  int tau = 0;                          // max(deg g_i, 1) * q
};

ProductSet constraint_products(const Problem& p, int q, std::uint64_t cap = 200000);

struct HierarchyOptions {
  SolveOptions solve{1e-9, 600, 1e-6};
  std::uint64_t product_cap = 200000;
  EnumOptions enumeration{};
  bool full_circuits = false;  // every admissible (outer, inner) pair instead
                               // of the support-driven default family
  int threads = 0;             // 0: SONC_THREADS env, then hardware
};

struct BoundResult {
  int d = 0;
  int q = 0;
  SolveStatus status = SolveStatus::IterationLimit;
  double value = std::numeric_limits<double>::quiet_NaN();  // -inf: no bound at this level
  std::optional<SoncDecomposition> certificate;
  Solution solver;
  std::string error;  // degree overflow or cap diagnostics; empty otherwise

  bool has_bound() const { return status == SolveStatus::Optimal && error.empty(); }
};

// The default circuit family for level (d, q): every even lattice point as a
// monomial square, all 1-dimensional circuits whose inner point can reach a
// coefficient of f through some product support, and all higher-dimensional
// circuits whose inner point lies in supp(f). Grows monotonically in d and q.
std::vector<CircuitSupport> hierarchy_circuits(const Poly& f, const ProductSet& products, int d,
                                               const EnumOptions& options, bool full_circuits);

AssembledRep assemble_hierarchy_rep(const Problem& p, int d, int q,
                                    const std::vector<CircuitSupport>& circuits,
                                    std::uint64_t product_cap = 200000);

BoundResult sonc_bound(const Problem& p, int d, int q, const HierarchyOptions& options = {});

// Grid of bounds for 1 <= d <= d_max, 0 <= q <= q_max, ordered by (d, q).
// Per-cell failures are recorded in the result and the schedule continues.
std::vector<BoundResult> bound_schedule(const Problem& p, int d_max, int q_max,
                                        const HierarchyOptions& options = {});

}  // namespace sonc
