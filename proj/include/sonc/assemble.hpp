#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "sonc/circuit.hpp"
#include "sonc/rep.hpp"

namespace sonc {

class DegreeOverflow : public std::runtime_error {
 public:
  explicit DegreeOverflow(const std::string& what) : std::runtime_error(what) {}
};

// One coefficient block c^(l,eps) of a circuit, together with its nu/delta
// companions. Pruning may demote a block to squares_only, in which case only
// the surviving outer coefficients remain (as plain monomial-square mass) and
// the entropy rows are dropped.
struct BlockVars {
  int circuit = -1;  // index into AssembledRep::circuits, r >= 1
  int ell = -1;      // index into AssembledRep::products
  int eps = +1;
  bool squares_only = false;
  std::vector<int> c_outer;  // -1 for pruned slots
  int c_inner = -1;
  std::vector<int> nu;
  std::vector<int> delta;
};

// Monomial-square mass of an r = 0 circuit under one product.
struct SquareVars {
  int circuit = -1;
  int ell = -1;
  int var = -1;
};

struct AssemblyInput {
  const Poly* f = nullptr;
  std::vector<Poly> products;            // H_1 = 1 first
  std::vector<CircuitSupport> circuits;  // r = 0 entries become squares
  int eta_degree = 0;                    // matching rows live in L_{n, eta_degree}
  bool match_constant = false;           // true: match f_0 too (feasibility form)
};

struct AssembledRep {
  Rep rep;
  std::vector<Poly> products;
  std::vector<CircuitSupport> circuits;
  std::vector<BlockVars> blocks;
  std::vector<SquareVars> squares;
  std::vector<Exponent> rows;  // emitted matching rows, term order
  bool statically_infeasible = false;
  std::optional<Exponent> infeasible_eta;
};

// Builds the matching REP: variables c/nu/delta per (circuit, product, sign),
// entropy triples per (1b), rows (1a) and (1c), and one linear matching row
// per exponent eta with any surviving contribution. Rows whose variables are
// forced to zero by same-sign analysis are removed together with the forced
// mass before the REP is emitted, so the solver always sees a program whose
// feasible set equals the assembled one.
AssembledRep assemble_rep(const AssemblyInput& input);

}  // namespace sonc
