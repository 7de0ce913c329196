#include "sonc/assemble.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace sonc {

namespace {

struct Slot {
  int block = -1;   // index into block descriptors, -1 for square slots
  int square = -1;  // index into square descriptors
  int j = -1;       // outer index within the block
  bool is_inner = false;
  Exponent base;    // exponent the slot's variable multiplies
  double sign = +1.0;  // eps for inner slots, +1 otherwise
  bool alive = true;
  int var = -1;
};

struct Contribution {
  int slot;
  double coeff;  // sign carries eps and the sign of H_gamma
};

}  // namespace

AssembledRep assemble_rep(const AssemblyInput& input) {
  const Poly& f = *input.f;
  const int n = f.dim();

  AssembledRep out;
  out.products = input.products;
  out.circuits = input.circuits;

  for (const auto& [e, c] : f.terms())
    if (e.degree() > input.eta_degree)
      throw DegreeOverflow("objective exponent " + exponent_to_string(e) +
                           " lies outside the degree-" + std::to_string(input.eta_degree) +
                           " simplex");

  // Block and square descriptors plus their coefficient slots.
  std::vector<Slot> slots;
  std::vector<BlockVars> blocks;
  std::vector<SquareVars> squares;
  std::vector<std::vector<int>> block_outer_slots, block_inner_slot;

  for (int ci = 0; ci < static_cast<int>(input.circuits.size()); ++ci) {
    const CircuitSupport& circuit = input.circuits[static_cast<std::size_t>(ci)];
    for (int ell = 0; ell < static_cast<int>(input.products.size()); ++ell) {
      if (circuit.r() == 0) {
        SquareVars sq;
        sq.circuit = ci;
        sq.ell = ell;
        squares.push_back(sq);
        Slot s;
        s.square = static_cast<int>(squares.size()) - 1;
        s.base = circuit.outer[0];
        slots.push_back(std::move(s));
        continue;
      }
      for (int eps : {+1, -1}) {
        BlockVars block;
        block.circuit = ci;
        block.ell = ell;
        block.eps = eps;
        blocks.push_back(block);
        int bi = static_cast<int>(blocks.size()) - 1;
        block_outer_slots.emplace_back();
        block_inner_slot.emplace_back();
        for (std::size_t j = 0; j < circuit.outer.size(); ++j) {
          Slot s;
          s.block = bi;
          s.j = static_cast<int>(j);
          s.base = circuit.outer[j];
          slots.push_back(std::move(s));
          block_outer_slots[static_cast<std::size_t>(bi)].push_back(
              static_cast<int>(slots.size()) - 1);
        }
        Slot s;
        s.block = bi;
        s.is_inner = true;
        s.base = circuit.inner;
        s.sign = eps;
        slots.push_back(std::move(s));
        block_inner_slot[static_cast<std::size_t>(bi)].push_back(static_cast<int>(slots.size()) -
                                                                 1);
      }
    }
  }

  // Matching rows eta -> contributions; the eta = 0 contributions become the
  // objective when the constant term is minimized instead of matched.
  std::map<Exponent, std::vector<Contribution>, GrlexLess> row_map;
  std::vector<Contribution> constant_contribs;
  const Exponent origin = Exponent::zeros(n);

  for (int si = 0; si < static_cast<int>(slots.size()); ++si) {
    const Slot& slot = slots[static_cast<std::size_t>(si)];
    int ell = slot.block >= 0 ? blocks[static_cast<std::size_t>(slot.block)].ell
                              : squares[static_cast<std::size_t>(slot.square)].ell;
    const Poly& h = input.products[static_cast<std::size_t>(ell)];
    for (const auto& [gamma, hc] : h.terms()) {
      Exponent eta = slot.base + gamma;
      double coeff = slot.sign * to_double(hc);
      if (eta == origin && !input.match_constant)
        constant_contribs.push_back({si, coeff});
      else
        row_map[eta].push_back({si, coeff});
    }
  }

  // Same-sign zero rows force their variables to vanish. Killing an outer
  // coefficient kills the block's inner mass (nu_j = c_beta lambda_j = 0);
  // killing the inner demotes the block to plain squares. Iterate to a fixed
  // point, then drop rows with no surviving contribution.
  auto kill_slot = [&](int si, auto&& recurse) -> void {
    Slot& slot = slots[static_cast<std::size_t>(si)];
    if (!slot.alive) return;
    slot.alive = false;
    if (slot.block < 0) return;
    BlockVars& block = blocks[static_cast<std::size_t>(slot.block)];
    if (!slot.is_inner && !block.squares_only) {
      block.squares_only = true;
      for (int inner : block_inner_slot[static_cast<std::size_t>(slot.block)])
        recurse(inner, recurse);
    } else if (slot.is_inner) {
      block.squares_only = true;
    }
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [eta, contribs] : row_map) {
      if (f.coeff(eta) != 0) continue;
      bool any_alive = false, all_pos = true, all_neg = true;
      for (const auto& c : contribs) {
        if (!slots[static_cast<std::size_t>(c.slot)].alive) continue;
        any_alive = true;
        if (c.coeff > 0) all_neg = false;
        if (c.coeff < 0) all_pos = false;
      }
      if (!any_alive || (!all_pos && !all_neg)) continue;
      for (const auto& c : contribs)
        if (slots[static_cast<std::size_t>(c.slot)].alive) {
          kill_slot(c.slot, kill_slot);
          changed = true;
        }
    }
  }

  auto eta_dead = [&](const Exponent& eta) {
    auto it = row_map.find(eta);
    if (it == row_map.end()) return true;
    for (const auto& c : it->second)
      if (slots[static_cast<std::size_t>(c.slot)].alive) return false;
    return true;
  };
  for (const auto& [eta, coeff] : f.terms()) {
    if (eta.is_zero() && !input.match_constant) continue;  // matched through gamma
    if (eta_dead(eta)) {
      out.statically_infeasible = true;
      out.infeasible_eta = eta;
      return out;
    }
  }

  // Emit the REP over the surviving slots.
  Rep& rep = out.rep;
  for (int si = 0; si < static_cast<int>(slots.size()); ++si) {
    Slot& slot = slots[static_cast<std::size_t>(si)];
    if (!slot.alive) continue;
    std::string name;
    if (slot.block >= 0) {
      const BlockVars& b = blocks[static_cast<std::size_t>(slot.block)];
      name = (slot.is_inner ? "cB" : "cA") + std::to_string(slot.is_inner ? 0 : slot.j) + "[i" +
             std::to_string(b.circuit) + ",l" + std::to_string(b.ell) +
             (b.eps > 0 ? ",+]" : ",-]");
    } else {
      const SquareVars& s = squares[static_cast<std::size_t>(slot.square)];
      name = "sq[i" + std::to_string(s.circuit) + ",l" + std::to_string(s.ell) + "]";
    }
    slot.var = rep.add_var(name);
    rep.mark_nonneg(slot.var);
  }

  for (int bi = 0; bi < static_cast<int>(blocks.size()); ++bi) {
    BlockVars& block = blocks[static_cast<std::size_t>(bi)];
    const CircuitSupport& circuit = out.circuits[static_cast<std::size_t>(block.circuit)];
    for (int si : block_outer_slots[static_cast<std::size_t>(bi)])
      block.c_outer.push_back(slots[static_cast<std::size_t>(si)].var);
    block.c_inner = slots[static_cast<std::size_t>(
                              block_inner_slot[static_cast<std::size_t>(bi)].front())]
                        .var;
    if (block.squares_only || block.c_inner < 0) {
      block.squares_only = true;
      block.c_inner = -1;
      continue;
    }
    // Full block: nu/delta companions, rows (1a), triples (1b), row (1c).
    const int r1 = circuit.r() + 1;
    SparseRow delta_sum;
    for (int j = 0; j < r1; ++j) {
      std::string tag = "[i" + std::to_string(block.circuit) + ",l" + std::to_string(block.ell) +
                        (block.eps > 0 ? ",+]" : ",-]");
      int nu = rep.add_var("nu" + std::to_string(j) + tag);
      int dl = rep.add_var("dl" + std::to_string(j) + tag);
      block.nu.push_back(nu);
      block.delta.push_back(dl);
      rep.add_eq({{nu, 1.0}, {block.c_inner, -to_double(circuit.lambda[static_cast<std::size_t>(j)])}},
                 0.0);
      rep.add_entropy_triple(nu, block.c_outer[static_cast<std::size_t>(j)], dl);
      delta_sum.emplace_back(dl, 1.0);
    }
    rep.add_ineq(std::move(delta_sum), 0.0);
  }
  out.blocks = std::move(blocks);
  for (auto& sq : squares)
    sq.var = -1;
  for (int si = 0; si < static_cast<int>(slots.size()); ++si) {
    const Slot& slot = slots[static_cast<std::size_t>(si)];
    if (slot.square >= 0) squares[static_cast<std::size_t>(slot.square)].var = slot.var;
  }
  out.squares = std::move(squares);

  for (const auto& [eta, contribs] : row_map) {
    SparseRow row;
    for (const auto& c : contribs) {
      const Slot& slot = slots[static_cast<std::size_t>(c.slot)];
      if (slot.alive) row.emplace_back(slot.var, c.coeff);
    }
    if (row.empty()) continue;  // zero row over dead mass
    rep.add_eq(std::move(row), to_double(f.coeff(eta)));
    out.rows.push_back(eta);
  }

  if (!input.match_constant) {
    SparseRow objective;
    for (const auto& c : constant_contribs) {
      const Slot& slot = slots[static_cast<std::size_t>(c.slot)];
      if (slot.alive) objective.emplace_back(slot.var, c.coeff);
    }
    rep.set_objective(std::move(objective));
  }

  return out;
}

}  // namespace sonc
