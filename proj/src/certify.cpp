#include "sonc/certify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "sonc/lattice.hpp"

namespace sonc {

bool amgm_nonnegative(const Signomial& s, const SolveOptions& options) {
  if (s.beta_coeff >= 0) return true;  // no negative term
  const std::size_t l1 = s.outer_exponents.size();
  if (l1 == 0 || s.outer_coeffs.size() != l1)
    throw std::invalid_argument("malformed signomial");
  const std::size_t n = s.beta.size();
  for (const auto& a : s.outer_exponents)
    if (a.size() != n) throw std::invalid_argument("signomial exponent dimension mismatch");
  for (double c : s.outer_coeffs)
    if (!(c > 0)) throw std::invalid_argument("outer coefficients must be positive");

  Rep rep;
  std::vector<int> nu(l1), zeta(l1), delta(l1);
  for (std::size_t j = 0; j < l1; ++j) {
    nu[j] = rep.add_var("nu" + std::to_string(j));
    zeta[j] = rep.add_var("zeta" + std::to_string(j));
    delta[j] = rep.add_var("delta" + std::to_string(j));
  }
  const double e = std::exp(1.0);
  SparseRow delta_sum;
  for (std::size_t j = 0; j < l1; ++j) {
    rep.add_eq({{zeta[j], 1.0}}, e * s.outer_coeffs[j]);
    rep.add_entropy_triple(nu[j], zeta[j], delta[j]);
    delta_sum.emplace_back(delta[j], 1.0);
  }
  rep.add_ineq(std::move(delta_sum), s.beta_coeff);  // D(nu, e f_alpha) <= f_beta
  for (std::size_t k = 0; k < n; ++k) {
    SparseRow row;
    for (std::size_t j = 0; j < l1; ++j) {
      double coeff = s.outer_exponents[j][k] - s.beta[k];  // Q nu = <1,nu> beta
      if (coeff != 0.0) row.emplace_back(nu[j], coeff);
    }
    rep.add_eq(std::move(row), 0.0);
  }

  Solution sol = solve(rep, options);
  return sol.status == SolveStatus::Optimal;
}

bool simplicial_amgm_alternative(const CircuitPoly& c) {
  if (!(c.inner_coeff < 0)) throw std::invalid_argument("alternative form needs f_beta < 0");
  double lhs = std::log(-to_double(c.inner_coeff));
  for (std::size_t j = 0; j < c.outer_coeffs.size(); ++j) {
    double lj = to_double(c.support.lambda[j]);
    lhs += lj * (std::log(lj) - std::log(to_double(c.outer_coeffs[j])));
  }
  return lhs <= 1e-12 * (1.0 + std::abs(lhs));
}

Poly expand_decomposition(const SoncDecomposition& dec, int n) {
  Poly total(n);
  for (const auto& part : dec.parts) total = total + part.multiplier * part.circuit.to_poly();
  total.add_term(Exponent::zeros(n), dec.gamma);
  return total;
}

namespace {

bool parts_valid_and_nonnegative(const SoncDecomposition& dec) {
  for (const auto& part : dec.parts) {
    const auto& c = part.circuit;
    if (c.outer_coeffs.size() != c.support.outer.size()) return false;
    if (c.support.r() >= 1) {
      for (const auto& v : c.outer_coeffs)
        if (!(v > 0)) return false;
    } else if (c.outer_coeffs.at(0) + c.inner_coeff < 0) {
      return false;
    }
    if (!circuit_nonnegative(c)) return false;
  }
  return true;
}

}  // namespace

bool verify_decomposition(const Poly& f, const SoncDecomposition& dec, VerifyMode mode,
                          double tol) {
  for (const auto& part : dec.parts)
    if (part.multiplier.dim() != f.dim() || part.circuit.support.dim() != f.dim()) return false;
  if (!parts_valid_and_nonnegative(dec)) return false;
  Poly expanded = expand_decomposition(dec, f.dim());
  if (mode == VerifyMode::Exact) return expanded == f;
  Poly diff = expanded - f;
  for (const auto& [e, c] : diff.terms())
    if (std::abs(to_double(c)) > tol) return false;
  return true;
}

namespace {

// A coefficient variable of the assembled program, tied back to its circuit.
struct Unit {
  int block = -1;   // index into AssembledRep::blocks
  int square = -1;  // index into AssembledRep::squares
  int j = -1;       // outer slot within the block
  bool is_inner = false;
  Exponent base;
  int eps = +1;
  int ell = 0;
  double raw = 0.0;
  Rational value = 0;
};

std::vector<Unit> collect_units(const AssembledRep& assembled, const std::vector<double>& x) {
  std::vector<Unit> units;
  for (int bi = 0; bi < static_cast<int>(assembled.blocks.size()); ++bi) {
    const BlockVars& b = assembled.blocks[static_cast<std::size_t>(bi)];
    const CircuitSupport& s = assembled.circuits[static_cast<std::size_t>(b.circuit)];
    for (std::size_t j = 0; j < b.c_outer.size(); ++j) {
      if (b.c_outer[j] < 0) continue;
      Unit u;
      u.block = bi;
      u.j = static_cast<int>(j);
      u.base = s.outer[j];
      u.eps = b.eps;
      u.ell = b.ell;
      u.raw = std::max(0.0, x[static_cast<std::size_t>(b.c_outer[j])]);
      units.push_back(std::move(u));
    }
    if (!b.squares_only && b.c_inner >= 0) {
      Unit u;
      u.block = bi;
      u.is_inner = true;
      u.base = s.inner;
      u.eps = b.eps;
      u.ell = b.ell;
      u.raw = std::max(0.0, x[static_cast<std::size_t>(b.c_inner)]);
      units.push_back(std::move(u));
    }
  }
  for (int si = 0; si < static_cast<int>(assembled.squares.size()); ++si) {
    const SquareVars& sq = assembled.squares[static_cast<std::size_t>(si)];
    if (sq.var < 0) continue;
    Unit u;
    u.square = si;
    u.base = assembled.circuits[static_cast<std::size_t>(sq.circuit)].outer[0];
    u.ell = sq.ell;
    u.raw = std::max(0.0, x[static_cast<std::size_t>(sq.var)]);
    units.push_back(std::move(u));
  }
  return units;
}

// Exact contribution of a unit to the eta coefficient: eps * H_gamma.
Rational unit_coeff(const AssembledRep& assembled, const Unit& u, const Exponent& eta) {
  auto gamma = eta.minus(u.base);
  if (!gamma) return Rational(0);
  Rational h = assembled.products[static_cast<std::size_t>(u.ell)].coeff(*gamma);
  if (u.is_inner && u.eps < 0) return Rational(-h);
  return h;
}

// Particular rational solution of A x = b with the columns tried in the given
// order; free variables stay zero. Returns nullopt when inconsistent.
std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> a,
                                                 std::vector<Rational> b,
                                                 const std::vector<int>& column_order) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows > 0 ? static_cast<int>(a[0].size()) : 0;
  std::vector<int> pivot_col_of_row;
  int rank = 0;
  for (int oc = 0; oc < static_cast<int>(column_order.size()) && rank < rows; ++oc) {
    int col = column_order[static_cast<std::size_t>(oc)];
    int pr = -1;
    for (int i = rank; i < rows; ++i)
      if (a[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(a[static_cast<std::size_t>(rank)], a[static_cast<std::size_t>(pr)]);
    std::swap(b[static_cast<std::size_t>(rank)], b[static_cast<std::size_t>(pr)]);
    Rational inv = a[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)];
    for (auto& v : a[static_cast<std::size_t>(rank)]) v /= inv;
    b[static_cast<std::size_t>(rank)] /= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == rank) continue;
      Rational f = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)];
      if (f == 0) continue;
      for (int jj = 0; jj < cols; ++jj)
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)] -=
            f * a[static_cast<std::size_t>(rank)][static_cast<std::size_t>(jj)];
      b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(rank)];
    }
    pivot_col_of_row.push_back(col);
    ++rank;
  }
  for (int i = rank; i < rows; ++i)
    if (b[static_cast<std::size_t>(i)] != 0) return std::nullopt;
  std::vector<Rational> x(static_cast<std::size_t>(cols), Rational(0));
  for (int i = 0; i < rank; ++i)
    x[static_cast<std::size_t>(pivot_col_of_row[static_cast<std::size_t>(i)])] =
        b[static_cast<std::size_t>(i)];
  return x;
}

SoncDecomposition materialize(const AssembledRep& assembled, const std::vector<Unit>& units,
                              const Rational& gamma, bool exact) {
  SoncDecomposition dec;
  dec.gamma = gamma;
  dec.exact = exact;

  std::map<int, std::vector<const Unit*>> by_block;
  for (const auto& u : units)
    if (u.block >= 0) by_block[u.block].push_back(&u);

  auto add_square = [&](const Exponent& point, const Rational& v, int ell) {
    if (v == 0) return;
    DecompositionPart part{CircuitPoly{}, assembled.products[static_cast<std::size_t>(ell)]};
    part.circuit.support.outer = {point};
    part.circuit.support.inner = point;
    part.circuit.support.lambda = {Rational(1)};
    part.circuit.outer_coeffs = {v};
    part.circuit.inner_coeff = 0;
    dec.parts.push_back(std::move(part));
  };

  for (const auto& [bi, members] : by_block) {
    const BlockVars& b = assembled.blocks[static_cast<std::size_t>(bi)];
    const CircuitSupport& s = assembled.circuits[static_cast<std::size_t>(b.circuit)];
    const Unit* inner = nullptr;
    std::map<int, const Unit*> outer;
    for (const Unit* u : members)
      if (u->is_inner)
        inner = u;
      else
        outer[u->j] = u;

    bool full = inner != nullptr && inner->value > 0 &&
                static_cast<int>(outer.size()) == s.r() + 1;
    if (full)
      for (const auto& [j, u] : outer)
        if (!(u->value > 0)) full = false;

    if (full) {
      DecompositionPart part{CircuitPoly{}, assembled.products[static_cast<std::size_t>(b.ell)]};
      part.circuit.support = s;
      for (const auto& [j, u] : outer) part.circuit.outer_coeffs.push_back(u->value);
      part.circuit.inner_coeff = b.eps > 0 ? inner->value : Rational(-inner->value);
      dec.parts.push_back(std::move(part));
    } else {
      // Degenerate mass decays to monomial squares.
      for (const auto& [j, u] : outer)
        add_square(s.outer[static_cast<std::size_t>(j)], u->value, b.ell);
      if (inner && inner->value != 0 && s.inner.is_even() && b.eps > 0)
        add_square(s.inner, inner->value, b.ell);
      // An inner remainder that cannot stand alone is dropped; the exact
      // repair never leaves one behind on a consistent system.
    }
  }

  for (const auto& u : units)
    if (u.square >= 0) add_square(u.base, u.value, u.ell);

  return dec;
}

}  // namespace

SoncDecomposition extract_decomposition(const AssembledRep& assembled,
                                        const std::vector<double>& x, const Poly& target,
                                        const Rational& gamma) {
  const int n = target.dim();
  std::vector<Unit> units = collect_units(assembled, x);

  // Row universe: every exponent either side can touch.
  std::set<Exponent, GrlexLess> etas;
  for (const auto& [e, c] : target.terms()) etas.insert(e);
  etas.insert(Exponent::zeros(n));
  for (const auto& u : units)
    for (const auto& [g, hc] : assembled.products[static_cast<std::size_t>(u.ell)].terms())
      etas.insert(u.base + g);

  auto try_exact = [&]() -> std::optional<std::vector<Rational>> {
    if (units.size() > 500) return std::nullopt;  // repair cost; float path below
    // Continued-fraction rounding, then exact repair of the matching rows.
    std::vector<Rational> rounded(units.size());
    for (std::size_t i = 0; i < units.size(); ++i)
      rounded[i] = units[i].raw < 1e-9 ? Rational(0) : round_rational(units[i].raw, 1000000);

    std::vector<int> order(units.size());
    for (std::size_t i = 0; i < units.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return units[static_cast<std::size_t>(a)].raw >
                                         units[static_cast<std::size_t>(b)].raw; });

    std::vector<std::vector<Rational>> a;
    std::vector<Rational> rhs;
    for (const auto& eta : etas) {
      std::vector<Rational> row(units.size(), Rational(0));
      bool any = false;
      for (std::size_t i = 0; i < units.size(); ++i) {
        row[i] = unit_coeff(assembled, units[i], eta);
        if (row[i] != 0) any = true;
      }
      Rational r = target.coeff(eta);
      if (eta.is_zero()) r -= gamma;
      for (std::size_t i = 0; i < units.size(); ++i) r -= row[i] * rounded[i];
      if (!any) {
        if (r != 0) return std::nullopt;
        continue;
      }
      a.push_back(std::move(row));
      rhs.push_back(std::move(r));
    }
    auto delta = solve_exact(std::move(a), std::move(rhs), order);
    if (!delta) return std::nullopt;
    for (std::size_t i = 0; i < units.size(); ++i) rounded[i] += (*delta)[i];
    for (const auto& v : rounded)
      if (v < 0) return std::nullopt;  // repair broke a nonnegativity margin
    return rounded;
  };

  if (auto exact_values = try_exact()) {
    for (std::size_t i = 0; i < units.size(); ++i) units[i].value = (*exact_values)[i];
    SoncDecomposition dec = materialize(assembled, units, gamma, true);
    if (parts_valid_and_nonnegative(dec) && expand_decomposition(dec, n) == target) return dec;
  }

  // Fallback: exact dyadic images of the solver floats, flagged as float.
  for (auto& u : units) u.value = rational_from_double(u.raw);
  return materialize(assembled, units, gamma, false);
}

CertifyResult sonc_certify(const Poly& f, const std::vector<CircuitSupport>& circuits,
                           const SolveOptions& options) {
  if (f.is_zero()) throw std::invalid_argument("sonc_certify needs a nonzero polynomial");
  if (circuits.empty()) throw std::invalid_argument("sonc_certify needs candidate circuits");

  CertifyResult result;
  if (!necessary_conditions(f).pass) {
    result.status = CertifyStatus::NotCertified;
    return result;
  }

  int eta_degree = f.degree();
  for (const auto& c : circuits) {
    for (const auto& p : c.outer) eta_degree = std::max(eta_degree, p.degree());
    eta_degree = std::max(eta_degree, c.inner.degree());
  }

  AssemblyInput input;
  input.f = &f;
  input.products = {Poly::constant(f.dim(), Rational(1))};
  input.circuits = circuits;
  input.eta_degree = eta_degree;
  input.match_constant = true;
  AssembledRep assembled = assemble_rep(input);
  if (assembled.statically_infeasible) {
    result.status = CertifyStatus::NotCertified;
    return result;
  }

  Solution sol = solve(assembled.rep, options);
  switch (sol.status) {
    case SolveStatus::Optimal: {
      SoncDecomposition dec = extract_decomposition(assembled, sol.x, f, Rational(0));
      if (verify_decomposition(f, dec, VerifyMode::Float, 1e-6)) {
        result.status = CertifyStatus::Certified;
        result.decomposition = std::move(dec);
      } else {
        result.status = CertifyStatus::Indeterminate;
      }
      return result;
    }
    case SolveStatus::Infeasible:
      result.status = CertifyStatus::NotCertified;
      return result;
    case SolveStatus::IllPosed:
    case SolveStatus::IterationLimit:
      result.status = CertifyStatus::Indeterminate;
      return result;
  }
  return result;
}

}  // namespace sonc
