#include "sonc/hierarchy.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <set>
#include <thread>

namespace sonc {

std::vector<Poly> effective_constraints(const Problem& p) {
  std::vector<Poly> gs = p.constraints;
  for (const auto& g : gs)
    if (g.dim() != p.f.dim()) throw std::invalid_argument("constraint dimension mismatch");
  if (p.box) {
    const int n = p.f.dim();
    for (int i = 0; i < n; ++i) {
      for (int sign : {-1, +1}) {
        Poly l(n);
        l.add_term(Exponent::zeros(n), *p.box);
        std::vector<int> e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(i)] = 1;
        l.add_term(Exponent(e), Rational(sign));
        gs.push_back(std::move(l));
      }
    }
  }
  return gs;
}

ProductSet constraint_products(const Problem& p, int q, std::uint64_t cap) {
  if (q < 0) throw std::invalid_argument("product level must be >= 0");
  std::vector<Poly> gs = effective_constraints(p);
  const int n = p.f.dim();

  ProductSet set;
  set.q = q;
  int max_deg = 1;
  for (const auto& g : gs) max_deg = std::max(max_deg, g.degree());
  set.tau = max_deg * q;

  // Multisets of size <= q from gs: C(m + q, q) total including the empty one.
  std::uint64_t multisets = 1;
  for (int k = 1; k <= q; ++k) {
    multisets = multisets * (static_cast<std::uint64_t>(gs.size()) + static_cast<std::uint64_t>(k));
    multisets /= static_cast<std::uint64_t>(k);
    if (multisets > cap)
      throw ProductCapExceeded("R_q multiset count exceeds cap of " + std::to_string(cap));
  }
  set.multiset_count = multisets;

  std::map<std::string, Poly> dedup;
  Poly one = Poly::constant(n, Rational(1));

  // Each multiset of size k once: extend by factors with index >= the last.
  std::vector<std::pair<Poly, std::size_t>> level = {{one, 0}};
  for (int k = 1; k <= q; ++k) {
    std::vector<std::pair<Poly, std::size_t>> next_level;
    for (const auto& [poly, start] : level)
      for (std::size_t i = start; i < gs.size(); ++i) next_level.emplace_back(poly * gs[i], i);
    level = std::move(next_level);
    for (const auto& [poly, start] : level) dedup.emplace(poly.to_string(), poly);
  }

  set.members.reserve(dedup.size() + 1);
  set.members.push_back(one);
  dedup.erase(one.to_string());
  for (const auto& [key, poly] : dedup) set.members.push_back(poly);
  return set;
}

std::vector<CircuitSupport> hierarchy_circuits(const Poly& f, const ProductSet& products, int d,
                                               const EnumOptions& options, bool full_circuits) {
  const int n = f.dim();
  const int two_d = 2 * d;
  SimplexLattice lattice = lattice_points_simplex(n, two_d);
  std::vector<Exponent> evens = even_points(lattice);

  std::vector<CircuitSupport> circuits;
  for (const auto& e : evens) {
    CircuitSupport s;
    s.outer = {e};
    s.inner = e;
    s.lambda = {Rational(1)};
    circuits.push_back(std::move(s));
  }

  if (full_circuits) {
    for (int r = 1; r <= n; ++r) {
      auto batch = circuits_with_inner(evens, r, lattice.points, options);
      circuits.insert(circuits.end(), batch.begin(), batch.end());
    }
    return circuits;
  }

  // Inner points that can reach a coefficient of f through a product support.
  std::set<Exponent, GrlexLess> needed;
  for (const auto& [eta, c] : f.terms()) {
    if (eta.is_zero()) continue;
    for (const auto& h : products.members)
      for (const auto& [gamma, hc] : h.terms())
        if (auto beta = eta.minus(gamma))
          if (beta->degree() <= two_d && !beta->is_zero()) needed.insert(*beta);
  }
  std::vector<Exponent> needed_list(needed.begin(), needed.end());
  {
    auto batch = circuits_with_inner(evens, 1, needed_list, options);
    circuits.insert(circuits.end(), batch.begin(), batch.end());
  }

  std::vector<Exponent> support_inners;
  for (const auto& [eta, c] : f.terms())
    if (!eta.is_zero() && eta.degree() <= two_d) support_inners.push_back(eta);
  for (int r = 2; r <= n; ++r) {
    auto batch = circuits_with_inner(evens, r, support_inners, options);
    circuits.insert(circuits.end(), batch.begin(), batch.end());
  }
  return circuits;
}

AssembledRep assemble_hierarchy_rep(const Problem& p, int d, int q,
                                    const std::vector<CircuitSupport>& circuits,
                                    std::uint64_t product_cap) {
  if (d < 1) throw std::invalid_argument("hierarchy level d must be >= 1");
  ProductSet products = constraint_products(p, q, product_cap);
  AssemblyInput input;
  input.f = &p.f;
  input.products = products.members;
  input.circuits = circuits;
  input.eta_degree = 2 * d + products.tau;
  input.match_constant = false;
  return assemble_rep(input);
}

BoundResult sonc_bound(const Problem& p, int d, int q, const HierarchyOptions& options) {
  BoundResult result;
  result.d = d;
  result.q = q;
  if (d < 1) throw std::invalid_argument("hierarchy level d must be >= 1");

  ProductSet products = constraint_products(p, q, options.product_cap);
  std::vector<CircuitSupport> circuits =
      hierarchy_circuits(p.f, products, d, options.enumeration, options.full_circuits);

  AssemblyInput input;
  input.f = &p.f;
  input.products = products.members;
  input.circuits = circuits;
  input.eta_degree = 2 * d + products.tau;
  input.match_constant = false;
  AssembledRep assembled = assemble_rep(input);

  if (assembled.statically_infeasible) {
    result.status = SolveStatus::Infeasible;
    result.value = -std::numeric_limits<double>::infinity();
    return result;
  }

  Solution sol = solve(assembled.rep, options.solve);
  result.solver = sol;
  result.status = sol.status;
  switch (sol.status) {
    case SolveStatus::Optimal: {
      double raw = to_double(p.f.constant_term()) - sol.objective_value;
      Rational vrat = round_rational(raw, 1000000);
      SoncDecomposition dec = extract_decomposition(assembled, sol.x, p.f, vrat);
      if (verify_decomposition(p.f, dec, VerifyMode::Float, 1e-6)) {
        result.value = to_double(vrat);
        result.certificate = std::move(dec);
      } else {
        // A bound is only reported with a certificate behind it.
        result.status = SolveStatus::IterationLimit;
      }
      return result;
    }
    case SolveStatus::Infeasible:
      result.value = -std::numeric_limits<double>::infinity();
      return result;
    case SolveStatus::IllPosed:
    case SolveStatus::IterationLimit:
      return result;
  }
  return result;
}

namespace {

int schedule_threads(int requested, std::size_t cells) {
  int threads = requested;
  if (threads <= 0) {
    if (const char* env = std::getenv("SONC_THREADS")) threads = std::atoi(env);
  }
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = 1;
  return std::min<int>(threads, static_cast<int>(cells));
}

}  // namespace

std::vector<BoundResult> bound_schedule(const Problem& p, int d_max, int q_max,
                                        const HierarchyOptions& options) {
  if (d_max < 1 || q_max < 0) throw std::invalid_argument("invalid schedule levels");
  std::vector<std::pair<int, int>> cells;
  for (int d = 1; d <= d_max; ++d)
    for (int q = 0; q <= q_max; ++q) cells.emplace_back(d, q);

  std::vector<BoundResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) break;
      auto [d, q] = cells[i];
      try {
        results[i] = sonc_bound(p, d, q, options);
      } catch (const std::exception& e) {
        results[i].d = d;
        results[i].q = q;
        results[i].error = e.what();
      }
    }
  };

  int threads = schedule_threads(options.threads, cells.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

}  // namespace sonc
