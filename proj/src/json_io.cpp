#include "sonc/json_io.hpp"

#include <cmath>

namespace sonc {

namespace {

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) return rational_from_double(j.get<double>());
  throw std::invalid_argument("expected a rational value");
}

Exponent exponent_from_json(const Json& j) {
  std::vector<int> e;
  for (const auto& v : j) e.push_back(v.get<int>());
  return Exponent(std::move(e));
}

Json exponent_to_json(const Exponent& e) {
  Json j = Json::array();
  for (int v : e.entries) j.push_back(v);
  return j;
}

}  // namespace

Json poly_to_json(const Poly& p) {
  Json j;
  j["n"] = p.dim();
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) {
    Json term;
    term["c"] = format_rational(c);
    term["e"] = exponent_to_json(e);
    terms.push_back(std::move(term));
  }
  j["terms"] = std::move(terms);
  return j;
}

Poly poly_from_json(const Json& j) {
  Poly p(j.at("n").get<int>());
  for (const auto& term : j.at("terms"))
    p.add_term(exponent_from_json(term.at("e")), rational_from_json(term.at("c")));
  return p;
}

Json circuit_support_to_json(const CircuitSupport& s) {
  Json j;
  Json outer = Json::array();
  for (const auto& p : s.outer) outer.push_back(exponent_to_json(p));
  j["outer"] = std::move(outer);
  j["inner"] = exponent_to_json(s.inner);
  Json lambda = Json::array();
  for (const auto& l : s.lambda) lambda.push_back(format_rational(l));
  j["lambda"] = std::move(lambda);
  return j;
}

CircuitSupport circuit_support_from_json(const Json& j) {
  CircuitSupport s;
  for (const auto& p : j.at("outer")) s.outer.push_back(exponent_from_json(p));
  s.inner = exponent_from_json(j.at("inner"));
  for (const auto& l : j.at("lambda")) s.lambda.push_back(rational_from_json(l));
  if (s.outer.empty() || s.lambda.size() != s.outer.size())
    throw std::invalid_argument("malformed circuit support");
  return s;
}

Json decomposition_to_json(const SoncDecomposition& dec) {
  Json j;
  j["gamma"] = format_rational(dec.gamma);
  Json parts = Json::array();
  for (const auto& part : dec.parts) {
    Json pj;
    pj["circuit"] = circuit_support_to_json(part.circuit.support);
    Json outer = Json::array();
    for (const auto& c : part.circuit.outer_coeffs) outer.push_back(format_rational(c));
    pj["outer_coeffs"] = std::move(outer);
    pj["inner_coeff"] = format_rational(part.circuit.inner_coeff);
    pj["multiplier"] = poly_to_json(part.multiplier);
    parts.push_back(std::move(pj));
  }
  j["parts"] = std::move(parts);
  j["verified"] = dec.exact ? "exact" : "float";
  return j;
}

SoncDecomposition decomposition_from_json(const Json& j) {
  SoncDecomposition dec;
  dec.gamma = rational_from_json(j.at("gamma"));
  dec.exact = j.value("verified", "float") == std::string("exact");
  for (const auto& pj : j.at("parts")) {
    DecompositionPart part{CircuitPoly{}, poly_from_json(pj.at("multiplier"))};
    part.circuit.support = circuit_support_from_json(pj.at("circuit"));
    for (const auto& c : pj.at("outer_coeffs"))
      part.circuit.outer_coeffs.push_back(rational_from_json(c));
    part.circuit.inner_coeff = rational_from_json(pj.at("inner_coeff"));
    dec.parts.push_back(std::move(part));
  }
  return dec;
}

Json problem_to_json(const Problem& p) {
  Json j;
  j["f"] = poly_to_json(p.f);
  Json gs = Json::array();
  for (const auto& g : p.constraints) gs.push_back(poly_to_json(g));
  j["g"] = std::move(gs);
  if (p.box) j["box"] = format_rational(*p.box);
  return j;
}

Problem problem_from_json(const Json& j) {
  Problem p(poly_from_json(j.at("f")));
  if (j.contains("g"))
    for (const auto& g : j.at("g")) p.constraints.push_back(poly_from_json(g));
  if (j.contains("box") && !j.at("box").is_null()) p.box = rational_from_json(j.at("box"));
  return p;
}

namespace {

Json sparse_row_to_json(const SparseRow& row) {
  Json entries = Json::array();
  for (const auto& [idx, coeff] : row) {
    Json e;
    e["var"] = idx;
    e["coeff"] = coeff;
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace

Json rep_to_json(const Rep& rep) {
  Json j;
  Json vars = Json::array();
  for (int i = 0; i < rep.num_vars(); ++i) vars.push_back(rep.var_name(i));
  j["variables"] = std::move(vars);
  j["objective"] = sparse_row_to_json(rep.objective());
  Json eqs = Json::array();
  for (const auto& [row, rhs] : rep.eqs()) {
    Json e;
    e["row"] = sparse_row_to_json(row);
    e["rhs"] = rhs;
    eqs.push_back(std::move(e));
  }
  j["eq"] = std::move(eqs);
  Json ineqs = Json::array();
  for (const auto& [row, rhs] : rep.ineqs()) {
    Json e;
    e["row"] = sparse_row_to_json(row);
    e["rhs"] = rhs;
    ineqs.push_back(std::move(e));
  }
  j["ineq"] = std::move(ineqs);
  Json triples = Json::array();
  for (const auto& t : rep.triples()) {
    Json e;
    e["nu"] = t.nu;
    e["zeta"] = t.zeta;
    e["delta"] = t.delta;
    triples.push_back(std::move(e));
  }
  j["entropy_triples"] = std::move(triples);
  Json nonneg = Json::array();
  for (int v : rep.nonneg_vars()) nonneg.push_back(v);
  j["nonneg_vars"] = std::move(nonneg);
  return j;
}

Json solution_to_json(const Solution& sol) {
  Json j;
  j["status"] = to_string(sol.status);
  j["objective_value"] = sol.objective_value;
  j["iterations"] = sol.iterations;
  j["residual_linear"] = sol.residuals.primal_lin;
  j["residual_cone"] = sol.residuals.cone;
  return j;
}

Json bound_result_to_json(const BoundResult& result) {
  Json j;
  j["d"] = result.d;
  j["q"] = result.q;
  if (!result.error.empty()) {
    j["status"] = "error";
    j["error"] = result.error;
    return j;
  }
  j["status"] = to_string(result.status);
  if (result.status == SolveStatus::Infeasible) {
    j["value"] = "-inf";
  } else if (result.status == SolveStatus::Optimal && std::isfinite(result.value)) {
    j["value"] = result.value;
  }
  j["solver"] = solution_to_json(result.solver);
  if (result.certificate) j["certificate"] = decomposition_to_json(*result.certificate);
  return j;
}

}  // namespace sonc
