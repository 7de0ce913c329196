#pragma once

#include <json.hpp>

#include "sonc/hierarchy.hpp"

namespace sonc {

using Json = nlohmann::ordered_json;

Json poly_to_json(const Poly& p);
Poly poly_from_json(const Json& j);

Json circuit_support_to_json(const CircuitSupport& s);
CircuitSupport circuit_support_from_json(const Json& j);

Json decomposition_to_json(const SoncDecomposition& dec);
SoncDecomposition decomposition_from_json(const Json& j);

Json problem_to_json(const Problem& p);
Problem problem_from_json(const Json& j);

Json rep_to_json(const Rep& rep);
Json solution_to_json(const Solution& sol);
Json bound_result_to_json(const BoundResult& result);

}  // namespace sonc
