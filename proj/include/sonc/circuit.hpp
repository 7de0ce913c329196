#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sonc/lattice.hpp"
#include "sonc/poly.hpp"

namespace sonc {

// A circuit support: affinely independent even outer exponents spanning a
// simplex, one inner exponent strictly inside it, and the exact barycentric
// weights of the inner point. r = 0 is the degenerate case of a lone even
// point (a monomial square), where inner == outer[0] and lambda == {1}.
struct CircuitSupport {
  std::vector<Exponent> outer;
  Exponent inner;
  std::vector<Rational> lambda;

  int r() const { return static_cast<int>(outer.size()) - 1; }
  int dim() const { return inner.dim(); }
  bool is_monomial_square() const { return r() == 0; }

  bool operator==(const CircuitSupport& o) const {
    return outer == o.outer && inner == o.inner;
  }
};

// A circuit polynomial: positive coefficients on the outer terms and a signed
// coefficient on the inner term.
struct CircuitPoly {
  CircuitSupport support;
  std::vector<Rational> outer_coeffs;
  Rational inner_coeff = 0;

  Poly to_poly() const;
};

// Exact barycentric coordinates of `beta` with respect to `outer`: the unique
// lambda with [outer; 1] * lambda = [beta; 1], provided the outer points are
// affinely independent and every lambda_j is strictly positive.
std::optional<std::vector<Rational>> barycentric(const std::vector<Exponent>& outer,
                                                 const Exponent& beta);

// Builds a CircuitSupport when (points, inner) satisfies the circuit
// conditions. Throws std::invalid_argument naming the witness if an outer
// point is not even; returns nullopt for dependent outer sets or when the
// inner point is not strictly interior.
std::optional<CircuitSupport> make_circuit(const std::vector<Exponent>& points,
                                           const Exponent& inner);

// Theta_f = prod_j (f_alpha(j) / lambda_j)^lambda_j. +infinity for r = 0.
double circuit_number(const CircuitPoly& c);

// The circuit nonnegativity criterion: |f_beta| <= Theta_f, or the circuit is
// a sum of monomial squares (beta even with f_beta >= 0). Decided exactly by
// an integer power comparison when the lambda denominators are small, with a
// guarded float fallback otherwise.
bool circuit_nonnegative(const CircuitPoly& c);

enum class EnumStrategy {
  Full,            // one support per qualifying outer simplex (paper census)
  SupportAdapted,  // all (outer, inner) pairs with inner in supp(f) + {0}
  LowDim,          // all r <= 1 supports with every admissible inner point
};

struct EnumOptions {
  std::uint64_t candidate_cap = 1000000;  // candidate outer simplices
};

class EnumerationCapExceeded : public std::runtime_error {
 public:
  explicit EnumerationCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

std::vector<CircuitSupport> enumerate_circuits(int n, int degree, EnumStrategy strategy,
                                               const Poly* support_of = nullptr,
                                               const EnumOptions& options = {});

// All strictly interior lattice points of the simplex spanned by `outer`,
// paired with their barycentric weights.
std::vector<CircuitSupport> circuits_with_inner(const std::vector<Exponent>& outer_candidates,
                                                int r, const std::vector<Exponent>& inner_candidates,
                                                const EnumOptions& options);

}  // namespace sonc
