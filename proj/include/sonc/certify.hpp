#pragma once

#include <optional>
#include <vector>

#include "sonc/assemble.hpp"
#include "sonc/circuit.hpp"
#include "sonc/rep.hpp"

namespace sonc {

// A signomial sum_j f_alpha(j) exp(<alpha(j), x>) + f_beta exp(<beta, x>)
// with real exponent vectors; more outer terms than variables is allowed.
struct Signomial {
  std::vector<std::vector<double>> outer_exponents;
  std::vector<double> outer_coeffs;  // strictly positive
  std::vector<double> beta;
  double beta_coeff = 0.0;
};

// Nonnegativity of an AM/GM exponential via the relative entropy
// feasibility condition D(nu, e f_alpha) <= f_beta, Q nu = <1, nu> beta.
bool amgm_nonnegative(const Signomial& s, const SolveOptions& options = {});

// The probability-measure parametrization restricted to simplicial inputs:
// D(lambda, f_alpha) + log(-f_beta) <= 0 with lambda the barycentric weights.
// Closed form; only meaningful for inner_coeff < 0.
bool simplicial_amgm_alternative(const CircuitPoly& c);

struct DecompositionPart {
  CircuitPoly circuit;
  Poly multiplier;
};

struct SoncDecomposition {
  std::vector<DecompositionPart> parts;
  Rational gamma = 0;
  bool exact = false;  // exact rational matching vs float-verified only
};

enum class CertifyStatus { Certified, NotCertified, Indeterminate };

struct CertifyResult {
  CertifyStatus status = CertifyStatus::Indeterminate;
  std::optional<SoncDecomposition> decomposition;
};

// SONC membership via the matching REP over the given circuit supports.
// Returns NotCertified without solving when the necessary conditions fail;
// solver iteration limits surface as Indeterminate, never as NotCertified.
CertifyResult sonc_certify(const Poly& f, const std::vector<CircuitSupport>& circuits,
                           const SolveOptions& options = {});

enum class VerifyMode { Exact, Float };

// (a) every part passes the circuit nonnegativity criterion, and
// (b) sum_j H_j s_j + gamma re-expands to f, exactly or within tol.
bool verify_decomposition(const Poly& f, const SoncDecomposition& dec, VerifyMode mode,
                          double tol = 1e-6);

Poly expand_decomposition(const SoncDecomposition& dec, int n);

// Turns a solver point into a decomposition: continued-fraction rounding with
// denominator bound 10^6, then an exact repair of the matching equations over
// the coefficient variables. Falls back to dyadic float coefficients (with
// exact = false) when the repair fails or breaks a nonnegativity margin.
SoncDecomposition extract_decomposition(const AssembledRep& assembled,
                                        const std::vector<double>& x, const Poly& target,
                                        const Rational& gamma);

}  // namespace sonc
