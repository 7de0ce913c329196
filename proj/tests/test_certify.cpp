#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "oracle.hpp"
#include "sonc/certify.hpp"
#include "sonc/json_io.hpp"

using namespace sonc;

namespace {

Exponent e2(int a, int b) { return Exponent({a, b}); }
Exponent e1(int a) { return Exponent({a}); }

Signomial motzkin_signomial(double beta_coeff) {
  Signomial s;
  s.outer_exponents = {{0, 0}, {4, 2}, {2, 4}};
  s.outer_coeffs = {1.0, 1.0, 1.0};
  s.beta = {2, 2};
  s.beta_coeff = beta_coeff;
  return s;
}

CircuitPoly random_simplicial(std::mt19937_64& rng) {
  // Random axis circuit with negative inner coefficient away from the
  // decision boundary.
  while (true) {
    int n = 1 + static_cast<int>(rng() % 2);
    int two_d = 2 * (1 + static_cast<int>(rng() % 3));
    std::vector<Exponent> outer;
    outer.push_back(Exponent::zeros(n));
    for (int i = 0; i < n; ++i) {
      std::vector<int> e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(i)] = two_d;
      outer.push_back(Exponent(std::move(e)));
    }
    SimplexLattice lattice = lattice_points_simplex(n, two_d);
    std::uniform_int_distribution<std::size_t> pick(0, lattice.points.size() - 1);
    auto support = make_circuit(outer, lattice.points[pick(rng)]);
    if (!support) continue;
    CircuitPoly c;
    c.support = *support;
    std::uniform_int_distribution<int> num(1, 10);
    for (std::size_t j = 0; j < support->outer.size(); ++j)
      c.outer_coeffs.push_back(Rational(num(rng), 2));
    double theta = circuit_number(c);
    std::uniform_real_distribution<double> scale(0.2, 1.8);
    double magnitude = theta * scale(rng);
    if (std::abs(magnitude - theta) < 1e-4 * (1.0 + theta)) continue;
    c.inner_coeff = rational_from_double(-magnitude);
    return c;
  }
}

Signomial to_signomial(const CircuitPoly& c) {
  Signomial s;
  for (std::size_t j = 0; j < c.support.outer.size(); ++j) {
    std::vector<double> a;
    for (int k = 0; k < c.support.dim(); ++k) a.push_back(c.support.outer[j][k]);
    s.outer_exponents.push_back(std::move(a));
    s.outer_coeffs.push_back(to_double(c.outer_coeffs[j]));
  }
  for (int k = 0; k < c.support.dim(); ++k) s.beta.push_back(c.support.inner[k]);
  s.beta_coeff = to_double(c.inner_coeff);
  return s;
}

SoncDecomposition load_fixture_certificate() {
  std::ifstream in(std::string(SONC_DATA_DIR) + "/example53_certificate.json");
  REQUIRE(in.good());
  Json j;
  in >> j;
  return decomposition_from_json(j);
}

}  // namespace

TEST_CASE("amgm_nonnegative on the simplicial boundary cases") {
  CHECK(amgm_nonnegative(motzkin_signomial(-3.0)));       // boundary, nu = lambda
  CHECK_FALSE(amgm_nonnegative(motzkin_signomial(-3.1)));  // past the circuit number
  CHECK(amgm_nonnegative(motzkin_signomial(0.5)));         // no negative coefficient
}

TEST_CASE("amgm feasibility agrees with the circuit criterion and the probability form") {
  std::mt19937_64 rng(20240811);
  for (int round = 0; round < 100; ++round) {
    CircuitPoly c = random_simplicial(rng);
    bool by_theta = circuit_nonnegative(c);
    bool by_rep = amgm_nonnegative(to_signomial(c));
    bool by_alternative = simplicial_amgm_alternative(c);
    CHECK(by_rep == by_theta);
    CHECK(by_alternative == by_theta);
  }
}

TEST_CASE("sonc_certify: Motzkin polynomial over its adapted supports") {
  Poly motzkin = parse_poly("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1", 2);
  auto circuits = enumerate_circuits(2, 6, EnumStrategy::SupportAdapted, &motzkin);
  auto result = sonc_certify(motzkin, circuits);
  REQUIRE(result.status == CertifyStatus::Certified);
  REQUIRE(result.decomposition.has_value());
  CHECK(verify_decomposition(motzkin, *result.decomposition, VerifyMode::Float, 1e-6));

  bool has_motzkin_circuit = false;
  for (const auto& part : result.decomposition->parts)
    if (part.circuit.support.inner == e2(2, 2) && part.circuit.support.r() == 2)
      has_motzkin_circuit = true;
  CHECK(has_motzkin_circuit);
}

TEST_CASE("sonc_certify: sums of monomial squares come back exact") {
  Poly f = parse_poly("x1^2 + x2^2", 2);
  auto circuits = enumerate_circuits(2, 2, EnumStrategy::SupportAdapted, &f);
  auto result = sonc_certify(f, circuits);
  REQUIRE(result.status == CertifyStatus::Certified);
  CHECK(result.decomposition->exact);
  CHECK(verify_decomposition(f, *result.decomposition, VerifyMode::Exact));
  for (const auto& part : result.decomposition->parts) CHECK(part.circuit.support.r() == 0);
}

TEST_CASE("sonc_certify: the squared product with four positive zeros is rejected") {
  Poly f = parse_poly("x1^8 - 10*x1^6 + 33*x1^4 - 40*x1^2 + 16", 1);
  auto circuits = enumerate_circuits(1, 8, EnumStrategy::Full);
  auto result = sonc_certify(f, circuits);
  CHECK(result.status == CertifyStatus::NotCertified);
}

TEST_CASE("sonc_certify: necessary-condition filter rejects without solving") {
  Poly f = parse_poly("x1^3 + 1", 1);
  auto circuits = enumerate_circuits(1, 4, EnumStrategy::Full);
  auto result = sonc_certify(f, circuits);
  CHECK(result.status == CertifyStatus::NotCertified);
}

TEST_CASE("single-circuit membership matches the closed-form criterion") {
  std::mt19937_64 rng(5150);
  int certified_agree = 0;
  for (int round = 0; round < 100; ++round) {
    CircuitPoly c = random_simplicial(rng);
    Poly f = c.to_poly();
    auto result = sonc_certify(f, {c.support});
    bool expected = circuit_nonnegative(c);
    REQUIRE(result.status != CertifyStatus::Indeterminate);
    CHECK((result.status == CertifyStatus::Certified) == expected);
    if (result.status == CertifyStatus::Certified) {
      CHECK(verify_decomposition(f, *result.decomposition, VerifyMode::Float, 1e-6));
      CHECK((result.decomposition->exact ||
             verify_decomposition(f, *result.decomposition, VerifyMode::Float, 1e-6)));
      ++certified_agree;
    }
  }
  CHECK(certified_agree > 10);  // the sampler produces both outcomes
}

TEST_CASE("verify_decomposition: the worked-example fixture") {
  Poly f = parse_poly("x1^3 + x2^3 - x1*x2 + 4", 2);
  SoncDecomposition dec = load_fixture_certificate();
  CHECK(verify_decomposition(f, dec, VerifyMode::Exact));
  CHECK(verify_decomposition(f, dec, VerifyMode::Float, 1e-9));

  // a perturbed coefficient breaks exact verification
  SoncDecomposition broken = dec;
  broken.parts[0].circuit.outer_coeffs[0] += Rational(1, 1000);
  CHECK_FALSE(verify_decomposition(f, broken, VerifyMode::Exact));

  // a part violating the circuit criterion is rejected regardless of matching
  SoncDecomposition bad = dec;
  CircuitPoly outside;
  outside.support = *make_circuit({e1(0), e1(4)}, e1(2));
  outside.outer_coeffs = {Rational(1), Rational(1)};
  outside.inner_coeff = -5;
  Poly one(1);
  one.add_term(e1(0), 1);
  bad.parts.clear();
  bad.parts.push_back({outside, one});
  CHECK_FALSE(verify_decomposition(outside.to_poly(), bad, VerifyMode::Exact));
}

TEST_CASE("certificates re-expand through json round-trips") {
  Poly f = parse_poly("x1^8 - 4*x1^2 + 3", 1);
  auto circuits = enumerate_circuits(1, 8, EnumStrategy::SupportAdapted, &f);
  auto result = sonc_certify(f, circuits);
  REQUIRE(result.status == CertifyStatus::Certified);
  Json j = decomposition_to_json(*result.decomposition);
  SoncDecomposition round = decomposition_from_json(j);
  CHECK(verify_decomposition(f, round, VerifyMode::Float, 1e-6));
  CHECK(round.exact == result.decomposition->exact);
}
