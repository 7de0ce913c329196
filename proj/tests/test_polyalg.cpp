#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "sonc/json_io.hpp"
#include "sonc/lattice.hpp"
#include "sonc/poly.hpp"

using namespace sonc;

namespace {

Exponent e2(int a, int b) { return Exponent({a, b}); }
Exponent e1(int a) { return Exponent({a}); }

Poly random_poly(std::mt19937_64& rng, int n, int max_deg, int terms) {
  SimplexLattice lattice = lattice_points_simplex(n, max_deg);
  std::uniform_int_distribution<std::size_t> pick(0, lattice.points.size() - 1);
  std::uniform_int_distribution<int> num(-8, 8);
  Poly p(n);
  for (int t = 0; t < terms; ++t)
    p.add_term(lattice.points[pick(rng)], Rational(num(rng), 3));
  return p;
}

}  // namespace

TEST_CASE("parse_poly merges terms and drops zeros") {
  Poly motzkin = parse_poly("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1", 2);
  CHECK(motzkin.term_count() == 4);
  CHECK(motzkin.coeff(e2(4, 2)) == 1);
  CHECK(motzkin.coeff(e2(2, 2)) == -3);

  Poly zero = parse_poly("x1 - x1", 1);
  CHECK(zero.is_zero());

  Poly example = parse_poly("x1^3 + x2^3 - x1*x2 + 4", 2);
  CHECK(example.term_count() == 4);
  CHECK(example.coeff(e2(1, 1)) == -1);
  CHECK(example.coeff(e2(0, 0)) == 4);

  Poly rational = parse_poly("1/2*x1^2 + 0.25", 1);
  CHECK(rational.coeff(e1(2)) == Rational(1, 2));
  CHECK(rational.coeff(e1(0)) == Rational(1, 4));

  // implicit multiplication after the coefficient
  CHECK(parse_poly("3x1", 1) == parse_poly("3*x1", 1));
}

TEST_CASE("parse_poly reports byte offsets and bad indices") {
  CHECK_THROWS_AS(parse_poly("x1 + ", 1), PolyParseError);
  CHECK_THROWS_AS(parse_poly("x3 + 1", 2), PolyParseError);
  CHECK_THROWS_AS(parse_poly("x0", 1), PolyParseError);
  try {
    parse_poly("x1 ^ y", 1);
    CHECK(false);
  } catch (const PolyParseError& e) {
    CHECK(e.offset() >= 3);
  }
}

TEST_CASE("to_string round-trips through the parser") {
  Poly p = parse_poly("x1^3 + x2^3 - x1*x2 + 4", 2);
  CHECK(parse_poly(p.to_string(), 2) == p);
  Poly q = parse_poly("-1/2*x1 + 2/3", 1);
  CHECK(parse_poly(q.to_string(), 1) == q);
}

TEST_CASE("evaluate") {
  Poly motzkin = parse_poly("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1", 2);
  std::vector<double> ones{1.0, 1.0};
  CHECK(motzkin.evaluate(ones) == doctest::Approx(0.0).epsilon(1e-14));

  Poly p = parse_poly("7*x1^2 - 3", 1);
  std::vector<double> origin{0.0};
  CHECK(p.evaluate(origin) == doctest::Approx(-3.0));

  Poly example = parse_poly("x1^3 + x2^3 - x1*x2 + 4", 2);
  std::vector<double> corner{-1.0, -1.0};
  CHECK(example.evaluate(corner) == doctest::Approx(1.0));
  // grid oracle upper envelope on [-1,1]^2
  auto oracle = testing::grid_min(example, -1.0, 1.0, 200);
  CHECK(oracle.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("multiply: hand-expanded products") {
  Poly a = parse_poly("x1 + 1", 1);
  Poly b = parse_poly("x1^2 - 2*x1 + 1", 1);
  CHECK(a * b == parse_poly("x1^3 - x1^2 - x1 + 1", 1));

  Poly p = parse_poly("x1^3 + x2^3 - x1*x2 + 4", 2);
  CHECK(p * Poly::constant(2, Rational(1)) == p);

  Poly f1 = parse_poly("x1^2 - 1", 1);
  Poly f2 = parse_poly("x1^2 - 4", 1);
  Poly product = f1 * f1 * f2 * f2;
  CHECK(product == parse_poly("x1^8 - 10*x1^6 + 33*x1^4 - 40*x1^2 + 16", 1));
  CHECK(product.degree() == f1.degree() * 2 + f2.degree() * 2);
}

TEST_CASE("multiply/evaluate consistency at random points") {
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (int round = 0; round < 10; ++round) {
    int n = 1 + static_cast<int>(rng() % 3);
    Poly p = random_poly(rng, n, 4, 5);
    Poly q = random_poly(rng, n, 4, 5);
    Poly pq = p * q;
    for (int k = 0; k < 10; ++k) {
      std::vector<double> x(static_cast<std::size_t>(n));
      for (auto& v : x) v = coord(rng);
      double lhs = pq.evaluate(x);
      double rhs = p.evaluate(x) * q.evaluate(x);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("simplex lattice points") {
  auto l24 = lattice_points_simplex(2, 4);
  CHECK(l24.points.size() == 15);
  auto evens = even_points(l24);
  REQUIRE(evens.size() == 6);
  std::vector<Exponent> expected = {e2(0, 0), e2(0, 2), e2(2, 0), e2(2, 2), e2(0, 4), e2(4, 0)};
  std::sort(expected.begin(), expected.end(), GrlexLess{});
  CHECK(evens == expected);

  auto l12 = lattice_points_simplex(1, 2);
  REQUIRE(l12.points.size() == 3);
  CHECK(l12.points[0] == e1(0));
  CHECK(l12.points[2] == e1(2));

  // cardinality C(n + 2d, n)
  auto binom = [](int a, int b) {
    long long r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  for (int n = 1; n <= 4; ++n)
    for (int d = 0; d <= 5; ++d)
      CHECK(static_cast<long long>(lattice_points_simplex(n, 2 * d).points.size()) ==
            binom(n + 2 * d, n));
}

TEST_CASE("newton vertices with exact witnesses") {
  std::vector<Exponent> support = {e2(0, 0), e2(4, 2), e2(2, 4), e2(2, 2)};
  auto vertices = newton_vertices(support);
  REQUIRE(vertices.size() == 3);
  CHECK(std::find(vertices.begin(), vertices.end(), e2(2, 2)) == vertices.end());

  // the excluded point has an exact convex-combination witness
  std::vector<Exponent> others = {e2(0, 0), e2(4, 2), e2(2, 4)};
  auto witness = convex_combination(e2(2, 2), others);
  REQUIRE(witness.has_value());
  Rational sum = 0;
  std::vector<Rational> reconstructed(2, Rational(0));
  for (std::size_t i = 0; i < others.size(); ++i) {
    sum += (*witness)[i];
    for (int k = 0; k < 2; ++k) reconstructed[static_cast<std::size_t>(k)] += (*witness)[i] * others[i][k];
  }
  CHECK(sum == 1);
  CHECK(reconstructed[0] == 2);
  CHECK(reconstructed[1] == 2);

  CHECK(newton_vertices({e2(3, 1)}) == std::vector<Exponent>{e2(3, 1)});

  auto verts1 = newton_vertices({e1(0), e1(2), e1(8)});
  REQUIRE(verts1.size() == 2);
  CHECK(verts1[0] == e1(0));
  CHECK(verts1[1] == e1(8));
}

TEST_CASE("newton vertices: excluded points always have witnesses") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 20; ++round) {
    int n = 1 + static_cast<int>(rng() % 3);
    Poly p = random_poly(rng, n, 6, 6);
    if (p.is_zero()) continue;
    auto support = p.support();
    auto vertices = newton_vertices(support);
    for (const auto& s : support) {
      bool is_vertex = std::find(vertices.begin(), vertices.end(), s) != vertices.end();
      std::vector<Exponent> others;
      for (const auto& o : support)
        if (!(o == s)) others.push_back(o);
      if (others.empty()) continue;
      auto witness = convex_combination(s, others);
      CHECK(witness.has_value() == !is_vertex);
      if (witness) {
        std::vector<Rational> acc(static_cast<std::size_t>(n), Rational(0));
        Rational total = 0;
        for (std::size_t i = 0; i < others.size(); ++i) {
          total += (*witness)[i];
          for (int k = 0; k < n; ++k) acc[static_cast<std::size_t>(k)] += (*witness)[i] * others[i][k];
        }
        CHECK(total == 1);
        for (int k = 0; k < n; ++k) CHECK(acc[static_cast<std::size_t>(k)] == s[k]);
      }
    }
  }
}

TEST_CASE("necessary conditions") {
  Poly motzkin = parse_poly("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1", 2);
  CHECK(necessary_conditions(motzkin).pass);

  Poly bad_coeff = parse_poly("-x1^2 + 1", 1);
  auto r1 = necessary_conditions(bad_coeff);
  CHECK_FALSE(r1.pass);
  REQUIRE(r1.witness.has_value());
  CHECK(*r1.witness == e1(2));

  Poly odd_vertex = parse_poly("x1^3 + 1", 1);
  auto r2 = necessary_conditions(odd_vertex);
  CHECK_FALSE(r2.pass);
  REQUIRE(r2.witness.has_value());
  CHECK(*r2.witness == e1(3));
}

TEST_CASE("failed necessary conditions expose negative values") {
  // A failing vertex with negative coefficient gives a direction along which
  // the polynomial goes negative; a coarse line search must find a witness.
  std::vector<Poly> failures = {parse_poly("-x1^2 + 1", 1), parse_poly("-2*x1^4 + x1^2 + 5", 1),
                                parse_poly("-x1^2*x2^2 + x1*x2 + 3", 2)};
  for (const auto& p : failures) {
    auto report = necessary_conditions(p);
    REQUIRE_FALSE(report.pass);
    REQUIRE(p.coeff(*report.witness) < 0);
    bool found_negative = false;
    for (double t = 1.0; t <= 4096.0 && !found_negative; t *= 2.0) {
      std::vector<double> x(static_cast<std::size_t>(p.dim()), t);
      if (p.evaluate(x) < 0) found_negative = true;
    }
    CHECK(found_negative);
  }
}

TEST_CASE("poly JSON round-trip") {
  Poly p = parse_poly("1/3*x1^3 + x2^3 - x1*x2 + 4", 2);
  CHECK(poly_from_json(poly_to_json(p)) == p);
  // terms serialize in graded lexicographic order
  Json j = poly_to_json(p);
  CHECK(j["terms"][0]["e"] == Json::array({0, 0}));
}
