#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sonc/exponent.hpp"
#include "sonc/rational.hpp"

namespace sonc {

// Sparse multivariate polynomial with exact rational coefficients.
// Terms are kept in graded lexicographic order and zero coefficients
// are never stored.
class Poly {
 public:
  using TermMap = std::map<Exponent, Rational, GrlexLess>;

  explicit Poly(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("polynomial dimension must be >= 1");
  }
  static Poly constant(int n, const Rational& c) {
    Poly p(n);
    p.add_term(Exponent::zeros(n), c);
    return p;
  }

  int dim() const { return n_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.degree());
    return d;
  }

  Rational coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }
  Rational constant_term() const { return coeff(Exponent::zeros(n_)); }

  void add_term(const Exponent& e, const Rational& c);
  void set_coeff(const Exponent& e, const Rational& c);

  std::vector<Exponent> support() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const Rational& c) const;

  bool operator==(const Poly& o) const { return n_ == o.n_ && terms_ == o.terms_; }

  double evaluate(std::span<const double> point) const;

  std::string to_string() const;

 private:
  void check_dim(const Exponent& e) const {
    if (e.dim() != n_) throw std::invalid_argument("exponent dimension mismatch");
  }
  int n_;
  TermMap terms_;
};

// Reported with the byte offset of the offending token.
class PolyParseError : public std::runtime_error {
 public:
  PolyParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Grammar: terms separated by +/-, term = [coefficient][*]factors,
// factor = x<i>[^<k>], coefficient = decimal or rational p/q.
Poly parse_poly(const std::string& text, int n);

}  // namespace sonc
