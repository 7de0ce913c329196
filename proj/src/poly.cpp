#include "sonc/poly.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace sonc {

std::string exponent_to_string(const Exponent& e) {
  std::string s = "(";
  for (int i = 0; i < e.dim(); ++i) {
    if (i) s += ",";
    s += std::to_string(e[i]);
  }
  return s + ")";
}

void Poly::add_term(const Exponent& e, const Rational& c) {
  check_dim(e);
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Poly::set_coeff(const Exponent& e, const Rational& c) {
  check_dim(e);
  if (c == 0)
    terms_.erase(e);
  else
    terms_[e] = c;
}

std::vector<Exponent> Poly::support() const {
  std::vector<Exponent> s;
  s.reserve(terms_.size());
  for (const auto& [e, c] : terms_) s.push_back(e);
  return s;
}

Poly Poly::operator+(const Poly& o) const {
  if (n_ != o.n_) throw std::invalid_argument("polynomial dimension mismatch");
  Poly r(*this);
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  if (n_ != o.n_) throw std::invalid_argument("polynomial dimension mismatch");
  Poly r(*this);
  for (const auto& [e, c] : o.terms_) r.add_term(e, Rational(-c));
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  if (n_ != o.n_) throw std::invalid_argument("polynomial dimension mismatch");
  Poly r(n_);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) r.add_term(ea + eb, ca * cb);
  return r;
}

Poly Poly::scaled(const Rational& c) const {
  Poly r(n_);
  if (c == 0) return r;
  for (const auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
  return r;
}

double Poly::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != n_)
    throw std::invalid_argument("evaluation point dimension mismatch");
  double total = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = to_double(c);
    for (int i = 0; i < n_; ++i) {
      double base = point[static_cast<std::size_t>(i)];
      for (int k = 0; k < e[i]; ++k) m *= base;
    }
    total += m;
  }
  return total;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rational a = c;
    if (first) {
      if (a < 0) {
        out << "-";
        a = -a;
      }
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    bool has_vars = !e.is_zero();
    if (!has_vars || a != 1) {
      out << format_rational(a);
      if (has_vars) out << "*";
    }
    bool first_factor = true;
    for (int i = 0; i < n_; ++i) {
      if (e[i] == 0) continue;
      if (!first_factor) out << "*";
      first_factor = false;
      out << "x" << (i + 1);
      if (e[i] > 1) out << "^" << e[i];
    }
  }
  return out.str();
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, int n) : text_(text), n_(n) {}

  Poly run() {
    Poly p(n_);
    skip_ws();
    if (pos_ >= text_.size()) throw PolyParseError("empty polynomial", pos_);
    bool negative = consume_sign();
    while (true) {
      parse_term(p, negative);
      skip_ws();
      if (pos_ >= text_.size()) break;
      char c = text_[pos_];
      if (c == '+')
        negative = false;
      else if (c == '-')
        negative = true;
      else
        throw PolyParseError(std::string("expected '+' or '-', got '") + c + "'", pos_);
      ++pos_;
      skip_ws();
    }
    return p;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume_sign() {
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      bool neg = text_[pos_] == '-';
      ++pos_;
      skip_ws();
      return neg;
    }
    return false;
  }

  void parse_term(Poly& p, bool negative) {
    skip_ws();
    if (pos_ >= text_.size()) throw PolyParseError("expected term", pos_);
    Rational coeff(1);
    std::vector<int> exps(static_cast<std::size_t>(n_), 0);
    bool saw_anything = false;

    if (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.') {
      coeff = parse_number();
      saw_anything = true;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '*') {
        ++pos_;
        skip_ws();
        parse_factor(exps);  // at least one factor after '*'
        saw_anything = true;
      } else if (pos_ < text_.size() && text_[pos_] == 'x') {
        parse_factor(exps);
      }
    } else if (text_[pos_] == 'x') {
      parse_factor(exps);
      saw_anything = true;
    } else {
      throw PolyParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
    }

    while (true) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '*') {
        ++pos_;
        skip_ws();
        parse_factor(exps);
      } else if (pos_ < text_.size() && text_[pos_] == 'x') {
        parse_factor(exps);
      } else {
        break;
      }
    }

    if (!saw_anything) throw PolyParseError("malformed term", pos_);
    if (negative) coeff = -coeff;
    p.add_term(Exponent(exps), coeff);
  }

  Rational parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw PolyParseError("expected denominator digits", pos_);
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    try {
      return parse_rational(text_.substr(start, pos_ - start));
    } catch (const std::exception& e) {
      throw PolyParseError(e.what(), start);
    }
  }

  void parse_factor(std::vector<int>& exps) {
    if (pos_ >= text_.size() || text_[pos_] != 'x')
      throw PolyParseError("expected variable factor", pos_);
    std::size_t var_pos = pos_;
    ++pos_;
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw PolyParseError("expected variable index after 'x'", pos_);
    int idx = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      idx = idx * 10 + (text_[pos_] - '0');
      if (idx > 1000000) throw PolyParseError("variable index too large", var_pos);
      ++pos_;
    }
    if (idx < 1 || idx > n_)
      throw PolyParseError("variable index " + std::to_string(idx) + " out of range 1.." +
                               std::to_string(n_),
                           var_pos);
    int power = 1;
    if (pos_ < text_.size() && text_[pos_] == '^') {
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw PolyParseError("expected exponent digits after '^'", pos_);
      power = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        power = power * 10 + (text_[pos_] - '0');
        if (power > 1000000) throw PolyParseError("exponent too large", pos_);
        ++pos_;
      }
    }
    exps[static_cast<std::size_t>(idx - 1)] += power;
  }

  const std::string& text_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(const std::string& text, int n) {
  if (n < 1) throw std::invalid_argument("polynomial dimension must be >= 1");
  return Parser(text, n).run();
}

}  // namespace sonc
