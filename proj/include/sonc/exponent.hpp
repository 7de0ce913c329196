#pragma once

#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sonc {

// A lattice point in N^n, used as a monomial exponent vector.
struct Exponent {
  std::vector<int> entries;

  Exponent() = default;
  explicit Exponent(std::vector<int> e) : entries(std::move(e)) {
    for (int v : entries)
      if (v < 0) throw std::invalid_argument("exponent entries must be nonnegative");
  }
  static Exponent zeros(int n) { return Exponent(std::vector<int>(n, 0)); }

  int dim() const { return static_cast<int>(entries.size()); }
  int degree() const { return std::accumulate(entries.begin(), entries.end(), 0); }
  int operator[](int i) const { return entries[static_cast<std::size_t>(i)]; }
  bool is_zero() const { return degree() == 0; }
  bool is_even() const {
    for (int v : entries)
      if (v % 2 != 0) return false;
    return true;
  }

  Exponent operator+(const Exponent& o) const {
    std::vector<int> r(entries);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += o.entries[i];
    return Exponent(std::move(r));
  }
  // Componentwise difference, empty when any entry would go negative.
  std::optional<Exponent> minus(const Exponent& o) const {
    std::vector<int> r(entries);
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] -= o.entries[i];
      if (r[i] < 0) return std::nullopt;
    }
    return Exponent(std::move(r));
  }

  bool operator==(const Exponent& o) const { return entries == o.entries; }
  bool operator!=(const Exponent& o) const { return !(*this == o); }
};

// Graded lexicographic: total degree first, lexicographic on ties.
inline bool grlex_less(const Exponent& a, const Exponent& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  return a.entries < b.entries;
}

struct GrlexLess {
  bool operator()(const Exponent& a, const Exponent& b) const { return grlex_less(a, b); }
};

struct ExponentHash {
  std::size_t operator()(const Exponent& e) const {
    std::size_t h = 1469598103934665603ull;
    for (int v : e.entries) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

std::string exponent_to_string(const Exponent& e);

}  // namespace sonc
