#include "sonc/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sonc {

Poly CircuitPoly::to_poly() const {
  Poly p(support.dim());
  for (std::size_t j = 0; j < support.outer.size(); ++j)
    p.add_term(support.outer[j], outer_coeffs[j]);
  p.add_term(support.inner, inner_coeff);
  return p;
}

namespace {

// Row-reduces the augmented system [points; 1 | beta; 1] over the rationals.
// Returns the unique solution when the points are affinely independent and
// the system is consistent; nullopt otherwise.
std::optional<std::vector<Rational>> solve_affine_system(const std::vector<Exponent>& points,
                                                         const Exponent& beta) {
  const int rows = beta.dim() + 1;
  const int cols = static_cast<int>(points.size());
  std::vector<std::vector<Rational>> m(static_cast<std::size_t>(rows),
                                       std::vector<Rational>(static_cast<std::size_t>(cols + 1)));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j)
      m[i][static_cast<std::size_t>(j)] =
          (i < beta.dim()) ? Rational(points[static_cast<std::size_t>(j)][i]) : Rational(1);
    m[i].back() = (i < beta.dim()) ? Rational(beta[i]) : Rational(1);
  }

  std::vector<int> pivot_row_of_col(static_cast<std::size_t>(cols), -1);
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pr = -1;
    for (int i = rank; i < rows; ++i)
      if (m[i][static_cast<std::size_t>(col)] != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(m[static_cast<std::size_t>(rank)], m[static_cast<std::size_t>(pr)]);
    auto& prow = m[static_cast<std::size_t>(rank)];
    Rational inv = prow[static_cast<std::size_t>(col)];
    for (auto& v : prow) v /= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == rank) continue;
      Rational f = m[i][static_cast<std::size_t>(col)];
      if (f == 0) continue;
      for (std::size_t j = 0; j < prow.size(); ++j) m[i][j] -= f * prow[j];
    }
    pivot_row_of_col[static_cast<std::size_t>(col)] = rank;
    ++rank;
  }

  if (rank < cols) return std::nullopt;  // affinely dependent points
  for (int i = rank; i < rows; ++i)
    if (m[i].back() != 0) return std::nullopt;  // beta outside the affine hull

  std::vector<Rational> lambda(static_cast<std::size_t>(cols));
  for (int col = 0; col < cols; ++col)
    lambda[static_cast<std::size_t>(col)] =
        m[static_cast<std::size_t>(pivot_row_of_col[static_cast<std::size_t>(col)])].back();
  return lambda;
}

Rational rational_pow(const Rational& base, unsigned exp) {
  Rational result(1);
  Rational b = base;
  unsigned e = exp;
  while (e > 0) {
    if (e & 1u) result *= b;
    b *= b;
    e >>= 1u;
  }
  return result;
}

}  // namespace

std::optional<std::vector<Rational>> barycentric(const std::vector<Exponent>& outer,
                                                 const Exponent& beta) {
  if (outer.empty()) throw std::invalid_argument("barycentric needs a nonempty outer set");
  for (const auto& p : outer)
    if (p.dim() != beta.dim()) throw std::invalid_argument("dimension mismatch");
  auto lambda = solve_affine_system(outer, beta);
  if (!lambda) return std::nullopt;
  for (const auto& l : *lambda)
    if (l <= 0) return std::nullopt;
  return lambda;
}

std::optional<CircuitSupport> make_circuit(const std::vector<Exponent>& points,
                                           const Exponent& inner) {
  if (points.empty()) throw std::invalid_argument("make_circuit needs outer points");
  for (const auto& p : points)
    if (!p.is_even())
      throw std::invalid_argument("outer point not even: " + exponent_to_string(p));
  if (static_cast<int>(points.size()) > inner.dim() + 1) return std::nullopt;

  std::vector<Exponent> outer = points;
  std::sort(outer.begin(), outer.end(), GrlexLess{});
  outer.erase(std::unique(outer.begin(), outer.end()), outer.end());
  if (outer.size() != points.size()) return std::nullopt;

  auto lambda = barycentric(outer, inner);
  if (!lambda) return std::nullopt;
  CircuitSupport support;
  support.outer = std::move(outer);
  support.inner = inner;
  support.lambda = std::move(*lambda);
  return support;
}

double circuit_number(const CircuitPoly& c) {
  if (c.support.r() == 0) return std::numeric_limits<double>::infinity();
  if (c.outer_coeffs.size() != c.support.outer.size())
    throw std::invalid_argument("coefficient count does not match support");
  double log_theta = 0.0;
  for (std::size_t j = 0; j < c.outer_coeffs.size(); ++j) {
    if (c.outer_coeffs[j] <= 0)
      throw std::invalid_argument("outer coefficients must be strictly positive");
    double lj = to_double(c.support.lambda[j]);
    log_theta += lj * (std::log(to_double(c.outer_coeffs[j])) - std::log(lj));
  }
  return std::exp(log_theta);
}

bool circuit_nonnegative(const CircuitPoly& c) {
  if (c.support.r() == 0) return c.outer_coeffs.at(0) + c.inner_coeff >= 0;
  if (c.support.inner.is_even() && c.inner_coeff >= 0) return true;  // monomial squares

  Rational abs_beta = c.inner_coeff < 0 ? Rational(-c.inner_coeff) : c.inner_coeff;

  // |f_beta| <= Theta, raised to the lcm D of the lambda denominators:
  // |f_beta|^D <= prod_j (f_j / lambda_j)^(D lambda_j), all integer powers.
  BigInt d_lcm = 1;
  for (const auto& l : c.support.lambda) d_lcm = lcm(d_lcm, denominator(l));
  if (d_lcm <= 4096) {
    unsigned d = d_lcm.convert_to<unsigned>();
    Rational lhs = rational_pow(abs_beta, d);
    Rational rhs(1);
    for (std::size_t j = 0; j < c.outer_coeffs.size(); ++j) {
      Rational power = c.support.lambda[j] * d;
      rhs *= rational_pow(c.outer_coeffs[j] / c.support.lambda[j],
                          numerator(power).convert_to<unsigned>());
    }
    return lhs <= rhs;
  }

  double theta = circuit_number(c);
  double fb = std::abs(to_double(c.inner_coeff));
  return fb <= theta * (1.0 + 1e-12);
}

namespace {

std::vector<int> support_key(const CircuitSupport& s) {
  std::vector<int> key;
  key.push_back(s.r());
  for (const auto& p : s.outer) {
    key.push_back(p.degree());
    key.insert(key.end(), p.entries.begin(), p.entries.end());
  }
  key.push_back(s.inner.degree());
  key.insert(key.end(), s.inner.entries.begin(), s.inner.entries.end());
  return key;
}

void sort_and_dedup(std::vector<CircuitSupport>& supports) {
  std::sort(supports.begin(), supports.end(), [](const CircuitSupport& a, const CircuitSupport& b) {
    return support_key(a) < support_key(b);
  });
  supports.erase(std::unique(supports.begin(), supports.end()), supports.end());
}

template <class Fn>
void for_each_combination(int n, int k, Fn&& fn) {
  if (k > n || k <= 0) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > cap) return cap + 1;
  }
  return result;
}

bool inside_bbox(const Exponent& beta, const std::vector<Exponent>& pts) {
  for (int i = 0; i < beta.dim(); ++i) {
    int lo = pts[0][i], hi = pts[0][i];
    for (const auto& p : pts) {
      lo = std::min(lo, p[i]);
      hi = std::max(hi, p[i]);
    }
    if (beta[i] < lo || beta[i] > hi) return false;
  }
  return true;
}

Exponent midpoint(const Exponent& a, const Exponent& b) {
  std::vector<int> e(static_cast<std::size_t>(a.dim()));
  for (int i = 0; i < a.dim(); ++i) e[static_cast<std::size_t>(i)] = (a[i] + b[i]) / 2;
  return Exponent(std::move(e));
}

// Canonical census inner for r >= 2: the interior lattice point closest to
// the centroid in L1, graded-lex on ties.
const Exponent& centroid_pick(const std::vector<Exponent>& outer,
                              const std::vector<Exponent>& candidates) {
  const int m = static_cast<int>(outer.size());
  std::vector<int> center(static_cast<std::size_t>(outer[0].dim()), 0);
  for (const auto& p : outer)
    for (int i = 0; i < p.dim(); ++i) center[static_cast<std::size_t>(i)] += p[i];
  const Exponent* best = nullptr;
  long best_dist = 0;
  for (const auto& c : candidates) {
    long dist = 0;
    for (int i = 0; i < c.dim(); ++i) dist += std::abs(static_cast<long>(c[i]) * m -
                                                       center[static_cast<std::size_t>(i)]);
    if (!best || dist < best_dist || (dist == best_dist && grlex_less(c, *best))) {
      best = &c;
      best_dist = dist;
    }
  }
  return *best;
}

}  // namespace

std::vector<CircuitSupport> circuits_with_inner(const std::vector<Exponent>& outer_candidates,
                                                int r, const std::vector<Exponent>& inner_candidates,
                                                const EnumOptions& options) {
  std::vector<CircuitSupport> out;
  if (r < 1 || outer_candidates.empty()) return out;
  const int m = static_cast<int>(outer_candidates.size());
  if (binomial_capped(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(r + 1),
                      options.candidate_cap) > options.candidate_cap)
    throw EnumerationCapExceeded("candidate simplex count exceeds cap");

  for_each_combination(m, r + 1, [&](const std::vector<int>& idx) {
    std::vector<Exponent> subset;
    subset.reserve(idx.size());
    for (int i : idx) subset.push_back(outer_candidates[static_cast<std::size_t>(i)]);
    for (const auto& beta : inner_candidates) {
      if (!inside_bbox(beta, subset)) continue;
      auto lambda = barycentric(subset, beta);
      if (!lambda) continue;
      CircuitSupport s;
      s.outer = subset;
      s.inner = beta;
      s.lambda = std::move(*lambda);
      out.push_back(std::move(s));
    }
  });
  sort_and_dedup(out);
  return out;
}

std::vector<CircuitSupport> enumerate_circuits(int n, int degree, EnumStrategy strategy,
                                               const Poly* support_of, const EnumOptions& options) {
  if (n < 1 || degree < 0) throw std::invalid_argument("invalid enumeration parameters");
  if (strategy == EnumStrategy::SupportAdapted && support_of == nullptr)
    throw std::invalid_argument("support-adapted enumeration needs a polynomial");

  SimplexLattice lattice = lattice_points_simplex(n, degree);
  std::vector<Exponent> evens = even_points(lattice);

  std::vector<Exponent> inner_candidates;
  if (strategy == EnumStrategy::SupportAdapted) {
    inner_candidates = support_of->support();
    Exponent origin = Exponent::zeros(n);
    if (std::find(inner_candidates.begin(), inner_candidates.end(), origin) ==
        inner_candidates.end())
      inner_candidates.push_back(origin);
  } else {
    inner_candidates = lattice.points;
  }

  std::vector<CircuitSupport> out;

  // r = 0: lone even points.
  for (const auto& e : evens) {
    if (strategy == EnumStrategy::SupportAdapted &&
        std::find(inner_candidates.begin(), inner_candidates.end(), e) == inner_candidates.end())
      continue;
    CircuitSupport s;
    s.outer = {e};
    s.inner = e;
    s.lambda = {Rational(1)};
    out.push_back(std::move(s));
  }

  const int max_r = (strategy == EnumStrategy::LowDim) ? 1 : n;
  std::uint64_t total_candidates = 0;
  for (int r = 1; r <= max_r; ++r) {
    total_candidates += binomial_capped(static_cast<std::uint64_t>(evens.size()),
                                        static_cast<std::uint64_t>(r + 1), options.candidate_cap);
    if (total_candidates > options.candidate_cap)
      throw EnumerationCapExceeded("candidate simplex count exceeds cap of " +
                                   std::to_string(options.candidate_cap));
  }

  for (int r = 1; r <= max_r; ++r) {
    for_each_combination(static_cast<int>(evens.size()), r + 1, [&](const std::vector<int>& idx) {
      std::vector<Exponent> subset;
      subset.reserve(idx.size());
      for (int i : idx) subset.push_back(evens[static_cast<std::size_t>(i)]);

      std::vector<Exponent> interior;
      std::vector<std::vector<Rational>> weights;
      for (const auto& beta : inner_candidates) {
        if (!inside_bbox(beta, subset)) continue;
        auto lambda = barycentric(subset, beta);
        if (!lambda) continue;
        interior.push_back(beta);
        weights.push_back(std::move(*lambda));
      }
      if (interior.empty()) return;

      auto emit = [&](std::size_t k) {
        CircuitSupport s;
        s.outer = subset;
        s.inner = interior[k];
        s.lambda = weights[k];
        out.push_back(std::move(s));
      };

      if (strategy == EnumStrategy::Full) {
        // The census counts one support per outer simplex.
        if (r == 1) {
          Exponent mid = midpoint(subset[0], subset[1]);
          for (std::size_t k = 0; k < interior.size(); ++k)
            if (interior[k] == mid) {
              emit(k);
              return;
            }
        }
        const Exponent& pick = centroid_pick(subset, interior);
        for (std::size_t k = 0; k < interior.size(); ++k)
          if (interior[k] == pick) {
            emit(k);
            return;
          }
      } else {
        for (std::size_t k = 0; k < interior.size(); ++k) emit(k);
      }
    });
  }

  sort_and_dedup(out);
  return out;
}

}  // namespace sonc
