// Test-only oracles: brute-force grid minimization and local refinement,
// independent of the certification path they check.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "sonc/poly.hpp"

namespace sonc::testing {

struct GridMin {
  double value = 0.0;
  std::vector<double> argmin;
};

// Exhaustive scan of [lo, hi]^n with `steps` intervals per axis.
inline GridMin grid_min(const Poly& p, double lo, double hi, int steps) {
  const int n = p.dim();
  GridMin best;
  best.value = std::numeric_limits<double>::infinity();
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  std::vector<double> point(static_cast<std::size_t>(n), 0.0);
  const double h = (hi - lo) / steps;
  while (true) {
    for (int i = 0; i < n; ++i) point[static_cast<std::size_t>(i)] = lo + h * idx[static_cast<std::size_t>(i)];
    double v = p.evaluate(point);
    if (v < best.value) {
      best.value = v;
      best.argmin = point;
    }
    int i = 0;
    while (i < n && ++idx[static_cast<std::size_t>(i)] > steps) {
      idx[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == n) break;
  }
  return best;
}

// Same scan restricted to points satisfying every g >= 0.
inline GridMin grid_min_constrained(const Poly& p, const std::vector<Poly>& gs, double lo,
                                    double hi, int steps) {
  const int n = p.dim();
  GridMin best;
  best.value = std::numeric_limits<double>::infinity();
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  std::vector<double> point(static_cast<std::size_t>(n), 0.0);
  const double h = (hi - lo) / steps;
  while (true) {
    for (int i = 0; i < n; ++i) point[static_cast<std::size_t>(i)] = lo + h * idx[static_cast<std::size_t>(i)];
    bool ok = true;
    for (const auto& g : gs)
      if (g.evaluate(point) < 0) {
        ok = false;
        break;
      }
    if (ok) {
      double v = p.evaluate(point);
      if (v < best.value) {
        best.value = v;
        best.argmin = point;
      }
    }
    int i = 0;
    while (i < n && ++idx[static_cast<std::size_t>(i)] > steps) {
      idx[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == n) break;
  }
  return best;
}

// Coordinate descent refinement from a starting point.
inline double refine_local(const Poly& p, std::vector<double> x, int rounds = 60) {
  double best = p.evaluate(x);
  double step = 0.25;
  for (int round = 0; round < rounds; ++round) {
    bool improved = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double dir : {-1.0, 1.0}) {
        std::vector<double> trial = x;
        trial[i] += dir * step;
        double v = p.evaluate(trial);
        if (v < best) {
          best = v;
          x = trial;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
    if (step < 1e-12) break;
  }
  return best;
}

}  // namespace sonc::testing
