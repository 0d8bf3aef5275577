#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace gls {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// How the exponent axis p is discretised.
///
/// Every supremum or infimum over p in [1,b) is taken on a grid built from
/// this policy. When b is infinite (or exceeds p_max) the grid stops at
/// p_max; results attained at that edge are flagged by the callers.
struct GridPolicy {
  std::size_t nodes = 512;
  double p_max = 1024.0;
  /// Relative distance (in units of b-1) at which grids stop short of an
  /// open endpoint.
  double edge_gap = 1e-12;

  /// Defaults, with p_max overridden by GLS_TOOLKIT_PMAX when it is set.
  static GridPolicy from_env();
};

/// n points lo*(hi/lo)^{i/(n-1)}, i = 0..n-1. Requires 0 < lo <= hi, n >= 2.
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

/// Nodes in [1, b) starting at p = 1.
///
/// For b = inf (or b > p_max) this is geometric on [1, p_max]. For finite b
/// the node 1 is followed by the open grid of (1, b), which accumulates at
/// both endpoints.
std::vector<double> p_grid(double b, const GridPolicy& policy = {});

/// Nodes strictly inside (1, b), accumulating at 1 and at b.
///
/// For b = inf the offsets q-1 are geometric from policy.edge_gap^{3/4} up
/// to p_max - 1.
std::vector<double> open_grid(double b, const GridPolicy& policy = {});

/// True when the grid for support bound b is cut at p_max.
inline bool truncated(double b, const GridPolicy& policy) { return !(b <= policy.p_max); }

struct GoldenResult {
  double x;
  double fx;
};

/// Golden-section search for a minimum of a unimodal f on [lo, hi].
///
/// Stops when the bracket is narrower than tol * max(1, |x|). The returned
/// point is the best one evaluated, endpoints included.
template <class F>
GoldenResult golden_section_minimize(F&& f, double lo, double hi, double tol = 1e-10) {
  constexpr double inv_phi = 0.6180339887498948482;
  double fa = f(lo);
  double fb = f(hi);
  GoldenResult best = fa <= fb ? GoldenResult{lo, fa} : GoldenResult{hi, fb};
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 400; ++it) {
    if (hi - lo <= tol * std::max(1.0, std::abs(c))) break;
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  if (fc < best.fx) best = {c, fc};
  if (fd < best.fx) best = {d, fd};
  return best;
}

}  // namespace gls
