#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "gls/grid.hpp"
#include "gls/psi.hpp"

namespace gls {

/// A real function tabulated on a strictly increasing grid, optionally backed
/// by an exact evaluator that is used between nodes.
///
/// Without an evaluator the function is the piecewise-linear interpolant of
/// the nodes. With check_convex set, construction rejects tables whose slopes
/// decrease by more than 1e-9 (relative to the slope magnitude).
class ConvexGridFunction {
 public:
  ConvexGridFunction(std::vector<double> grid, std::vector<double> values, bool check_convex = false);
  ConvexGridFunction(std::vector<double> grid, std::function<double(double)> exact,
                     bool check_convex = false);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double lo() const { return grid_.front(); }
  double hi() const { return grid_.back(); }
  bool has_exact() const { return static_cast<bool>(exact_); }

  /// Value at x in [lo, hi].
  double operator()(double x) const;

 private:
  void validate(bool check_convex) const;

  std::vector<double> grid_;
  std::vector<double> values_;
  std::function<double(double)> exact_;
};

struct ConjugatePoint {
  double value;
  double argmax;
};

/// f*(u) = sup_x (x u - f(x)) over the grid, refined by one golden-section
/// pass on the two cells around the best node when f has an exact evaluator.
ConjugatePoint fenchel_point(const ConvexGridFunction& f, double u);
double fenchel(const ConvexGridFunction& f, double u);

/// v_psi(p) = p ln psi(p) tabulated on the domain grid of psi.
ConvexGridFunction v_tabulation(const GeneratingFunction& psi, const GridPolicy& policy = {});

/// Upper bound y -> T(y) on a tail function, valid for y >= y_min.
/// Values are clamped to [0, 1]; below y_min the envelope is 1.
struct TailEnvelope {
  std::function<double(double)> evaluate;
  double y_min = 0.0;

  double operator()(double y) const;

  static TailEnvelope zero(double y_min = 0.0);
  /// The exponential envelope exp(-v_psi*(ln(y/norm))) for y >= e * norm.
  static TailEnvelope from_gls(const GeneratingFunction& psi, double gls_norm,
                               const GridPolicy& policy = {});
};

/// Relative tolerance on the validity threshold y >= e * ||f||.
inline constexpr double kTailValiditySlack = 1e-6;

/// exp(-v_psi*(ln(y / gls_norm))), the tail bound of a function with the
/// given GLS norm. Throws OutOfValidity below y = e * gls_norm.
double tail_bound(const GeneratingFunction& psi, double gls_norm, double y,
                  const GridPolicy& policy = {});

struct NormBound {
  /// Upper bound on ||zeta|| in G psi.
  double value;
  /// value / K, the constructive counterpart of the constant C(psi).
  double constant;
  /// p where the supremum over the grid is attained.
  double argmax_p;
};

/// Bound on the G psi norm of any zeta whose tail is dominated by the
/// envelope. For each grid p the moment |zeta|_p^p <= p int y^{p-1}
/// min(1, T(y)) dy is integrated numerically; the result is the supremum of
/// the p-th roots over psi(p).
///
/// Requires b = inf and psi increasing to the grid cap. Throws
/// UnboundedMoment naming the first p whose integral does not converge.
NormBound norm_bound_from_tail(const TailEnvelope& tail, const GeneratingFunction& psi, double K,
                               const GridPolicy& policy = {});

/// M[psi](y) = exp(v_psi*(ln|y|)) for |y| >= e and C y^2 inside, with C set
/// by continuity at |y| = e.
double orlicz_M(const GeneratingFunction& psi, double y, const GridPolicy& policy = {});

}  // namespace gls
