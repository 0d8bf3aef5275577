#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "gls/grid.hpp"

namespace gls {

/// Slowly varying modulation L used by the psi_{m,L} and psi^{<b,gamma,L>}
/// families. Only L(y) = ln^r(y + e) and positive constants are supported.
struct SlowlyVarying {
  enum class Kind { LogPower, Constant };

  Kind kind = Kind::Constant;
  double value = 1.0;  // r for LogPower, the constant for Constant

  static SlowlyVarying log_power(double r);
  static SlowlyVarying constant(double c);

  double operator()(double y) const;
  /// ln L(y); stays finite where L(y) itself would overflow.
  double log(double y) const;

  friend bool operator==(const SlowlyVarying&, const SlowlyVarying&) = default;
};

enum class Family { PsiM, PsiML, PsiBGammaL, Degenerate, PsiBBeta, Tabulated, PowerWeighted };

std::string family_name(Family family);

class GeneratingFunction;

struct PsiMParams {
  double m;
  friend bool operator==(const PsiMParams&, const PsiMParams&) = default;
};
struct PsiMLParams {
  double m;
  SlowlyVarying L;
  friend bool operator==(const PsiMLParams&, const PsiMLParams&) = default;
};
struct PsiBGammaLParams {
  double b;
  double gamma;
  SlowlyVarying L;
  friend bool operator==(const PsiBGammaLParams&, const PsiBGammaLParams&) = default;
};
struct DegenerateParams {
  double r;
  friend bool operator==(const DegenerateParams&, const DegenerateParams&) = default;
};
struct PsiBBetaParams {
  double b;
  double beta;
  friend bool operator==(const PsiBBetaParams&, const PsiBBetaParams&) = default;
};
struct TabulatedParams {
  std::vector<double> grid;
  std::vector<double> values;
  friend bool operator==(const TabulatedParams&, const TabulatedParams&) = default;
};
/// zeta(p) = p^delta * base(p), the enlarged function of the unequal-power case.
struct PowerWeightedParams {
  std::shared_ptr<const GeneratingFunction> base;
  double delta;
  friend bool operator==(const PowerWeightedParams& a, const PowerWeightedParams& b);
};

/// A generating function psi of a Grand Lebesgue Space: positive and
/// continuous on [1, b), with infimum 1 once normalised.
///
/// Values are immutable; every transformation returns a new object. The
/// evaluated value is multiplier() times the family's formula. normalize()
/// divides by the infimum and records the divisor in scale().
///
/// Tabulated functions are defined on the closed range of their grid and
/// never extrapolate, so their lower end is the first grid node and their
/// support bound is the last one (included).
class GeneratingFunction {
 public:
  using Params = std::variant<PsiMParams, PsiMLParams, PsiBGammaLParams, DegenerateParams,
                              PsiBBetaParams, TabulatedParams, PowerWeightedParams>;

  /// p^{1/m}, b = inf. Requires m > 0.
  static GeneratingFunction psi_m(double m);
  /// p^{1/m} L^{-1/(m-1)}(p^{(m-1)^2/m}), normalised, b = inf. Requires m > 1.
  static GeneratingFunction psi_ml(double m, SlowlyVarying L);
  /// C1 (b-p)^{-(gamma+1)/b} L^{1/b}(1/(b-p)) with C1 fixed by inf = 1.
  /// Requires b > 1 and gamma > -1.
  static GeneratingFunction psi_b_gamma_l(double b, double gamma, SlowlyVarying L);
  /// Identically 1 on [1, r), b = r. Requires r > 1.
  static GeneratingFunction degenerate(double r);
  /// ((b-p)/(b-1))^{-beta} on [1, b). Requires b > 1, beta > 0.
  static GeneratingFunction psi_b_beta(double b, double beta);
  /// Piecewise-linear interpolation of positive values on a strictly
  /// increasing grid with grid.front() >= 1.
  static GeneratingFunction tabulated(std::vector<double> grid, std::vector<double> values);
  /// p^delta * base(p). Requires delta >= 0.
  static GeneratingFunction power_weighted(const GeneratingFunction& base, double delta);

  Family family() const;
  const Params& params() const { return params_; }

  /// Right end b of the support; +inf for unbounded families.
  double support() const { return b_; }
  double lower() const { return lower_; }
  /// Whether p = b itself belongs to the domain (tabulated functions only).
  bool closed() const { return closed_; }
  bool contains(double p) const;

  double multiplier() const { return multiplier_; }
  double scale() const { return scale_; }

  /// psi(p). Throws DomainError outside the domain.
  double operator()(double p) const;
  /// ln psi(p). Throws DomainError outside the domain.
  double log_at(double p) const;

  /// c * psi, with scale() unchanged. Requires c > 0 finite.
  GeneratingFunction scaled(double c) const;
  /// Same family and parameters with an explicit multiplier and scale.
  GeneratingFunction with_factors(double multiplier, double scale) const;

  friend bool operator==(const GeneratingFunction& a, const GeneratingFunction& b);

 private:
  GeneratingFunction(Params params, double b, double lower, bool closed);
  double raw_log(double p) const;

  Params params_;
  double b_;
  double lower_;
  bool closed_;
  double multiplier_ = 1.0;
  double scale_ = 1.0;
};

/// psi(p) with the domain check of the generating function.
double evaluate(const GeneratingFunction& psi, double p);

/// v(p) = p ln psi(p).
double v_function(const GeneratingFunction& psi, double p);

/// Nodes of the standard p-grid that lie in the domain of psi.
std::vector<double> domain_grid(const GeneratingFunction& psi, const GridPolicy& policy = {});

struct Infimum {
  double value;
  double argmin;
};

/// Infimum of psi over its (grid-truncated) domain: grid scan followed by
/// golden-section refinement around the best node.
Infimum infimum(const GeneratingFunction& psi, const GridPolicy& policy = {});

/// psi / inf psi, with the divisor recorded in scale(). Throws
/// InvalidFunction on non-positive or non-finite values.
GeneratingFunction normalize(const GeneratingFunction& psi, const GridPolicy& policy = {});

/// Numerical proxy for psi << nu: the ratio psi/nu is sampled on a grid
/// approaching b (or, for b = inf, geometric up to unbounded_cap), must be
/// nonincreasing over the last quarter of nodes and below tolerance at the
/// final node. Throws IncompatibleSupport when the support bounds differ.
bool dominates(const GeneratingFunction& psi, const GeneratingFunction& nu,
               double tolerance = 1e-3, const GridPolicy& policy = {},
               double unbounded_cap = 0x1p40);

}  // namespace gls
