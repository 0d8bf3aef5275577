#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gls/grid.hpp"
#include "gls/psi.hpp"

namespace gls {

/// Type(lambda, nu) with constant Z on [1, b):
/// |Q f|_p <= Z p^lambda / (p-1)^nu |f|_p.
struct OperatorTypeSpec {
  double lambda = 1.0;
  double nu = 1.0;
  double Z = 1.0;
  double b = kInfinity;

  /// Throws ParameterError unless lambda >= nu >= 0, Z > 0 and b > 1.
  void validate() const;
  /// Z p^lambda / (p-1)^nu.
  double factor(double p) const;

  friend bool operator==(const OperatorTypeSpec&, const OperatorTypeSpec&) = default;
};

enum class BoundMethod { GridGolden, ClosedForm, SimpleUpper };

std::string method_name(BoundMethod method);
BoundMethod method_from_name(const std::string& name);

namespace flags {
inline constexpr const char* kBoundaryAttained = "boundary_attained";
inline constexpr const char* kTruncatedAtPmax = "truncated_at_pmax";
inline constexpr const char* kUnequalPowers = "unequal_powers";
inline constexpr const char* kUpperBoundOnly = "upper_bound_only";
}  // namespace flags

struct BoundReport {
  double value;
  double argmin_q;
  BoundMethod method;
  /// The GLS the bound refers to: psi itself, or normalised zeta = p^Delta psi.
  GeneratingFunction target_space;
  std::vector<std::string> flags;
  /// Same-space bound b^Delta Z K_nu[psi, b] ||f|| (finite b, lambda > nu).
  std::optional<double> same_space_value;

  bool has_flag(const std::string& flag) const;

  friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

/// Two-branch function that removes the (p-1)^{-lambda} singularity:
/// (q/(q-1))^lambda psi(q) on [1, q] and (p/(p-1))^lambda psi(p) on (q, b).
double tilde_psi(const GeneratingFunction& psi, double q, double lambda, double p);

/// K_lambda[psi, b] = inf_{q in (1,b)} q^lambda psi(q) / (q-1)^lambda.
///
/// Scans the open grid of (1, min(b, p_max)) and refines the best node by
/// golden section. An infimum reached at an end of the grid is reported with
/// the boundary_attained flag (plus truncated_at_pmax when the right end is
/// the grid cap). The bound b defaults to the support of psi.
BoundReport k_constant(const GeneratingFunction& psi, double lambda,
                       std::optional<double> b = std::nullopt, const GridPolicy& policy = {});

struct ClosedFormK {
  double value;
  /// True when the formula is an upper bound rather than the infimum.
  bool upper_bound_only;
};

/// Closed forms of K_lambda for psi_m, the degenerate family and psi[b,beta].
/// For psi[b,beta] the value is the bound evaluated at
/// q = (lambda b + beta)/(lambda + beta) and is an upper bound only.
/// Throws NoClosedForm for other families.
ClosedFormK k_reference(const GeneratingFunction& psi, double lambda);

/// (lambda b + beta)^lambda (lambda + beta)^beta / (lambda^lambda beta^beta (b-1)^{lambda+beta}),
/// an upper bound of inf_q (q/(q-1))^lambda (b-q)^{-beta}.
double bounded_support_bound(double b, double beta, double lambda);

/// K_lambda evaluated at q = 2 (b > 2) or q = (b+1)/2 (b <= 2).
double k_simple_upper(const GeneratingFunction& psi, double lambda);

/// Bound on ||Q f|| for an operator of the given type and ||f||_{G psi} = input_norm.
///
/// lambda = nu: Z K_lambda[psi] ||f|| in G psi. lambda > nu: the bound lives
/// in G zeta with zeta = normalize(p^Delta psi); the normalisation divisor is
/// folded into the value. For finite b the report also carries the
/// same-space bound.
BoundReport propagate(const OperatorTypeSpec& spec, const GeneratingFunction& psi, double input_norm,
                      const GridPolicy& policy = {});

/// A weight W on (1, b) together with the q-grid on which it is sampled.
struct Weight {
  std::function<double(double)> evaluate;
  std::vector<double> q_grid;

  /// Piecewise constant from the left node (discontinuities kept as given).
  static Weight tabulated(std::vector<double> grid, std::vector<double> values);
  /// (p/(p-1))^lambda sampled on the open grid of (1, b).
  static Weight operator_type(double lambda, double b, const GridPolicy& policy = {});
};

struct UpsilonValue {
  double value;
  /// q achieving the left branch; p itself when the right branch wins.
  double argmin_q;
  bool right_branch;
};

/// upsilon(p) = min( inf_{q >= p} W(q) psi(q), W(p) psi(p) ).
///
/// The left branch uses Lyapunov's inequality |g|_p <= |g|_q for p <= q.
/// Non-finite weights are skipped; throws NoFiniteValue when nothing finite
/// remains.
UpsilonValue upsilon(const Weight& W, const GeneratingFunction& psi, double p);

}  // namespace gls
