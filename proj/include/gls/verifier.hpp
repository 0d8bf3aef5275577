#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gls/bounds.hpp"
#include "gls/empirics.hpp"

namespace gls {

enum class ScenarioKind { Doob, DunfordSchwartz, FourierMaximal };

std::string scenario_name(ScenarioKind kind);
ScenarioKind scenario_from_name(const std::string& name);

/// Sizes, seed and evaluation grid of a simulated operator example.
///
/// Doob: `paths` walks of `steps` symmetric +-1 increments (times `scale`).
/// Dunford–Schwartz: `grid` points of [0, 1), averages over n = 2..`steps`,
///   f a step function with `f_values` on equal cells (default: 1 on [0, 1/2)).
/// Fourier: `grid` points of [-pi, pi), trigonometric polynomial of degree
///   `degree` with random coefficients in [-1, 1] unless `cos_coefficients` /
///   `sin_coefficients` are given.
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Doob;
  std::size_t paths = 10000;
  std::size_t steps = 1024;
  std::size_t grid = 4096;
  std::size_t degree = 32;
  std::uint64_t seed = 0;
  std::vector<double> p_grid{1.5, 2.0, 3.0, 4.0};
  /// Multiplies every increment (Doob only).
  double scale = 1.0;
  /// Replace the increments by zeros (Doob only).
  bool zero_generator = false;
  std::vector<double> f_values;
  std::vector<double> cos_coefficients;
  std::vector<double> sin_coefficients;

  /// Throws ParameterError unless every size is >= 1 and the p-grid lies in (1, inf).
  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Samples of the input f and of the (truncated) maximal function g over the
/// same atoms.
struct Simulation {
  EmpiricalSample f;
  EmpiricalSample g;
  /// Truncation level of the supremum (steps, N or D).
  std::size_t truncation;
};

/// f = S_N, g = max_{1<=n<=N} |S_n| for each path of a +-1 walk; uniform weights over paths.
Simulation simulate_doob(const ScenarioConfig& config);
/// f and g_N(t) = max_{2<=n<=N} |(1/n) sum_{k<n} f(t + k alpha mod 1)| on the grid,
/// alpha the inverse golden ratio.
Simulation simulate_dunford_schwartz(const ScenarioConfig& config);
/// f = s_D and g = max_{0<=M<=D} |s_M| on the grid of [-pi, pi).
Simulation simulate_fourier_maximal(const ScenarioConfig& config);
/// Dispatch on config.kind.
Simulation simulate(const ScenarioConfig& config);

/// Smallest Z with |g|_p <= Z p^lambda/(p-1)^nu |f|_p on every grid node
/// (nodes with |f|_p = 0 = |g|_p are skipped).
double fit_type_constant(const EmpiricalSample& f, const EmpiricalSample& g, double lambda, double nu,
                         const std::vector<double>& p_grid);

struct ReportRow {
  double p;
  double input_norm;
  double output_norm;
  double bound;
  double ratio;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct VerificationReport {
  /// "type", "gls_propagation" or "convergence".
  std::string check;
  std::vector<ReportRow> rows;
  double max_ratio = 0.0;
  double slack = 0.0;
  bool pass = false;
  /// Every check was 0 <= 0.
  bool vacuous = false;
  /// min_p |g|_p / |f|_p over the non-vacuous rows.
  std::optional<double> min_growth;
  /// |g|_p >= |f|_p on the whole grid, so the operator norm is at least 1.
  bool lower_bound_flag = false;
  /// Smallest Z for which the type inequality holds on the grid.
  std::optional<double> fitted_Z;
  std::vector<std::string> notes;
  std::optional<ScenarioConfig> config;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

/// Checks |g|_p <= Z p^lambda/(p-1)^nu |f|_p on the grid: ratio
/// r(p) = |g|_p (p-1)^nu / (Z p^lambda |f|_p), pass iff max r <= 1 + slack.
/// Throws DomainError for nodes outside (1, b) and IndeterminateRatio when
/// |f|_p = 0 < |g|_p.
VerificationReport verify_type(const EmpiricalSample& f, const EmpiricalSample& g, const OperatorTypeSpec& spec,
                               const std::vector<double>& p_grid, double slack);

/// Compares ||g|| in the target space of propagate(spec, psi, ||f||_{G psi})
/// with the propagated bound. One row: p = argmax for g, input = ||f||,
/// output = ||g||, bound, ratio = output / bound.
VerificationReport verify_gls_propagation(const EmpiricalSample& f, const EmpiricalSample& g,
                                          const GeneratingFunction& psi, const OperatorTypeSpec& spec,
                                          double slack, const GridPolicy& policy = {});

/// Convergence in G tau of g_n -> g_inf when sup_n ||g_n|| in G zeta is
/// finite and zeta/tau -> 0 (G tau is the weaker norm).
///
/// Row n (p column = n, starting at 1): input = ||g_n|| in G zeta, output =
/// ||g_n - g_inf|| in G tau, bound = threshold, ratio = output / threshold.
/// Passes iff the distances end below the threshold and are nonincreasing
/// from the first index where they drop below it. Throws PreconditionError
/// unless dominates(zeta, tau).
VerificationReport verify_convergence(const std::vector<EmpiricalSample>& sequence, const EmpiricalSample& limit,
                                      const GeneratingFunction& zeta, const GeneratingFunction& tau,
                                      double threshold, const GridPolicy& policy = {});

/// Conditional expectations of f on the dyadic filtration of [0, 1): level n
/// averages f over 2^n equal cells. f is sampled at the midpoints of 2^depth cells.
struct DyadicMartingale {
  std::vector<EmpiricalSample> levels;
  EmpiricalSample limit;
};
DyadicMartingale dyadic_martingale(const std::function<double(double)>& f, std::size_t depth, std::size_t levels);

/// "necessary-condition at truncation level N": the simulated supremum is
/// truncated, so a passing check is necessary but not sufficient.
std::string truncation_note(std::size_t level);

}  // namespace gls
