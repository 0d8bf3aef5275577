#pragma once

#include <span>
#include <vector>

#include "gls/psi.hpp"

namespace gls {

/// A finite weighted collection of real observations, treated as an exact
/// discrete distribution on a probability space.
class EmpiricalSample {
 public:
  /// Uniform weights.
  explicit EmpiricalSample(std::vector<double> values);
  /// Weights must be positive and sum to 1 within 1e-12.
  EmpiricalSample(std::vector<double> values, std::vector<double> weights);

  /// Positive raw weights rescaled to sum to 1.
  static EmpiricalSample with_raw_weights(std::vector<double> values, std::vector<double> raw_weights);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return values_.size(); }
  /// max |x_i|.
  double sup_abs() const { return sup_abs_; }

  /// Pointwise c * x with the same weights.
  EmpiricalSample scaled(double c) const;

  friend bool operator==(const EmpiricalSample&, const EmpiricalSample&) = default;

 private:
  void validate();

  std::vector<double> values_;
  std::vector<double> weights_;
  double sup_abs_ = 0.0;
};

/// Pointwise difference a - b of two samples over the same atoms.
/// Throws IncompatibleGrid when the weights differ.
EmpiricalSample difference(const EmpiricalSample& a, const EmpiricalSample& b);

/// (sum w_i |x_i|^p)^{1/p}. Throws DomainError for p < 1.
double lp_norm(const EmpiricalSample& sample, double p);

/// p -> |f|_p on an increasing grid in [1, inf).
struct MomentProfile {
  std::vector<double> grid;
  std::vector<double> norms;

  /// Checks the grid and the Lyapunov monotonicity of the norms.
  void validate() const;
  MomentProfile scaled(double c) const;

  friend bool operator==(const MomentProfile&, const MomentProfile&) = default;
};

MomentProfile moment_profile(const EmpiricalSample& sample, std::span<const double> grid);

struct GlsNorm {
  double value;
  double argmax_p;
  /// The supremum sits on the last node of a grid truncated at p_max, so the
  /// true supremum may be larger.
  bool at_grid_edge;
};

/// max over the profile nodes of |f|_p / psi(p): a lower bound of the GLS
/// norm whose gap shrinks with the grid density. Throws DomainError when a
/// node lies outside the domain of psi.
GlsNorm gls_norm(const MomentProfile& profile, const GeneratingFunction& psi);

/// Tabulated psi_W(p) = max over the profiles of |eta|_p, normalised; the
/// divisor is kept in scale(), so psi.scaled(psi.scale()) is the raw
/// envelope. Throws IncompatibleGrid when the grids differ.
GeneratingFunction natural_function(std::span<const MomentProfile> profiles);

/// T_f(y) = mu(|f| >= y), i.e. mu(f >= y) + mu(f <= -y) for y > 0.
/// Throws DomainError for y < 0.
double empirical_tail(const EmpiricalSample& sample, double y);

/// max(mu(f >= y), mu(f <= -y)): the larger one-sided tail. Never exceeds
/// empirical_tail and agrees with it for samples of one sign.
double empirical_tail_max(const EmpiricalSample& sample, double y);

/// A step function on (0, 1] given by consecutive pieces of positive width.
struct StepFunction {
  std::vector<double> widths;
  std::vector<double> values;

  static StepFunction from_sample(const EmpiricalSample& sample);
};

/// Decreasing rearrangement f° of |f| and its running average f°°.
///
/// f° is left-continuous: on (W_{k-1}, W_k] it equals the k-th largest |value|
/// where W_k are the cumulative widths. f°° is integrated exactly.
class RearrangementPair {
 public:
  explicit RearrangementPair(const StepFunction& f);

  /// f°(t) for t in (0, 1].
  double f_star(double t) const;
  /// f°°(t) = (1/t) int_0^t f°.
  double f_star_star(double t) const;
  /// |f°|_p on (0, 1].
  double lp_norm(double p) const;

  const std::vector<double>& sorted_values() const { return values_; }
  const std::vector<double>& cumulative_widths() const { return cum_width_; }

 private:
  std::size_t piece(double t) const;

  std::vector<double> values_;
  std::vector<double> widths_;
  std::vector<double> cum_width_;
  std::vector<double> cum_integral_;
};

RearrangementPair rearrange(const StepFunction& f);
RearrangementPair rearrange(const EmpiricalSample& sample);

/// Relative difference between |f|_p^p and p int_0^inf y^{p-1} T_f(y) dy,
/// the integral evaluated exactly over the steps of T_f.
double tail_moment_identity_residual(const EmpiricalSample& sample, double p);

}  // namespace gls
