#include "gls/empirics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gls/error.hpp"

namespace gls {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void check_order(double p) {
  if (!(p >= 1.0) || std::isnan(p)) throw DomainError("L_p norm needs p >= 1 (got p = " + num(p) + ")");
}

// Powered sums are taken relative to the largest magnitude so that |x|^p
// cannot overflow; the result is rescaled afterwards.
double scaled_power_mean(std::span<const double> magnitudes, std::span<const double> weights,
                         double sup, double p) {
  if (sup == 0.0) return 0.0;
  long double acc = 0.0L;
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    if (magnitudes[i] == 0.0) continue;
    acc += static_cast<long double>(weights[i]) * std::pow(static_cast<long double>(magnitudes[i] / sup), p);
  }
  return sup * static_cast<double>(std::pow(acc, 1.0L / p));
}

}  // namespace

EmpiricalSample::EmpiricalSample(std::vector<double> values)
    : values_(std::move(values)), weights_(values_.size(), values_.empty() ? 0.0 : 1.0 / values_.size()) {
  validate();
}

EmpiricalSample::EmpiricalSample(std::vector<double> values, std::vector<double> weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
  validate();
}

EmpiricalSample EmpiricalSample::with_raw_weights(std::vector<double> values, std::vector<double> raw_weights) {
  long double total = 0.0L;
  for (double w : raw_weights) {
    if (!(std::isfinite(w) && w > 0.0)) throw DomainError("sample weights must be finite and positive");
    total += w;
  }
  for (double& w : raw_weights) w = static_cast<double>(w / total);
  return EmpiricalSample(std::move(values), std::move(raw_weights));
}

void EmpiricalSample::validate() {
  if (values_.empty()) throw DomainError("a sample needs at least one value");
  if (weights_.size() != values_.size()) throw DomainError("sample values and weights differ in length");
  long double total = 0.0L;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw DomainError("sample value #" + std::to_string(i) + " is not finite");
    if (!(std::isfinite(weights_[i]) && weights_[i] > 0.0)) {
      throw DomainError("sample weight #" + std::to_string(i) + " is not positive");
    }
    total += weights_[i];
  }
  if (std::abs(static_cast<double>(total) - 1.0) > 1e-12) {
    throw DomainError("sample weights sum to " + num(static_cast<double>(total)) + ", expected 1");
  }
  sup_abs_ = 0.0;
  for (double x : values_) sup_abs_ = std::max(sup_abs_, std::abs(x));
}

EmpiricalSample EmpiricalSample::scaled(double c) const {
  auto values = values_;
  for (double& x : values) x *= c;
  return EmpiricalSample(std::move(values), weights_);
}

EmpiricalSample difference(const EmpiricalSample& a, const EmpiricalSample& b) {
  if (a.weights() != b.weights()) {
    throw IncompatibleGrid("samples must share the same atoms and weights to be subtracted");
  }
  auto values = a.values();
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= b.values()[i];
  return EmpiricalSample(std::move(values), a.weights());
}

double lp_norm(const EmpiricalSample& sample, double p) {
  check_order(p);
  std::vector<double> magnitudes(sample.size());
  std::transform(sample.values().begin(), sample.values().end(), magnitudes.begin(),
                 [](double x) { return std::abs(x); });
  return scaled_power_mean(magnitudes, sample.weights(), sample.sup_abs(), p);
}

void MomentProfile::validate() const {
  if (grid.size() != norms.size()) throw DomainError("profile grid and norms differ in length");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 1.0) || !std::isfinite(grid[i])) throw DomainError("profile grid must lie in [1, inf)");
    if (!(norms[i] >= 0.0) || !std::isfinite(norms[i])) {
      throw DomainError("profile norm at p = " + num(grid[i]) + " is not finite and nonnegative");
    }
    if (i > 0) {
      if (!(grid[i] > grid[i - 1])) throw DomainError("profile grid must be strictly increasing");
      if (norms[i] < norms[i - 1] * (1.0 - 1e-12)) {
        throw DomainError("profile decreases at p = " + num(grid[i]) +
                          ", violating Lyapunov's inequality");
      }
    }
  }
}

MomentProfile MomentProfile::scaled(double c) const {
  MomentProfile out = *this;
  for (double& n : out.norms) n *= c;
  return out;
}

MomentProfile moment_profile(const EmpiricalSample& sample, std::span<const double> grid) {
  MomentProfile profile;
  profile.grid.assign(grid.begin(), grid.end());
  profile.norms.reserve(grid.size());
  const double sup = sample.sup_abs();
  // ln(|x|/sup) is shared by every order.
  std::vector<double> logs;
  std::vector<double> weights;
  logs.reserve(sample.size());
  weights.reserve(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double a = std::abs(sample.values()[i]);
    if (a == 0.0) continue;
    logs.push_back(std::log(a / sup));
    weights.push_back(sample.weights()[i]);
  }
  for (double p : grid) {
    check_order(p);
    if (logs.empty()) {
      profile.norms.push_back(0.0);
      continue;
    }
    long double acc = 0.0L;
    for (std::size_t i = 0; i < logs.size(); ++i) {
      acc += static_cast<long double>(weights[i]) * std::exp(static_cast<long double>(p) * logs[i]);
    }
    profile.norms.push_back(sup * static_cast<double>(std::exp(std::log(acc) / p)));
  }
  profile.validate();
  return profile;
}

GlsNorm gls_norm(const MomentProfile& profile, const GeneratingFunction& psi) {
  profile.validate();
  if (profile.grid.empty()) throw DomainError("GLS norm of an empty profile");
  GlsNorm out{-kInfinity, profile.grid.front(), false};
  std::size_t best = 0;
  for (std::size_t i = 0; i < profile.grid.size(); ++i) {
    const double p = profile.grid[i];
    if (!psi.contains(p)) {
      throw DomainError("profile node p = " + num(p) + " lies outside the support of psi (b = " +
                        num(psi.support()) + ")");
    }
    const double ratio = profile.norms[i] == 0.0 ? 0.0 : std::exp(std::log(profile.norms[i]) - psi.log_at(p));
    if (ratio > out.value) {
      out.value = ratio;
      out.argmax_p = p;
      best = i;
    }
  }
  const bool domain_ends_here = psi.closed() && profile.grid.back() == psi.support();
  out.at_grid_edge = profile.grid.size() > 1 && best + 1 == profile.grid.size() && !domain_ends_here;
  return out;
}

GeneratingFunction natural_function(std::span<const MomentProfile> profiles) {
  if (profiles.empty()) throw DomainError("natural function of an empty family");
  const auto& grid = profiles.front().grid;
  std::vector<double> envelope(grid.size(), 0.0);
  for (const auto& profile : profiles) {
    profile.validate();
    if (profile.grid != grid) throw IncompatibleGrid("moment profiles must share one p-grid");
    for (std::size_t i = 0; i < grid.size(); ++i) envelope[i] = std::max(envelope[i], profile.norms[i]);
  }
  return normalize(GeneratingFunction::tabulated(grid, std::move(envelope)));
}

double empirical_tail(const EmpiricalSample& sample, double y) {
  if (!(y >= 0.0)) throw DomainError("tail function needs y >= 0 (got y = " + num(y) + ")");
  long double mass = 0.0L;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (std::abs(sample.values()[i]) >= y) mass += sample.weights()[i];
  }
  return std::min(1.0, static_cast<double>(mass));
}

double empirical_tail_max(const EmpiricalSample& sample, double y) {
  if (!(y >= 0.0)) throw DomainError("tail function needs y >= 0 (got y = " + num(y) + ")");
  long double upper = 0.0L;
  long double lower = 0.0L;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (sample.values()[i] >= y) upper += sample.weights()[i];
    if (sample.values()[i] <= -y) lower += sample.weights()[i];
  }
  return std::min(1.0, static_cast<double>(std::max(upper, lower)));
}

StepFunction StepFunction::from_sample(const EmpiricalSample& sample) {
  return StepFunction{sample.weights(), sample.values()};
}

RearrangementPair::RearrangementPair(const StepFunction& f) {
  if (f.widths.empty() || f.widths.size() != f.values.size()) {
    throw DomainError("step function needs matching, nonempty widths and values");
  }
  long double total = 0.0L;
  for (std::size_t i = 0; i < f.widths.size(); ++i) {
    if (!(std::isfinite(f.widths[i]) && f.widths[i] > 0.0)) throw DomainError("step widths must be positive");
    if (!std::isfinite(f.values[i])) throw DomainError("step values must be finite");
    total += f.widths[i];
  }
  if (std::abs(static_cast<double>(total) - 1.0) > 1e-12) {
    throw DomainError("step widths must cover (0, 1] (sum = " + num(static_cast<double>(total)) + ")");
  }
  std::vector<std::size_t> order(f.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(f.values[a]) > std::abs(f.values[b]); });
  long double width_acc = 0.0L;
  long double integral_acc = 0.0L;
  for (std::size_t idx : order) {
    const double v = std::abs(f.values[idx]);
    const double w = f.widths[idx];
    values_.push_back(v);
    widths_.push_back(w);
    width_acc += w;
    integral_acc += static_cast<long double>(v) * w;
    cum_width_.push_back(static_cast<double>(width_acc));
    cum_integral_.push_back(static_cast<double>(integral_acc));
  }
}

std::size_t RearrangementPair::piece(double t) const {
  if (!(t > 0.0 && t <= 1.0 + 1e-12)) throw DomainError("rearrangement is defined for t in (0, 1]");
  auto it = std::lower_bound(cum_width_.begin(), cum_width_.end(), t);
  if (it == cum_width_.end()) return cum_width_.size() - 1;
  return static_cast<std::size_t>(it - cum_width_.begin());
}

double RearrangementPair::f_star(double t) const { return values_[piece(t)]; }

double RearrangementPair::f_star_star(double t) const {
  const std::size_t k = piece(t);
  const double w_before = k == 0 ? 0.0 : cum_width_[k - 1];
  const double i_before = k == 0 ? 0.0 : cum_integral_[k - 1];
  return (i_before + values_[k] * (t - w_before)) / t;
}

double RearrangementPair::lp_norm(double p) const {
  check_order(p);
  return scaled_power_mean(values_, widths_, values_.front(), p);
}

RearrangementPair rearrange(const StepFunction& f) { return RearrangementPair(f); }

RearrangementPair rearrange(const EmpiricalSample& sample) {
  return RearrangementPair(StepFunction::from_sample(sample));
}

double tail_moment_identity_residual(const EmpiricalSample& sample, double p) {
  check_order(p);
  const double sup = sample.sup_abs();
  if (sup == 0.0) return 0.0;

  std::vector<std::pair<double, double>> atoms;  // (|x|/sup, weight)
  atoms.reserve(sample.size());
  long double lhs = 0.0L;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double a = std::abs(sample.values()[i]) / sup;
    atoms.emplace_back(a, sample.weights()[i]);
    lhs += static_cast<long double>(sample.weights()[i]) * std::pow(static_cast<long double>(a), p);
  }
  std::sort(atoms.begin(), atoms.end());

  // T(y) = mu(|f| >= y) is constant on (a_{j-1}, a_j] between distinct levels.
  long double rhs = 0.0L;
  long double above = 0.0L;  // mass of {|f| >= current level}
  for (const auto& atom : atoms) above += atom.second;
  long double previous_power = 0.0L;
  std::size_t i = 0;
  while (i < atoms.size()) {
    const double level = atoms[i].first;
    long double mass = 0.0L;
    std::size_t j = i;
    while (j < atoms.size() && atoms[j].first == level) mass += atoms[j++].second;
    const long double power = std::pow(static_cast<long double>(level), p);
    if (level > 0.0) rhs += above * (power - previous_power);
    previous_power = power;
    above -= mass;
    i = j;
  }
  const long double scale = std::max(lhs, rhs);
  if (scale == 0.0L) return 0.0;
  return static_cast<double>(std::abs(lhs - rhs) / scale);
}

}  // namespace gls
