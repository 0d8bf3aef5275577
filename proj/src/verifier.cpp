#include "gls/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gls/error.hpp"
#include "gls/rng.hpp"

namespace gls {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void expect_kind(const ScenarioConfig& config, ScenarioKind kind) {
  config.validate();
  if (config.kind != kind) {
    throw ParameterError("scenario kind is " + scenario_name(config.kind) + ", expected " + scenario_name(kind));
  }
}

}  // namespace

std::string scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Doob: return "doob";
    case ScenarioKind::DunfordSchwartz: return "dunford-schwartz";
    case ScenarioKind::FourierMaximal: return "fourier";
  }
  return "unknown";
}

ScenarioKind scenario_from_name(const std::string& name) {
  if (name == "doob") return ScenarioKind::Doob;
  if (name == "dunford-schwartz") return ScenarioKind::DunfordSchwartz;
  if (name == "fourier") return ScenarioKind::FourierMaximal;
  throw ParameterError("unknown scenario kind '" + name + "' (expected doob, dunford-schwartz or fourier)");
}

void ScenarioConfig::validate() const {
  if (paths < 1) throw ParameterError("paths must be >= 1");
  if (steps < 1) throw ParameterError("steps must be >= 1");
  if (grid < 1) throw ParameterError("grid must be >= 1");
  if (degree < 1 && cos_coefficients.empty()) throw ParameterError("degree must be >= 1");
  for (double p : p_grid) {
    if (!(p > 1.0 && std::isfinite(p))) {
      throw ParameterError("evaluation p-grid must lie in (1, inf) (got p = " + num(p) + ")");
    }
  }
  if (!(std::isfinite(scale))) throw ParameterError("scale must be finite");
  for (double x : f_values) {
    if (!std::isfinite(x)) throw ParameterError("f values must be finite");
  }
  if (!sin_coefficients.empty() && sin_coefficients.size() != cos_coefficients.size()) {
    throw ParameterError("sin and cos coefficient lists differ in length");
  }
}

Simulation simulate_doob(const ScenarioConfig& config) {
  expect_kind(config, ScenarioKind::Doob);
  std::vector<double> f(config.paths);
  std::vector<double> g(config.paths);
  for (std::size_t path = 0; path < config.paths; ++path) {
    CounterRng rng(config.seed, path);
    long long sum = 0;
    long long running_max = 0;
    std::uint64_t bits = 0;
    for (std::size_t n = 0; n < config.steps; ++n) {
      if (n % 64 == 0) bits = rng.next_u64();
      if (!config.zero_generator) sum += (bits & 1U) ? 1 : -1;
      bits >>= 1;
      running_max = std::max(running_max, sum < 0 ? -sum : sum);
    }
    f[path] = config.scale * static_cast<double>(sum);
    g[path] = std::abs(config.scale) * static_cast<double>(running_max);
  }
  return {EmpiricalSample(std::move(f)), EmpiricalSample(std::move(g)), config.steps};
}

Simulation simulate_dunford_schwartz(const ScenarioConfig& config) {
  expect_kind(config, ScenarioKind::DunfordSchwartz);
  const std::vector<double> cells = config.f_values.empty() ? std::vector<double>{1.0, 0.0} : config.f_values;
  const long double alpha = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  auto f_at = [&](long double t) {
    auto cell = static_cast<std::size_t>(t * static_cast<long double>(cells.size()));
    return cells[std::min(cell, cells.size() - 1)];
  };

  const std::size_t points = config.grid;
  std::vector<double> f(points);
  std::vector<double> g(points);
  for (std::size_t j = 0; j < points; ++j) {
    const long double t = static_cast<long double>(j) / static_cast<long double>(points);
    f[j] = f_at(t);
    long double sum = f[j];
    double best = 0.0;
    for (std::size_t n = 2; n <= std::max<std::size_t>(config.steps, 2); ++n) {
      long double x = t + static_cast<long double>(n - 1) * alpha;
      x -= std::floor(x);
      sum += f_at(x);
      best = std::max(best, static_cast<double>(std::abs(sum / static_cast<long double>(n))));
    }
    g[j] = best;
  }
  return {EmpiricalSample(std::move(f)), EmpiricalSample(std::move(g)), std::max<std::size_t>(config.steps, 2)};
}

Simulation simulate_fourier_maximal(const ScenarioConfig& config) {
  expect_kind(config, ScenarioKind::FourierMaximal);
  std::vector<double> a = config.cos_coefficients;
  std::vector<double> b = config.sin_coefficients;
  if (a.empty()) {
    CounterRng rng(config.seed, 0);
    a.resize(config.degree + 1);
    b.resize(config.degree + 1);
    for (std::size_t k = 0; k <= config.degree; ++k) {
      a[k] = rng.symmetric_uniform();
      b[k] = k == 0 ? 0.0 : rng.symmetric_uniform();
    }
  }
  if (b.empty()) b.assign(a.size(), 0.0);
  const std::size_t degree = a.size() - 1;

  const std::size_t points = config.grid;
  std::vector<double> f(points);
  std::vector<double> g(points);
  for (std::size_t j = 0; j < points; ++j) {
    const double x = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(points);
    double s = a[0];
    double best = std::abs(s);
    for (std::size_t k = 1; k <= degree; ++k) {
      const double kx = static_cast<double>(k) * x;
      s += a[k] * std::cos(kx) + b[k] * std::sin(kx);
      best = std::max(best, std::abs(s));
    }
    f[j] = s;
    g[j] = best;
  }
  return {EmpiricalSample(std::move(f)), EmpiricalSample(std::move(g)), degree};
}

Simulation simulate(const ScenarioConfig& config) {
  switch (config.kind) {
    case ScenarioKind::Doob: return simulate_doob(config);
    case ScenarioKind::DunfordSchwartz: return simulate_dunford_schwartz(config);
    case ScenarioKind::FourierMaximal: return simulate_fourier_maximal(config);
  }
  throw ParameterError("unknown scenario kind");
}

double fit_type_constant(const EmpiricalSample& f, const EmpiricalSample& g, double lambda, double nu,
                         const std::vector<double>& p_grid) {
  double z = 0.0;
  for (double p : p_grid) {
    if (!(p > 1.0)) throw DomainError("type constants need p > 1 (got p = " + num(p) + ")");
    const double nf = lp_norm(f, p);
    const double ng = lp_norm(g, p);
    if (nf == 0.0) {
      if (ng > 0.0) throw IndeterminateRatio("|f|_p = 0 < |g|_p at p = " + num(p), p);
      continue;
    }
    z = std::max(z, ng * std::pow(p - 1.0, nu) / (std::pow(p, lambda) * nf));
  }
  return z;
}

VerificationReport verify_type(const EmpiricalSample& f, const EmpiricalSample& g, const OperatorTypeSpec& spec,
                               const std::vector<double>& p_grid, double slack) {
  spec.validate();
  if (!(slack >= 0.0 && std::isfinite(slack))) throw ParameterError("slack must be finite and >= 0");
  VerificationReport report;
  report.check = "type";
  report.slack = slack;

  bool any_real = false;
  bool growth_at_least_one = true;
  double fitted = 0.0;
  for (double p : p_grid) {
    if (!(p > 1.0 && p < spec.b)) {
      throw DomainError("p = " + num(p) + " outside (1, b) with b = " + num(spec.b));
    }
    const double nf = lp_norm(f, p);
    const double ng = lp_norm(g, p);
    const double bound = spec.factor(p) * nf;
    double ratio = 0.0;
    if (nf == 0.0) {
      if (ng > 0.0) throw IndeterminateRatio("|f|_p = 0 while |g|_p > 0 at p = " + num(p), p);
    } else {
      any_real = true;
      ratio = ng / bound;
      const double growth = ng / nf;
      report.min_growth = std::min(report.min_growth.value_or(growth), growth);
      if (growth < 1.0 - 1e-12) growth_at_least_one = false;
      fitted = std::max(fitted, ratio * spec.Z);
    }
    report.max_ratio = std::max(report.max_ratio, ratio);
    report.rows.push_back({p, nf, ng, bound, ratio});
  }
  report.vacuous = !any_real;
  report.pass = report.max_ratio <= 1.0 + slack;
  report.lower_bound_flag = any_real && growth_at_least_one;
  if (any_real) report.fitted_Z = fitted;
  if (report.vacuous) report.notes.emplace_back("vacuous: |f|_p = |g|_p = 0 on the whole grid");
  if (report.lower_bound_flag) report.notes.emplace_back("|g|_p >= |f|_p on the grid: operator norm >= 1");
  return report;
}

VerificationReport verify_gls_propagation(const EmpiricalSample& f, const EmpiricalSample& g,
                                          const GeneratingFunction& psi, const OperatorTypeSpec& spec,
                                          double slack, const GridPolicy& policy) {
  if (!(slack >= 0.0 && std::isfinite(slack))) throw ParameterError("slack must be finite and >= 0");
  const auto input = gls_norm(moment_profile(f, domain_grid(psi, policy)), psi);
  const auto bound = propagate(spec, psi, input.value, policy);
  const auto& target = bound.target_space;
  const auto output = gls_norm(moment_profile(g, domain_grid(target, policy)), target);

  VerificationReport report;
  report.check = "gls_propagation";
  report.slack = slack;
  double ratio = 0.0;
  if (bound.value == 0.0) {
    if (output.value > 0.0) {
      throw IndeterminateRatio("propagated bound is 0 while ||g|| > 0", output.argmax_p);
    }
    report.vacuous = true;
    report.notes.emplace_back("vacuous: ||f|| = ||g|| = 0");
  } else {
    ratio = output.value / bound.value;
  }
  report.rows.push_back({output.argmax_p, input.value, output.value, bound.value, ratio});
  report.max_ratio = ratio;
  report.pass = ratio <= 1.0 + slack;
  if (input.value > 0.0) report.min_growth = output.value / input.value;
  report.notes.push_back("target space: " + family_name(target.family()) + ", K via " + method_name(bound.method));
  if (input.at_grid_edge || output.at_grid_edge) {
    report.notes.emplace_back("supremum attained at the grid edge p_max; the true norm may be larger");
  }
  return report;
}

VerificationReport verify_convergence(const std::vector<EmpiricalSample>& sequence, const EmpiricalSample& limit,
                                      const GeneratingFunction& zeta, const GeneratingFunction& tau,
                                      double threshold, const GridPolicy& policy) {
  if (!(threshold > 0.0 && std::isfinite(threshold))) throw ParameterError("threshold must be finite and > 0");
  if (sequence.empty()) throw ParameterError("convergence check needs a nonempty sequence");
  // Bounded in G zeta plus L_p convergence gives convergence in the weaker
  // norms G tau, i.e. those with zeta/tau -> 0.
  if (!dominates(zeta, tau, 1e-3, policy)) {
    throw PreconditionError("zeta/tau does not tend to 0 at the end of the support, so boundedness in G zeta "
                            "does not give convergence in G tau");
  }
  const auto tau_grid = domain_grid(tau, policy);
  const auto zeta_grid = domain_grid(zeta, policy);

  VerificationReport report;
  report.check = "convergence";
  report.slack = 0.0;
  double witness = 0.0;
  for (std::size_t n = 0; n < sequence.size(); ++n) {
    const double size = gls_norm(moment_profile(sequence[n], zeta_grid), zeta).value;
    const double distance = gls_norm(moment_profile(difference(sequence[n], limit), tau_grid), tau).value;
    witness = std::max(witness, size);
    report.rows.push_back({static_cast<double>(n + 1), size, distance, threshold, distance / threshold});
  }

  // First index from which every distance stays below the threshold.
  std::size_t start = report.rows.size();
  while (start > 0 && report.rows[start - 1].output_norm <= threshold) --start;
  bool monotone = start < report.rows.size();
  for (std::size_t i = start; i + 1 < report.rows.size(); ++i) {
    const double a = report.rows[i].output_norm;
    const double b = report.rows[i + 1].output_norm;
    if (b > a * (1.0 + 1e-9) + 1e-15) monotone = false;
  }
  report.pass = monotone;
  for (std::size_t i = start < report.rows.size() ? start : 0; i < report.rows.size(); ++i) {
    report.max_ratio = std::max(report.max_ratio, report.rows[i].ratio);
  }
  report.vacuous = std::all_of(report.rows.begin(), report.rows.end(), [](const ReportRow& r) {
    return r.output_norm == 0.0;
  });
  report.notes.push_back("sup_n ||g_n|| in G zeta = " + num(witness));
  if (start < report.rows.size()) {
    report.notes.push_back("below threshold from n = " + num(report.rows[start].p));
  }
  return report;
}

DyadicMartingale dyadic_martingale(const std::function<double(double)>& f, std::size_t depth, std::size_t levels) {
  if (depth < 1 || depth > 26) throw ParameterError("dyadic depth must be in [1, 26]");
  if (levels < 1 || levels > depth) throw ParameterError("dyadic levels must be in [1, depth]");
  const std::size_t points = std::size_t{1} << depth;
  std::vector<double> fine(points);
  for (std::size_t j = 0; j < points; ++j) fine[j] = f((static_cast<double>(j) + 0.5) / static_cast<double>(points));

  std::vector<EmpiricalSample> out;
  for (std::size_t n = 1; n <= levels; ++n) {
    const std::size_t block = points >> n;
    std::vector<double> level(points);
    for (std::size_t start = 0; start < points; start += block) {
      long double sum = 0.0L;
      for (std::size_t j = start; j < start + block; ++j) sum += fine[j];
      const double mean = static_cast<double>(sum / static_cast<long double>(block));
      std::fill(level.begin() + static_cast<std::ptrdiff_t>(start),
                level.begin() + static_cast<std::ptrdiff_t>(start + block), mean);
    }
    out.emplace_back(std::move(level));
  }
  return {std::move(out), EmpiricalSample(std::move(fine))};
}

std::string truncation_note(std::size_t level) {
  return "necessary-condition at truncation level " + std::to_string(level);
}

}  // namespace gls
