#include "gls/bounds.hpp"

#include <algorithm>
#include <cmath>
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

bool same_bound(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) return a == b;
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

void check_lambda(double lambda) {
  if (!(std::isfinite(lambda) && lambda >= 0.0)) {
    throw ParameterError("lambda must be finite and >= 0 (got " + num(lambda) + ")");
  }
}

}  // namespace

void OperatorTypeSpec::validate() const {
  if (!(std::isfinite(nu) && nu >= 0.0)) throw ParameterError("operator type needs nu >= 0");
  if (!(std::isfinite(lambda) && lambda >= nu)) throw ParameterError("operator type needs lambda >= nu");
  if (!(std::isfinite(Z) && Z > 0.0)) throw ParameterError("operator type needs Z > 0");
  if (!(b > 1.0)) throw ParameterError("operator type needs b > 1");
}

double OperatorTypeSpec::factor(double p) const {
  return Z * std::exp(lambda * std::log(p) - nu * std::log(p - 1.0));
}

std::string method_name(BoundMethod method) {
  switch (method) {
    case BoundMethod::GridGolden: return "grid+golden";
    case BoundMethod::ClosedForm: return "closed-form";
    case BoundMethod::SimpleUpper: return "simple-upper";
  }
  return "unknown";
}

BoundMethod method_from_name(const std::string& name) {
  if (name == "grid+golden") return BoundMethod::GridGolden;
  if (name == "closed-form") return BoundMethod::ClosedForm;
  if (name == "simple-upper") return BoundMethod::SimpleUpper;
  throw ParameterError("unknown bound method '" + name + "'");
}

bool BoundReport::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

double tilde_psi(const GeneratingFunction& psi, double q, double lambda, double p) {
  check_lambda(lambda);
  const double b = psi.support();
  if (!(q > 1.0 && q < b)) {
    throw DomainError("q = " + num(q) + " must lie in (1, b) with b = " + num(b));
  }
  if (!(p >= 1.0 && p < b)) throw DomainError("p = " + num(p) + " outside [1, b) with b = " + num(b));
  const double x = p <= q ? q : p;
  const double singular = lambda == 0.0 ? 1.0 : std::pow(x / (x - 1.0), lambda);
  return singular * psi(x);
}

BoundReport k_constant(const GeneratingFunction& psi, double lambda, std::optional<double> b,
                       const GridPolicy& policy) {
  check_lambda(lambda);
  const double bound = b.value_or(psi.support());
  if (!(bound > 1.0) || bound > psi.support()) {
    throw DomainError("K constant needs 1 < b <= support of psi (b = " + num(bound) + ")");
  }
  auto grid = open_grid(bound, policy);
  std::erase_if(grid, [&](double q) { return !psi.contains(q); });

  auto objective = [&](double q) {
    const double lv = lambda * (std::log(q) - std::log(q - 1.0)) + psi.log_at(q);
    return std::isnan(lv) ? kInfinity : lv;
  };
  std::size_t best = grid.size();
  double best_log = kInfinity;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double lv = objective(grid[i]);
    if (lv < best_log) {
      best_log = lv;
      best = i;
    }
  }
  if (best == grid.size() || !std::isfinite(best_log)) {
    throw NoFiniteValue("K constant: q^lambda psi(q)/(q-1)^lambda is infinite on the whole grid");
  }
  double argmin = grid[best];
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  const auto refined = golden_section_minimize(objective, lo, hi);
  if (refined.fx < best_log) {
    best_log = refined.fx;
    argmin = refined.x;
  }

  std::vector<std::string> report_flags;
  const bool at_left = best == 0;
  const bool at_right = best + 1 == grid.size();
  if (lambda == 0.0 && psi.contains(1.0)) {
    // psi is continuous at 1, so the infimum over (1, b) includes the limit q -> 1+.
    const double at_one = psi.log_at(1.0);
    if (at_one <= best_log) best_log = at_one;
  }
  if (at_left || at_right) report_flags.emplace_back(flags::kBoundaryAttained);
  if (at_right && truncated(bound, policy)) report_flags.emplace_back(flags::kTruncatedAtPmax);

  return BoundReport{std::exp(best_log), argmin, BoundMethod::GridGolden, psi, std::move(report_flags),
                     std::nullopt};
}

double bounded_support_bound(double b, double beta, double lambda) {
  check_lambda(lambda);
  if (!(b > 1.0 && std::isfinite(b) && beta > 0.0)) throw ParameterError("needs b > 1 and beta > 0");
  const double log_value = lambda * std::log(lambda * b + beta) + beta * std::log(lambda + beta) -
                           (lambda == 0.0 ? 0.0 : lambda * std::log(lambda)) - beta * std::log(beta) -
                           (lambda + beta) * std::log(b - 1.0);
  return std::exp(log_value);
}

ClosedFormK k_reference(const GeneratingFunction& psi, double lambda) {
  check_lambda(lambda);
  const double c = psi.multiplier();
  if (const auto* f = std::get_if<PsiMParams>(&psi.params())) {
    if (lambda == 0.0) return {c, false};
    const double a = 1.0 / f->m;
    const double log_value = a * std::log(f->m) + (lambda + a) * std::log(lambda + a) - lambda * std::log(lambda);
    return {c * std::exp(log_value), false};
  }
  if (const auto* f = std::get_if<DegenerateParams>(&psi.params())) {
    return {c * std::pow(f->r / (f->r - 1.0), lambda), false};
  }
  if (const auto* f = std::get_if<PsiBBetaParams>(&psi.params())) {
    // psi[b,beta] carries the factor (b-1)^beta relative to (b-q)^{-beta}.
    const double value = bounded_support_bound(f->b, f->beta, lambda) * std::pow(f->b - 1.0, f->beta);
    return {c * value, true};
  }
  throw NoClosedForm("no closed-form K constant for family " + family_name(psi.family()) +
                     "; use k_constant");
}

double k_simple_upper(const GeneratingFunction& psi, double lambda) {
  check_lambda(lambda);
  const double b = psi.support();
  if (b > 2.0) return std::pow(2.0, lambda) * psi(2.0);
  const double q = 0.5 * (b + 1.0);
  return std::pow((b + 1.0) / (b - 1.0), lambda) * psi(q);
}

BoundReport propagate(const OperatorTypeSpec& spec, const GeneratingFunction& psi, double input_norm,
                      const GridPolicy& policy) {
  spec.validate();
  if (!same_bound(spec.b, psi.support())) {
    throw IncompatibleSupport("operator type bound b = " + num(spec.b) + " differs from the support of psi (" +
                              num(psi.support()) + ")");
  }
  if (!(std::isfinite(input_norm) && input_norm >= 0.0)) {
    throw ParameterError("input norm must be finite and nonnegative");
  }
  if (spec.lambda == spec.nu) {
    auto report = k_constant(psi, spec.lambda, std::nullopt, policy);
    report.value *= spec.Z * input_norm;
    return report;
  }
  const double delta = spec.lambda - spec.nu;
  const auto zeta = normalize(GeneratingFunction::power_weighted(psi, delta), policy);
  auto report = k_constant(zeta, spec.nu, std::nullopt, policy);
  report.value *= zeta.scale() * spec.Z * input_norm;
  report.flags.emplace_back(flags::kUnequalPowers);
  if (std::isfinite(psi.support())) {
    const auto same = k_constant(psi, spec.nu, std::nullopt, policy);
    report.same_space_value = std::pow(psi.support(), delta) * spec.Z * same.value * input_norm;
  }
  return report;
}

Weight Weight::tabulated(std::vector<double> grid, std::vector<double> values) {
  if (grid.empty() || grid.size() != values.size()) {
    throw ParameterError("weight table needs matching, nonempty grid and values");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ParameterError("weight grid must be strictly increasing");
  }
  auto eval = [grid, values](double p) {
    auto it = std::upper_bound(grid.begin(), grid.end(), p);
    if (it == grid.begin()) return kInfinity;  // undefined left of the table
    return values[static_cast<std::size_t>(it - grid.begin()) - 1];
  };
  return Weight{std::move(eval), std::move(grid)};
}

Weight Weight::operator_type(double lambda, double b, const GridPolicy& policy) {
  check_lambda(lambda);
  return Weight{[lambda](double p) { return std::pow(p / (p - 1.0), lambda); }, open_grid(b, policy)};
}

UpsilonValue upsilon(const Weight& W, const GeneratingFunction& psi, double p) {
  const double b = psi.support();
  if (!psi.contains(p)) throw DomainError("p = " + num(p) + " outside the domain of psi (b = " + num(b) + ")");

  UpsilonValue out{kInfinity, p, true};
  const double right = W.evaluate(p) * psi(p);
  if (std::isfinite(right) && right > 0.0) out.value = right;

  for (double q : W.q_grid) {
    if (q < p || !(q > 1.0 && q < b) || !psi.contains(q)) continue;
    const double candidate = W.evaluate(q) * psi(q);
    if (std::isfinite(candidate) && candidate > 0.0 && candidate < out.value) {
      out = {candidate, q, false};
    }
  }
  if (!std::isfinite(out.value)) {
    throw NoFiniteValue("upsilon: the weight is not finite anywhere on the q-grid at p = " + num(p));
  }
  return out;
}

}  // namespace gls
