#include "gls/psi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
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

void require(bool ok, const std::string& message) {
  if (!ok) throw ParameterError(message);
}

void check_slowly_varying(const SlowlyVarying& L) {
  require(std::isfinite(L.value), "slowly varying parameter must be finite");
  if (L.kind == SlowlyVarying::Kind::Constant) {
    require(L.value > 0.0, "constant slowly varying function must be positive");
  }
}

}  // namespace

SlowlyVarying SlowlyVarying::log_power(double r) {
  SlowlyVarying L{Kind::LogPower, r};
  check_slowly_varying(L);
  return L;
}

SlowlyVarying SlowlyVarying::constant(double c) {
  SlowlyVarying L{Kind::Constant, c};
  check_slowly_varying(L);
  return L;
}

double SlowlyVarying::operator()(double y) const { return std::exp(log(y)); }

double SlowlyVarying::log(double y) const {
  if (kind == Kind::Constant) return std::log(value);
  // ln(y + e) >= 1 for y >= 0, so the double logarithm is nonnegative.
  return value * std::log(std::log(y + std::numbers::e));
}

std::string family_name(Family family) {
  switch (family) {
    case Family::PsiM: return "psi_m";
    case Family::PsiML: return "psi_m_l";
    case Family::PsiBGammaL: return "psi_b_gamma_l";
    case Family::Degenerate: return "degenerate";
    case Family::PsiBBeta: return "psi_b_beta";
    case Family::Tabulated: return "tabulated";
    case Family::PowerWeighted: return "power_weighted";
  }
  return "unknown";
}

bool operator==(const PowerWeightedParams& a, const PowerWeightedParams& b) {
  if (a.delta != b.delta) return false;
  if (a.base == b.base) return true;
  return a.base && b.base && *a.base == *b.base;
}

bool operator==(const GeneratingFunction& a, const GeneratingFunction& b) {
  return a.params_ == b.params_ && a.multiplier_ == b.multiplier_ && a.scale_ == b.scale_;
}

GeneratingFunction::GeneratingFunction(Params params, double b, double lower, bool closed)
    : params_(std::move(params)), b_(b), lower_(lower), closed_(closed) {}

GeneratingFunction GeneratingFunction::psi_m(double m) {
  require(std::isfinite(m) && m > 0.0, "psi_m requires m > 0 (got m = " + num(m) + ")");
  return GeneratingFunction(PsiMParams{m}, kInfinity, 1.0, false);
}

GeneratingFunction GeneratingFunction::psi_ml(double m, SlowlyVarying L) {
  require(std::isfinite(m) && m > 1.0, "psi_m_l requires m > 1 (got m = " + num(m) + ")");
  check_slowly_varying(L);
  GeneratingFunction raw(PsiMLParams{m, L}, kInfinity, 1.0, false);
  return normalize(raw);
}

GeneratingFunction GeneratingFunction::psi_b_gamma_l(double b, double gamma, SlowlyVarying L) {
  require(std::isfinite(b) && b > 1.0, "psi_b_gamma_l requires 1 < b < inf (got b = " + num(b) + ")");
  require(std::isfinite(gamma) && gamma > -1.0,
          "psi_b_gamma_l requires gamma > -1 (got gamma = " + num(gamma) + ")");
  check_slowly_varying(L);
  GeneratingFunction raw(PsiBGammaLParams{b, gamma, L}, b, 1.0, false);
  return normalize(raw);
}

GeneratingFunction GeneratingFunction::degenerate(double r) {
  require(std::isfinite(r) && r > 1.0, "degenerate requires 1 < r < inf (got r = " + num(r) + ")");
  return GeneratingFunction(DegenerateParams{r}, r, 1.0, false);
}

GeneratingFunction GeneratingFunction::psi_b_beta(double b, double beta) {
  require(std::isfinite(b) && b > 1.0, "psi_b_beta requires 1 < b < inf (got b = " + num(b) + ")");
  require(std::isfinite(beta) && beta > 0.0,
          "psi_b_beta requires beta > 0 (got beta = " + num(beta) + ")");
  return GeneratingFunction(PsiBBetaParams{b, beta}, b, 1.0, false);
}

GeneratingFunction GeneratingFunction::tabulated(std::vector<double> grid, std::vector<double> values) {
  require(!grid.empty(), "tabulated function needs at least one node");
  require(grid.size() == values.size(), "tabulated grid and values differ in length");
  require(grid.front() >= 1.0, "tabulated grid must start at p >= 1");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(std::isfinite(grid[i]), "tabulated grid nodes must be finite");
    if (i > 0) require(grid[i] > grid[i - 1], "tabulated grid must be strictly increasing");
    if (!(std::isfinite(values[i]) && values[i] > 0.0)) {
      throw InvalidFunction("tabulated value at p = " + num(grid[i]) + " is not finite and positive");
    }
  }
  const double lower = grid.front();
  const double b = grid.back();
  return GeneratingFunction(TabulatedParams{std::move(grid), std::move(values)}, b, lower, true);
}

GeneratingFunction GeneratingFunction::power_weighted(const GeneratingFunction& base, double delta) {
  require(std::isfinite(delta) && delta >= 0.0, "power weight requires delta >= 0");
  return GeneratingFunction(PowerWeightedParams{std::make_shared<const GeneratingFunction>(base), delta},
                            base.support(), base.lower(), base.closed());
}

Family GeneratingFunction::family() const { return static_cast<Family>(params_.index()); }

bool GeneratingFunction::contains(double p) const {
  if (!(p >= lower_)) return false;
  return closed_ ? p <= b_ : p < b_;
}

double GeneratingFunction::operator()(double p) const { return std::exp(log_at(p)); }

double GeneratingFunction::log_at(double p) const {
  if (!contains(p)) {
    throw DomainError("p = " + num(p) + " outside the domain [" + num(lower_) + ", " + num(b_) +
                      (closed_ ? "]" : ")") + " of " + family_name(family()) + " (b = " + num(b_) +
                      ")");
  }
  return std::log(multiplier_) + raw_log(p);
}

double GeneratingFunction::raw_log(double p) const {
  struct Visitor {
    double p;
    double operator()(const PsiMParams& f) const { return std::log(p) / f.m; }
    double operator()(const PsiMLParams& f) const {
      const double inner = std::pow(p, (f.m - 1.0) * (f.m - 1.0) / f.m);
      return std::log(p) / f.m - f.L.log(inner) / (f.m - 1.0);
    }
    double operator()(const PsiBGammaLParams& f) const {
      const double gap = f.b - p;
      return -(f.gamma + 1.0) / f.b * std::log(gap) + f.L.log(1.0 / gap) / f.b;
    }
    double operator()(const DegenerateParams&) const { return 0.0; }
    double operator()(const PsiBBetaParams& f) const {
      return -f.beta * std::log((f.b - p) / (f.b - 1.0));
    }
    double operator()(const TabulatedParams& f) const {
      const auto& g = f.grid;
      if (g.size() == 1) return std::log(f.values.front());
      auto it = std::upper_bound(g.begin(), g.end(), p);
      std::size_t hi = it == g.end() ? g.size() - 1 : static_cast<std::size_t>(it - g.begin());
      if (hi == 0) hi = 1;
      const std::size_t lo = hi - 1;
      const double t = (p - g[lo]) / (g[hi] - g[lo]);
      return std::log(f.values[lo] + t * (f.values[hi] - f.values[lo]));
    }
    double operator()(const PowerWeightedParams& f) const {
      return f.delta * std::log(p) + f.base->log_at(p);
    }
  };
  return std::visit(Visitor{p}, params_);
}

GeneratingFunction GeneratingFunction::scaled(double c) const {
  if (!(std::isfinite(c) && c > 0.0)) throw ParameterError("scale factor must be finite and positive");
  return with_factors(multiplier_ * c, scale_);
}

GeneratingFunction GeneratingFunction::with_factors(double multiplier, double scale) const {
  if (!(std::isfinite(multiplier) && multiplier > 0.0 && std::isfinite(scale) && scale > 0.0)) {
    throw ParameterError("multiplier and scale must be finite and positive");
  }
  GeneratingFunction out = *this;
  out.multiplier_ = multiplier;
  out.scale_ = scale;
  return out;
}

double evaluate(const GeneratingFunction& psi, double p) { return psi(p); }

double v_function(const GeneratingFunction& psi, double p) { return p * psi.log_at(p); }

std::vector<double> domain_grid(const GeneratingFunction& psi, const GridPolicy& policy) {
  if (const auto* tab = std::get_if<TabulatedParams>(&psi.params())) return tab->grid;
  if (const auto* pw = std::get_if<PowerWeightedParams>(&psi.params())) {
    return domain_grid(*pw->base, policy);
  }
  return p_grid(psi.support(), policy);
}

Infimum infimum(const GeneratingFunction& psi, const GridPolicy& policy) {
  const auto grid = domain_grid(psi, policy);
  std::size_t best = 0;
  double best_log = kInfinity;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double lv = psi.log_at(grid[i]);
    if (std::isnan(lv)) throw InvalidFunction("generating function is undefined at p = " + num(grid[i]));
    if (lv < best_log) {
      best_log = lv;
      best = i;
    }
  }
  double argmin = grid[best];
  if (grid.size() > 1 && psi.family() != Family::Tabulated) {
    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    const auto refined = golden_section_minimize(
        [&](double p) {
          const double lv = psi.log_at(p);
          return std::isnan(lv) ? kInfinity : lv;
        },
        lo, hi);
    if (refined.fx < best_log) {
      best_log = refined.fx;
      argmin = refined.x;
    }
  }
  return {std::exp(best_log), argmin};
}

GeneratingFunction normalize(const GeneratingFunction& psi, const GridPolicy& policy) {
  const auto grid = domain_grid(psi, policy);
  for (double p : grid) {
    const double value = psi(p);
    if (!(std::isfinite(value) && value > 0.0)) {
      throw InvalidFunction("generating function value at p = " + num(p) + " is " + num(value) +
                            "; expected finite and positive");
    }
  }
  const double inf = infimum(psi, policy).value;
  if (!(std::isfinite(inf) && inf > 0.0)) {
    throw InvalidFunction("generating function is not bounded below by a positive constant");
  }
  return psi.with_factors(psi.multiplier() / inf, inf);
}

bool dominates(const GeneratingFunction& psi, const GeneratingFunction& nu, double tolerance,
               const GridPolicy& policy, double unbounded_cap) {
  const double b = psi.support();
  const bool same_support =
      b == nu.support() || (std::isfinite(b) && std::abs(b - nu.support()) <= 1e-12 * b);
  if (!same_support) {
    throw IncompatibleSupport("domination needs a common support bound (b = " + num(b) + " vs " +
                              num(nu.support()) + ")");
  }
  std::vector<double> nodes;
  if (!std::isfinite(b)) {
    nodes = geometric_grid(1.0, unbounded_cap, policy.nodes);
  } else {
    nodes = p_grid(b, policy);
    if (psi.closed() && nu.closed()) nodes.push_back(b);
  }
  std::erase_if(nodes, [&](double p) { return !(psi.contains(p) && nu.contains(p)); });
  if (nodes.size() < 4) return false;

  std::vector<double> ratio(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ratio[i] = std::exp(psi.log_at(nodes[i]) - nu.log_at(nodes[i]));
  }
  for (std::size_t i = nodes.size() - nodes.size() / 4; i < nodes.size(); ++i) {
    if (ratio[i] > ratio[i - 1] * (1.0 + 1e-12)) return false;
  }
  return ratio.back() < tolerance;
}

}  // namespace gls
