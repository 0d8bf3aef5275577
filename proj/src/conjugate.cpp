#include "gls/conjugate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gls/error.hpp"

namespace gls {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

double log_add(double a, double b) {
  if (a == -kInfinity) return b;
  if (b == -kInfinity) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

ConvexGridFunction::ConvexGridFunction(std::vector<double> grid, std::vector<double> values,
                                       bool check_convex)
    : grid_(std::move(grid)), values_(std::move(values)) {
  validate(check_convex);
}

ConvexGridFunction::ConvexGridFunction(std::vector<double> grid, std::function<double(double)> exact,
                                       bool check_convex)
    : grid_(std::move(grid)), exact_(std::move(exact)) {
  values_.reserve(grid_.size());
  for (double x : grid_) values_.push_back(exact_(x));
  validate(check_convex);
}

void ConvexGridFunction::validate(bool check_convex) const {
  if (grid_.empty()) throw DomainError("grid function needs a nonempty domain");
  if (grid_.size() != values_.size()) throw DomainError("grid and values differ in length");
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1])) throw DomainError("grid must be strictly increasing");
  }
  if (!check_convex) return;
  for (std::size_t i = 1; i + 1 < grid_.size(); ++i) {
    const double left = (values_[i] - values_[i - 1]) / (grid_[i] - grid_[i - 1]);
    const double right = (values_[i + 1] - values_[i]) / (grid_[i + 1] - grid_[i]);
    if (right - left < -1e-9 * std::max(1.0, std::abs(left))) {
      throw InvalidFunction("grid function is not convex near x = " + num(grid_[i]));
    }
  }
}

double ConvexGridFunction::operator()(double x) const {
  if (!(x >= lo() && x <= hi())) {
    throw DomainError("x = " + num(x) + " outside [" + num(lo()) + ", " + num(hi()) + "]");
  }
  if (exact_) return exact_(x);
  if (grid_.size() == 1) return values_.front();
  auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  std::size_t hi_idx = it == grid_.end() ? grid_.size() - 1 : static_cast<std::size_t>(it - grid_.begin());
  if (hi_idx == 0) hi_idx = 1;
  const std::size_t lo_idx = hi_idx - 1;
  const double t = (x - grid_[lo_idx]) / (grid_[hi_idx] - grid_[lo_idx]);
  return values_[lo_idx] + t * (values_[hi_idx] - values_[lo_idx]);
}

ConjugatePoint fenchel_point(const ConvexGridFunction& f, double u) {
  const auto& x = f.grid();
  const auto& v = f.values();
  std::size_t best = 0;
  double best_value = -kInfinity;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = x[i] * u - v[i];
    if (h > best_value) {
      best_value = h;
      best = i;
    }
  }
  ConjugatePoint out{best_value, x[best]};
  if (f.has_exact() && x.size() > 1) {
    const double lo = x[best == 0 ? 0 : best - 1];
    const double hi = x[std::min(best + 1, x.size() - 1)];
    const auto refined = golden_section_minimize(
        [&](double t) {
          const double h = t * u - f(t);
          return std::isnan(h) ? kInfinity : -h;
        },
        lo, hi);
    if (-refined.fx > out.value) out = {-refined.fx, refined.x};
  }
  return out;
}

double fenchel(const ConvexGridFunction& f, double u) { return fenchel_point(f, u).value; }

ConvexGridFunction v_tabulation(const GeneratingFunction& psi, const GridPolicy& policy) {
  return ConvexGridFunction(domain_grid(psi, policy), [psi](double p) { return v_function(psi, p); });
}

double TailEnvelope::operator()(double y) const {
  if (y < y_min) return 1.0;
  const double value = evaluate(y);
  if (std::isnan(value)) return 1.0;
  return std::clamp(value, 0.0, 1.0);
}

TailEnvelope TailEnvelope::zero(double y_min) {
  return TailEnvelope{[](double) { return 0.0; }, y_min};
}

TailEnvelope TailEnvelope::from_gls(const GeneratingFunction& psi, double gls_norm,
                                    const GridPolicy& policy) {
  if (!(std::isfinite(gls_norm) && gls_norm > 0.0)) {
    throw ParameterError("tail envelope needs a finite positive GLS norm");
  }
  auto v = std::make_shared<const ConvexGridFunction>(v_tabulation(psi, policy));
  return TailEnvelope{[v, gls_norm](double y) { return std::exp(-fenchel(*v, std::log(y / gls_norm))); },
                      std::numbers::e * gls_norm};
}

double tail_bound(const GeneratingFunction& psi, double gls_norm, double y, const GridPolicy& policy) {
  if (!(std::isfinite(gls_norm) && gls_norm > 0.0)) {
    throw ParameterError("tail bound needs a finite positive GLS norm (got " + num(gls_norm) + ")");
  }
  const double threshold = std::numbers::e * gls_norm;
  if (!(y >= threshold * (1.0 - kTailValiditySlack))) {
    throw OutOfValidity("tail bound is valid only for y >= e*||f|| = " + num(threshold) +
                            " (got y = " + num(y) + ")",
                        threshold);
  }
  const auto v = v_tabulation(psi, policy);
  return std::exp(-fenchel(v, std::log(y / gls_norm)));
}

namespace {

// ln of p * int_a^b y^{p-1} g(y) dy with the integrand handled in log space
// (t = ln y), so that large p does not overflow.
double log_piece(double p, const TailEnvelope& tail, double ya, double yb) {
  const double ta = std::log(ya);
  const double tb = std::log(yb);
  auto log_integrand = [&](double t) {
    const double g = tail(std::exp(t));
    if (!(g > 0.0)) return -kInfinity;
    return std::log(p) + p * t + std::log(g);
  };
  constexpr int kProbe = 33;
  double shift = -kInfinity;
  for (int i = 0; i < kProbe; ++i) {
    shift = std::max(shift, log_integrand(ta + (tb - ta) * i / (kProbe - 1)));
  }
  if (shift == -kInfinity) return -kInfinity;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double t) {
        const double l = log_integrand(t);
        return l == -kInfinity ? 0.0 : std::exp(l - shift);
      },
      ta, tb, 15, 1e-13);
  if (!(integral > 0.0)) return -kInfinity;
  return shift + std::log(integral);
}

// ln of p * int_0^1 y^{p-1} g(y) dy, computed directly (bounded by 1).
double log_unit_piece(double p, const TailEnvelope& tail) {
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double y) { return y <= 0.0 ? 0.0 : p * std::pow(y, p - 1.0) * tail(y); }, 0.0, 1.0, 15,
      1e-13);
  return integral > 0.0 ? std::log(integral) : -kInfinity;
}

// ln |zeta|_p^p for the moment dominated by the envelope.
double log_moment(double p, const TailEnvelope& tail) {
  constexpr double kRelTail = 1e-12;
  const double log_rel = std::log(kRelTail);
  const double y_cap = 1e300;

  double total = tail.y_min > 0.0 ? p * std::log(tail.y_min) : -kInfinity;
  double start = tail.y_min;
  if (start <= 0.0) {
    total = log_add(total, log_unit_piece(p, tail));
    start = 1.0;
  }
  std::array<double, 4> history{-kInfinity, -kInfinity, -kInfinity, -kInfinity};
  std::size_t pieces = 0;
  for (double a = start; a < y_cap; a *= 2.0) {
    const double b = 2.0 * a;
    const double piece = log_piece(p, tail, a, b);
    total = log_add(total, piece);
    ++pieces;
    std::rotate(history.begin(), history.begin() + 1, history.end());
    history.back() = piece;

    if (!(tail(b) > 0.0)) return total;  // envelope vanished for good
    if (piece != -kInfinity && piece - total < log_rel) {
      // Past the peak once the integrand decays across the piece.
      const double before = std::log(p) + p * std::log(a) + std::log(tail(a));
      const double after = std::log(p) + p * std::log(b) + std::log(tail(b));
      if (after < before) return total;
    }
    if (pieces >= 4 && history.front() != -kInfinity) {
      // Power-law tails give a constant ratio between successive pieces.
      const double r1 = history[1] - history[0];
      const double r2 = history[2] - history[1];
      const double r3 = history[3] - history[2];
      if (std::abs(r2 - r1) <= 1e-6 && std::abs(r3 - r2) <= 1e-6) {
        if (r3 >= -1e-9) {
          throw UnboundedMoment("moment integral diverges at p = " + num(p), p);
        }
        const double rho = std::exp(r3);
        return log_add(total, piece + std::log(rho / (1.0 - rho)));
      }
    }
  }
  throw UnboundedMoment("moment integral does not converge below y = 1e300 at p = " + num(p), p);
}

}  // namespace

NormBound norm_bound_from_tail(const TailEnvelope& tail, const GeneratingFunction& psi, double K,
                               const GridPolicy& policy) {
  if (!(std::isfinite(K) && K > 0.0)) throw ParameterError("K must be finite and positive");
  if (std::isfinite(psi.support())) {
    throw DomainError("norm bound from tail needs an unbounded support (b = inf)");
  }
  const auto grid = domain_grid(psi, policy);
  if (!(psi(grid.back()) > psi(grid.front()))) {
    throw DomainError("norm bound from tail needs psi increasing to infinity");
  }
  NormBound out{0.0, 0.0, grid.front()};
  for (double p : grid) {
    const double lm = log_moment(p, tail);
    if (lm == -kInfinity) continue;
    const double ratio = std::exp(lm / p - psi.log_at(p));
    if (ratio > out.value) {
      out.value = ratio;
      out.argmax_p = p;
    }
  }
  out.constant = out.value / K;
  return out;
}

double orlicz_M(const GeneratingFunction& psi, double y, const GridPolicy& policy) {
  const auto v = v_tabulation(psi, policy);
  const double a = std::abs(y);
  if (a >= std::numbers::e) return std::exp(fenchel(v, std::log(a)));
  const double c = std::exp(fenchel(v, 1.0)) / (std::numbers::e * std::numbers::e);
  return c * a * a;
}

}  // namespace gls
