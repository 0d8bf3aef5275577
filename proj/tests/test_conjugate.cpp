#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gls/conjugate.hpp"
#include "gls/error.hpp"
#include "gls/grid.hpp"
#include "gls/psi.hpp"
#include "oracles.hpp"

using namespace gls;
using doctest::Approx;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = a + (b - a) * i / (n - 1);
  return x;
}

ConvexGridFunction from_formula(double a, double b, int n, double (*f)(double)) {
  auto x = linspace(a, b, n);
  std::vector<double> v;
  for (double xi : x) v.push_back(f(xi));
  return ConvexGridFunction(x, v, true);
}

// v*(u) for v(p) = p ln psi(p) by a dense independent scan over p.
double conjugate_oracle(const GeneratingFunction& psi, double u, double hi) {
  return oracle::scan_max([&](double p) { return p * u - p * std::log(psi(p)); }, 1.0, hi, 200001).value;
}

}  // namespace

TEST_SUITE("conjugate") {
  TEST_CASE("fenchel examples") {
    const auto quad = from_formula(-10, 10, 4001, [](double x) { return x * x / 2; });
    CHECK(fenchel(quad, 1.0) == Approx(0.5).epsilon(1e-9));
    const auto absf = from_formula(-10, 10, 4001, [](double x) { return std::abs(x); });
    CHECK(std::abs(fenchel(absf, 0.5)) < 1e-12);

    const auto v1 = v_tabulation(GeneratingFunction::psi_m(1.0));
    CHECK(fenchel(v1, 2.0) == Approx(std::numbers::e).epsilon(1e-9));
    CHECK(fenchel_point(v1, 2.0).argmax == Approx(std::numbers::e).epsilon(1e-6));
  }

  TEST_CASE("conjugate of the tabulated v matches a dense scan") {
    for (double m : {0.5, 1.0, 2.0, 4.0}) {
      const auto psi = GeneratingFunction::psi_m(m);
      const auto v = v_tabulation(psi);
      for (double u : {0.5, 1.0, 2.0, 3.0}) {
        CHECK(fenchel(v, u) == Approx(conjugate_oracle(psi, u, 1024.0)).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("conjugate is convex and Young's inequality holds") {
    const auto v = v_tabulation(GeneratingFunction::psi_m(2.0));
    oracle::Xorshift rng(11);
    for (int i = 0; i < 200; ++i) {
      const double u1 = rng.uniform(0.0, 4.0);
      const double u2 = rng.uniform(0.0, 4.0);
      const double t = rng.uniform();
      CHECK(fenchel(v, t * u1 + (1 - t) * u2) <= t * fenchel(v, u1) + (1 - t) * fenchel(v, u2) + 1e-9);
      const double p = rng.uniform(1.0, 100.0);
      CHECK(p * u1 <= v(p) + fenchel(v, u1) + 1e-9);
    }
  }

  TEST_CASE("biconjugate recovers convex quadratics") {
    for (double a : {0.5, 1.0, 2.0}) {
      auto x = linspace(-10, 10, 2001);
      std::vector<double> fx;
      for (double xi : x) fx.push_back(a * xi * xi / 2);
      const ConvexGridFunction f(x, fx, true);
      auto u = linspace(-20 * a, 20 * a, 4001);
      std::vector<double> fu;
      for (double ui : u) fu.push_back(fenchel(f, ui));
      const ConvexGridFunction fstar(u, fu, true);
      for (double xi = -5; xi <= 5; xi += 0.01) CHECK(std::abs(fenchel(fstar, xi) - a * xi * xi / 2) < 1e-6);
    }
  }

  TEST_CASE("non-convex tables are rejected when checked") {
    CHECK_THROWS_AS(ConvexGridFunction({0, 1, 2}, {0, 1, 0}, true), InvalidFunction);
    CHECK_NOTHROW(ConvexGridFunction({0, 1, 2}, {0, 1, 0}, false));
    CHECK_THROWS(ConvexGridFunction({0, 0, 2}, {0, 1, 2}));
  }

  TEST_CASE("tail bound examples") {
    CHECK(tail_bound(GeneratingFunction::psi_m(2.0), 1.0, std::numbers::e) ==
          Approx(std::exp(-std::numbers::e / 2)).epsilon(1e-8));
    CHECK(tail_bound(GeneratingFunction::degenerate(2.0), 1.0, std::numbers::e) ==
          Approx(std::exp(-2.0)).epsilon(1e-8));
    CHECK(tail_bound(GeneratingFunction::psi_m(1.0), 2.0, 2 * std::exp(2.0)) ==
          Approx(std::exp(-std::numbers::e)).epsilon(1e-8));
  }

  TEST_CASE("tail bound below e times the norm is out of validity") {
    try {
      tail_bound(GeneratingFunction::psi_m(2.0), 2.0, 2.0);
      FAIL("expected out-of-validity");
    } catch (const OutOfValidity& e) {
      CHECK(e.threshold() == Approx(2 * std::numbers::e));
    }
    // The threshold itself is accepted (with the documented slack).
    CHECK_NOTHROW(tail_bound(GeneratingFunction::psi_m(2.0), 1.0, 2.718281828));
  }

  TEST_CASE("tail bound decreases in y and matches the scan oracle") {
    const auto psi = GeneratingFunction::psi_m(2.0);
    double previous = 1.0;
    for (double y = std::numbers::e; y < 20; y += 0.5) {
      const double t = tail_bound(psi, 1.0, y);
      CHECK(t <= previous + 1e-15);
      CHECK(t == Approx(std::exp(-conjugate_oracle(psi, std::log(y), 1024.0))).epsilon(1e-7));
      previous = t;
    }
  }

  TEST_CASE("norm bound from a tail envelope") {
    const auto psi = GeneratingFunction::psi_m(2.0);
    GridPolicy fast;
    fast.nodes = 64;
    const auto zero = norm_bound_from_tail(TailEnvelope::zero(), psi, 1.0, fast);
    CHECK(zero.value == 0.0);

    TailEnvelope gauss{[](double y) { return std::exp(-y * y); }, 0.0};
    const auto nb = norm_bound_from_tail(gauss, psi, 1.0, fast);
    CHECK(nb.value >= 0.5);
    CHECK(nb.value <= 5.0);

    // Independent check at p = 2 and p = 4: p int y^{p-1} e^{-y^2} dy = Gamma(p/2 + 1).
    for (double p : {2.0, 4.0}) {
      const double moment = oracle::simpson([&](double y) { return p * std::pow(y, p - 1) * std::exp(-y * y); }, 0, 12);
      CHECK(moment == Approx(std::tgamma(p / 2 + 1)).epsilon(1e-8));
      CHECK(nb.value >= std::pow(moment, 1 / p) / psi(p) * (1 - 1e-6));
    }

    TailEnvelope heavy{[](double y) { return std::min(1.0, 1.0 / (y * y)); }, 0.0};
    try {
      norm_bound_from_tail(heavy, psi, 1.0, fast);
      FAIL("expected an unbounded moment");
    } catch (const UnboundedMoment& e) {
      CHECK(e.p() >= 2.0 - 1e-9);
    }
  }

  TEST_CASE("norm bound requires an unbounded support") {
    CHECK_THROWS_AS(norm_bound_from_tail(TailEnvelope::zero(), GeneratingFunction::psi_b_beta(3.0, 1.0), 1.0),
                    PreconditionError);
  }

  TEST_CASE("Orlicz function") {
    const auto m2 = GeneratingFunction::psi_m(2.0);
    CHECK(orlicz_M(m2, 0.0) == 0.0);
    CHECK(orlicz_M(GeneratingFunction::psi_m(1.0), std::exp(2.0)) ==
          Approx(std::exp(std::numbers::e)).epsilon(1e-8));
    for (const auto& psi : {m2, GeneratingFunction::psi_m(1.0), GeneratingFunction::degenerate(3.0)}) {
      CHECK(orlicz_M(psi, 3.7) == orlicz_M(psi, -3.7));
      // Continuity at |y| = e.
      const double e = std::numbers::e;
      CHECK(orlicz_M(psi, e * (1 - 1e-9)) == Approx(orlicz_M(psi, e * (1 + 1e-9))).epsilon(1e-6));
      // Nondecreasing in |y|.
      double prev = 0.0;
      for (double y = 0.0; y < 20.0; y += 0.25) {
        const double v = orlicz_M(psi, y);
        CHECK(v >= prev);
        prev = v;
      }
    }
  }
}
