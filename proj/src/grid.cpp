#include "gls/grid.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "gls/error.hpp"

namespace gls {

GridPolicy GridPolicy::from_env() {
  GridPolicy policy;
  if (const char* env = std::getenv("GLS_TOOLKIT_PMAX"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const double value = std::strtod(env, &end);
    if (end == env || *end != '\0' || !std::isfinite(value) || value <= 1.0) {
      throw ParameterError("GLS_TOOLKIT_PMAX must be a finite number > 1, got '" +
                           std::string(env) + "'");
    }
    policy.p_max = value;
  }
  return policy;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 2) {
    throw DomainError("geometric_grid requires 0 < lo <= hi and at least two nodes");
  }
  std::vector<double> nodes(n);
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = std::exp(log_lo + step * static_cast<double>(i));
  nodes.front() = lo;
  nodes.back() = hi;
  return nodes;
}

namespace {

void check_policy(double b, const GridPolicy& policy) {
  if (!(b > 1.0)) throw DomainError("support bound b must exceed 1");
  if (policy.nodes < 4) throw DomainError("grid policy needs at least 4 nodes");
  if (!(policy.p_max > 1.0)) throw DomainError("grid policy p_max must exceed 1");
  if (!(policy.edge_gap > 0.0 && policy.edge_gap < 0.5)) {
    throw DomainError("grid policy edge_gap must lie in (0, 0.5)");
  }
}

}  // namespace

std::vector<double> open_grid(double b, const GridPolicy& policy) {
  check_policy(b, policy);
  if (truncated(b, policy)) {
    const double lo = std::pow(policy.edge_gap, 0.75);
    auto offsets = geometric_grid(lo, policy.p_max - 1.0, policy.nodes);
    for (auto& q : offsets) q += 1.0;
    return offsets;
  }
  // Fractions s of (b-1), geometric toward 0 on the left half and mirrored
  // toward 1 on the right half.
  const std::size_t half = policy.nodes / 2;
  const auto left = geometric_grid(0.5 * policy.edge_gap, 0.5, half);
  std::vector<double> nodes;
  nodes.reserve(2 * half);
  const double width = b - 1.0;
  for (double s : left) nodes.push_back(1.0 + width * s);
  for (auto it = left.rbegin() + 1; it != left.rend(); ++it) nodes.push_back(b - width * *it);
  // Guard against rounding collapsing the extreme nodes onto the endpoints.
  std::erase_if(nodes, [b](double q) { return !(q > 1.0 && q < b); });
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

std::vector<double> p_grid(double b, const GridPolicy& policy) {
  check_policy(b, policy);
  if (truncated(b, policy)) return geometric_grid(1.0, policy.p_max, policy.nodes);
  GridPolicy inner = policy;
  inner.nodes = policy.nodes - 1;
  auto nodes = open_grid(b, inner);
  nodes.insert(nodes.begin(), 1.0);
  return nodes;
}

}  // namespace gls
