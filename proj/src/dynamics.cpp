#include "fso/dynamics.hpp"

#include <string>

#include "fso/error.hpp"
#include "fso/simd/kernels.hpp"

namespace fso::dynamics {

namespace {

void check_laziness(double laziness) {
  if (!(laziness >= 0.0 && laziness < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "laziness must lie in [0, 1), got " + std::to_string(laziness));
  }
}

}  // namespace

NodeId step(const SonLattice& lattice, NodeId node, double laziness, Rng& rng) {
  const auto next = lattice.neighbors(node);
  if (next.empty()) throw Error(ErrorCode::IsolatedNode, "node " + std::to_string(node) + " has no neighbours");
  if (laziness > 0.0 && rng.uniform01() < laziness) return node;
  return next[rng.below(next.size())];
}

std::vector<NodeId> walk(const SonLattice& lattice, const WalkConfig& config) {
  check_laziness(config.laziness);
  if (config.start >= lattice.size()) {
    throw Error(ErrorCode::InvalidArgument, "start node " + std::to_string(config.start) + " is not in the lattice");
  }
  Rng rng(config.rng_seed);
  std::vector<NodeId> path;
  path.reserve(config.steps + 1);
  path.push_back(config.start);
  NodeId at = config.start;
  for (std::uint64_t i = 0; i < config.steps; ++i) {
    at = step(lattice, at, config.laziness, rng);
    path.push_back(at);
  }
  return path;
}

Distribution occupancy(const SonLattice& lattice, const std::vector<NodeId>& trajectory, std::uint64_t burn_in,
                       std::uint64_t thinning) {
  if (thinning == 0) throw Error(ErrorCode::InvalidArgument, "thinning must be at least 1");
  if (burn_in >= trajectory.size()) throw Error(ErrorCode::InvalidArgument, "burn-in consumes the whole trajectory");
  std::vector<std::uint64_t> hits(lattice.size(), 0);
  std::uint64_t kept = 0;
  for (std::uint64_t i = burn_in; i < trajectory.size(); i += thinning) {
    ++hits[trajectory[i]];
    ++kept;
  }
  Distribution d;
  d.weights.resize(lattice.size());
  for (std::size_t v = 0; v < hits.size(); ++v) d.weights[v] = static_cast<double>(hits[v]) / static_cast<double>(kept);
  return d;
}

Distribution stationary_exact(const SonLattice& lattice) {
  Distribution d;
  d.weights.resize(lattice.size());
  const double total = 2.0 * static_cast<double>(lattice.edges().size());
  if (total == 0.0) throw Error(ErrorCode::IsolatedNode, "lattice has no edges");
  for (NodeId v = 0; v < lattice.size(); ++v) d.weights[v] = static_cast<double>(lattice.degree_formula(v)) / total;
  return d;
}

PowerIterationResult stationary_power_iteration(const SonLattice& lattice, double laziness, double tolerance,
                                                std::size_t max_iterations) {
  check_laziness(laziness);
  if (lattice.edges().empty()) throw Error(ErrorCode::IsolatedNode, "lattice has no edges");
  if (laziness == 0.0) laziness = 0.5;
  const auto& k = simd::active();
  const std::size_t n = lattice.size();

  std::vector<double> inv_degree(n);
  for (NodeId v = 0; v < n; ++v) inv_degree[v] = 1.0 / static_cast<double>(lattice.degree(v));

  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  std::vector<double> outflow(n), inflow(n), next(n);
  PowerIterationResult result;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    k.mul(p.data(), inv_degree.data(), outflow.data(), n);
    for (NodeId v = 0; v < n; ++v) {
      double acc = 0.0;
      for (NodeId u : lattice.neighbors(v)) acc += outflow[u];
      inflow[v] = acc;
    }
    k.axpby(laziness, p.data(), 1.0 - laziness, inflow.data(), next.data(), n);
    const double total = k.sum(next.data(), n);
    for (double& w : next) w /= total;
    result.residual = k.abs_diff_sum(next.data(), p.data(), n);
    result.iterations = it;
    p.swap(next);
    if (result.residual < tolerance) break;
  }
  result.distribution.weights = std::move(p);
  return result;
}

double total_variation(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::SupportMismatch,
                "distributions over " + std::to_string(p.size()) + " and " + std::to_string(q.size()) + " nodes");
  }
  return 0.5 * simd::active().abs_diff_sum(p.weights.data(), q.weights.data(), p.size());
}

}  // namespace fso::dynamics
