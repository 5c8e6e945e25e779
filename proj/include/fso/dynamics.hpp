#pragma once

#include <cstdint>
#include <vector>

#include "fso/lattice.hpp"
#include "fso/rng.hpp"

namespace fso::dynamics {

inline constexpr double kDefaultLaziness = 0.5;

struct WalkConfig {
  std::uint64_t steps = 0;
  NodeId start = 0;
  /// Probability of staying put at each step, in [0, 1).
  double laziness = kDefaultLaziness;
  std::uint64_t rng_seed = 0;
};

/// Probability weights indexed by node id.
struct Distribution {
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
};

/// One move of the lazy uniform-neighbour walk on the Hasse graph: stay with
/// probability `laziness`, otherwise jump to a uniformly chosen neighbour.
/// Throws IsolatedNode if the node has no neighbours.
NodeId step(const SonLattice& lattice, NodeId node, double laziness, Rng& rng);

/// Trajectory of steps + 1 nodes, starting with config.start.
std::vector<NodeId> walk(const SonLattice& lattice, const WalkConfig& config);

/// Empirical occupancy of trajectory[burn_in:] keeping every `thinning`-th node.
Distribution occupancy(const SonLattice& lattice, const std::vector<NodeId>& trajectory, std::uint64_t burn_in = 0,
                       std::uint64_t thinning = 1);

/// Stationary law in closed form: pi(c) = degree(c) / (2 |edges|). Laziness
/// does not move it.
Distribution stationary_exact(const SonLattice& lattice);

struct PowerIterationResult {
  Distribution distribution;
  /// L1 distance between the last two iterates.
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// Stationary law by repeated application of the lazy transition operator,
/// starting from the uniform law. A laziness of zero is replaced by 1/2 (the
/// walk is periodic otherwise; the fixed point is the same).
PowerIterationResult stationary_power_iteration(const SonLattice& lattice, double laziness = kDefaultLaziness,
                                                double tolerance = 1e-13, std::size_t max_iterations = 1'000'000);

/// Half the L1 distance. Throws SupportMismatch on different sizes.
double total_variation(const Distribution& p, const Distribution& q);

}  // namespace fso::dynamics
