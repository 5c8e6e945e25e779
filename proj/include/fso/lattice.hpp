#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fso/seed.hpp"

namespace fso {

using NodeId = std::uint32_t;

inline constexpr std::uint64_t kDefaultBudget = 1'000'000;

/// Closed-form number of SONs of a seed, the product of (multiplicity + 1)
/// over its roles. Throws BudgetExceeded when the product exceeds `budget`
/// (overflow included) without materializing anything.
std::uint64_t lattice_size(const RoleSeed& seed, std::uint64_t budget = kDefaultBudget);

/// The space of all SONs of a seed: every count vector bounded componentwise
/// by the seed multiplicities, ordered by containment.
///
/// Nodes are numbered in mixed radix with the first role varying fastest, so
/// node ids double as array indices for distributions and embeddings. Counts
/// are indexed by the position of a role in `roles()`, not by its id.
class SonLattice {
 public:
  SonLattice(RoleSeed seed, std::uint64_t budget = kDefaultBudget);

  const RoleSeed& seed() const noexcept { return seed_; }
  const std::vector<RoleId>& roles() const noexcept { return roles_; }
  std::size_t role_count() const noexcept { return roles_.size(); }
  std::span<const std::uint32_t> multiplicities() const noexcept { return mult_; }
  std::size_t size() const noexcept { return size_; }

  std::span<const std::uint32_t> counts(NodeId node) const noexcept {
    return {counts_.data() + std::size_t{node} * roles_.size(), roles_.size()};
  }
  std::uint32_t count(NodeId node, std::size_t role_index) const noexcept {
    return counts_[std::size_t{node} * roles_.size() + role_index];
  }
  std::optional<NodeId> find(std::span<const std::uint32_t> counts) const noexcept;
  std::uint32_t stride(std::size_t role_index) const noexcept { return stride_[role_index]; }

  std::uint32_t rank(NodeId node) const noexcept;
  NodeId bottom() const noexcept { return 0; }
  NodeId top() const noexcept { return static_cast<NodeId>(size_ - 1); }

  /// Hasse covering edges (lower, upper), ordered by lower node then role.
  const std::vector<std::pair<NodeId, NodeId>>& edges() const noexcept { return edges_; }

  /// Hasse neighbours in role order; for each role the down-move (if any)
  /// precedes the up-move.
  std::span<const NodeId> neighbors(NodeId node) const noexcept {
    return {adjacency_.data() + offsets_[node], adjacency_.data() + offsets_[node + 1]};
  }
  std::uint32_t degree(NodeId node) const noexcept { return offsets_[node + 1] - offsets_[node]; }

  /// Degree from the closed form: one down-move per nonzero count and one
  /// up-move per count below its multiplicity.
  std::uint32_t degree_formula(NodeId node) const noexcept;

  /// Componentwise order on count vectors.
  bool leq(NodeId a, NodeId b) const noexcept;

 private:
  RoleSeed seed_;
  std::vector<RoleId> roles_;
  std::vector<std::uint32_t> mult_;
  std::vector<std::uint32_t> stride_;
  std::size_t size_ = 0;
  std::vector<std::uint32_t> counts_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::vector<std::uint32_t> offsets_;
  std::vector<NodeId> adjacency_;
};

inline SonLattice build_lattice(const RoleSeed& seed, std::uint64_t budget = kDefaultBudget) {
  return SonLattice(seed, budget);
}

/// Outcome of checking that the development of a sub-seed sits inside the
/// development of its super-seed.
struct ModularityReport {
  bool injective = false;
  bool order_embedding = false;
  bool edge_preserving = false;
  std::size_t nodes_sub = 0;
  std::size_t nodes_super = 0;
  std::size_t covered = 0;
  std::uint64_t order_pairs_checked = 0;
  /// image[u] is the super-lattice node that sub-lattice node u maps to.
  std::vector<NodeId> image;

  bool passed() const noexcept { return injective && order_embedding && edge_preserving; }
};

/// Pads the counts of every node of lattice(a) with zeros over the roles of b
/// (roles matched by identifier) and checks the resulting map. Throws
/// NotSubseed unless is_subseed(a, b).
///
/// Order-embedding is checked on every pair when lattice(a) has at most
/// `exhaustive_limit` nodes; above that, on every Hasse pair plus a fixed
/// pseudo-random sample of pairs.
ModularityReport verify_modularity(const RoleSeed& a, const RoleSeed& b,
                                   std::uint64_t budget = kDefaultBudget,
                                   std::size_t exhaustive_limit = 4096);

}  // namespace fso
