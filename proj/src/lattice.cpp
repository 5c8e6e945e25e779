#include "fso/lattice.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "fso/error.hpp"
#include "fso/rng.hpp"

namespace fso {

std::uint64_t lattice_size(const RoleSeed& seed, std::uint64_t budget) {
  std::uint64_t size = 1;
  for (const auto& [role, count] : seed.multiplicities()) {
    const std::uint64_t factor = std::uint64_t{count} + 1;
    if (size > budget / factor) {
      throw Error(ErrorCode::BudgetExceeded, "lattice of seed " + seed.canonical_text() +
                                                 " exceeds budget of " + std::to_string(budget) + " nodes");
    }
    size *= factor;
  }
  return size;
}

SonLattice::SonLattice(RoleSeed seed, std::uint64_t budget) : seed_(std::move(seed)) {
  const std::uint64_t total = lattice_size(seed_, std::min<std::uint64_t>(budget, UINT32_MAX - 1));
  size_ = static_cast<std::size_t>(total);

  for (const auto& [role, count] : seed_.multiplicities()) {
    roles_.push_back(role);
    mult_.push_back(count);
  }
  const std::size_t width = roles_.size();
  stride_.resize(width);
  std::uint32_t s = 1;
  for (std::size_t r = 0; r < width; ++r) {
    stride_[r] = s;
    s *= mult_[r] + 1;
  }

  counts_.assign(size_ * width, 0);
  std::vector<std::uint32_t> current(width, 0);
  for (std::size_t node = 0; node < size_; ++node) {
    std::copy(current.begin(), current.end(), counts_.begin() + static_cast<std::ptrdiff_t>(node * width));
    for (std::size_t r = 0; r < width; ++r) {
      if (++current[r] <= mult_[r]) break;
      current[r] = 0;
    }
  }

  offsets_.assign(size_ + 1, 0);
  for (std::size_t node = 0; node < size_; ++node) {
    offsets_[node + 1] = offsets_[node] + degree_formula(static_cast<NodeId>(node));
  }
  adjacency_.resize(offsets_.back());
  for (std::size_t node = 0; node < size_; ++node) {
    std::uint32_t at = offsets_[node];
    for (std::size_t r = 0; r < width; ++r) {
      const std::uint32_t c = count(static_cast<NodeId>(node), r);
      if (c > 0) adjacency_[at++] = static_cast<NodeId>(node - stride_[r]);
      if (c < mult_[r]) {
        adjacency_[at++] = static_cast<NodeId>(node + stride_[r]);
        edges_.emplace_back(static_cast<NodeId>(node), static_cast<NodeId>(node + stride_[r]));
      }
    }
  }
}

std::optional<NodeId> SonLattice::find(std::span<const std::uint32_t> c) const noexcept {
  if (c.size() != roles_.size()) return std::nullopt;
  std::uint64_t index = 0;
  for (std::size_t r = 0; r < c.size(); ++r) {
    if (c[r] > mult_[r]) return std::nullopt;
    index += std::uint64_t{c[r]} * stride_[r];
  }
  return static_cast<NodeId>(index);
}

std::uint32_t SonLattice::rank(NodeId node) const noexcept {
  const auto c = counts(node);
  return std::accumulate(c.begin(), c.end(), std::uint32_t{0});
}

std::uint32_t SonLattice::degree_formula(NodeId node) const noexcept {
  std::uint32_t d = 0;
  for (std::size_t r = 0; r < roles_.size(); ++r) {
    const std::uint32_t c = count(node, r);
    d += (c > 0 ? 1u : 0u) + (c < mult_[r] ? 1u : 0u);
  }
  return d;
}

bool SonLattice::leq(NodeId a, NodeId b) const noexcept {
  for (std::size_t r = 0; r < roles_.size(); ++r) {
    if (count(a, r) > count(b, r)) return false;
  }
  return true;
}

ModularityReport verify_modularity(const RoleSeed& a, const RoleSeed& b, std::uint64_t budget,
                                   std::size_t exhaustive_limit) {
  if (!is_subseed(a, b)) {
    throw Error(ErrorCode::NotSubseed, a.canonical_text() + " is not a sub-seed of " + b.canonical_text());
  }
  const SonLattice sub(a, budget);
  const SonLattice super(b, budget);

  // Position of each role of `a` among the roles of `b`.
  std::vector<std::size_t> slot(sub.role_count());
  for (std::size_t r = 0; r < sub.role_count(); ++r) {
    const auto& rb = super.roles();
    slot[r] = static_cast<std::size_t>(std::lower_bound(rb.begin(), rb.end(), sub.roles()[r]) - rb.begin());
  }

  ModularityReport report;
  report.nodes_sub = sub.size();
  report.nodes_super = super.size();
  report.image.resize(sub.size());
  std::vector<std::uint32_t> padded(super.role_count());
  for (NodeId u = 0; u < sub.size(); ++u) {
    std::fill(padded.begin(), padded.end(), 0);
    for (std::size_t r = 0; r < sub.role_count(); ++r) padded[slot[r]] = sub.count(u, r);
    report.image[u] = *super.find(padded);
  }

  std::vector<NodeId> sorted = report.image;
  std::sort(sorted.begin(), sorted.end());
  report.covered = static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  report.injective = report.covered == sub.size();

  auto pair_ok = [&](NodeId u, NodeId v) {
    ++report.order_pairs_checked;
    return sub.leq(u, v) == super.leq(report.image[u], report.image[v]);
  };
  bool order_ok = true;
  if (sub.size() <= exhaustive_limit) {
    for (NodeId u = 0; u < sub.size() && order_ok; ++u) {
      for (NodeId v = 0; v < sub.size(); ++v) {
        if (!pair_ok(u, v)) {
          order_ok = false;
          break;
        }
      }
    }
  } else {
    for (const auto& [u, v] : sub.edges()) {
      if (!pair_ok(u, v) || !pair_ok(v, u)) {
        order_ok = false;
        break;
      }
    }
    Rng rng(0x5eed);
    const std::uint64_t samples = std::uint64_t{exhaustive_limit} * exhaustive_limit;
    for (std::uint64_t i = 0; i < samples && order_ok; ++i) {
      order_ok = pair_ok(static_cast<NodeId>(rng.below(sub.size())), static_cast<NodeId>(rng.below(sub.size())));
    }
  }
  report.order_embedding = order_ok;

  bool edges_ok = true;
  for (const auto& [u, v] : sub.edges()) {
    const NodeId fu = report.image[u];
    const NodeId fv = report.image[v];
    std::uint32_t diff = 0;
    bool unit_step = fv > fu;
    for (std::size_t r = 0; r < super.role_count() && unit_step; ++r) {
      const std::uint32_t cu = super.count(fu, r);
      const std::uint32_t cv = super.count(fv, r);
      if (cv < cu || cv > cu + 1) unit_step = false;
      diff += cv - cu;
    }
    if (!unit_step || diff != 1) {
      edges_ok = false;
      break;
    }
  }
  report.edge_preserving = edges_ok;
  return report;
}

}  // namespace fso
