#pragma once

#include <vector>

#include "fso/rng.hpp"
#include "fso/seed.hpp"

namespace fso::testing {

inline RoleSeed random_seed(Rng& rng, std::size_t max_len, RoleId max_role) {
  const std::size_t len = 1 + rng.below(max_len);
  std::vector<RoleId> roles(len);
  for (auto& r : roles) r = static_cast<RoleId>(rng.below(max_role + 1));
  return RoleSeed::from_roles(roles);
}

/// A random sub-multiset of `seed` (never empty).
inline RoleSeed random_subseed(Rng& rng, const RoleSeed& seed) {
  std::vector<RoleId> kept;
  for (RoleId r : seed.roles()) {
    if (rng.bernoulli(0.5)) kept.push_back(r);
  }
  if (kept.empty()) kept.push_back(seed.roles()[rng.below(seed.size())]);
  return RoleSeed::from_roles(kept);
}

}  // namespace fso::testing
