#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fso {

using RoleId = std::uint32_t;

/// Canonical multiset of role identifiers: the "seed" of an organization.
///
/// Two textual forms are accepted. The compact form is a run of decimal
/// digits, one role per digit ("011123334"). The extended form is a
/// comma-separated list of nonnegative integers ("0,1,1,12") and is needed
/// for role identifiers above 9. The canonical text uses the compact form
/// whenever every role fits in a single digit.
class RoleSeed {
 public:
  static RoleSeed parse(std::string_view text);
  static RoleSeed from_roles(std::vector<RoleId> roles);

  /// Roles in nondecreasing order, one entry per occurrence.
  const std::vector<RoleId>& roles() const noexcept { return roles_; }
  const std::map<RoleId, std::uint32_t>& multiplicities() const noexcept { return mult_; }
  std::uint32_t multiplicity(RoleId role) const noexcept;
  std::vector<RoleId> distinct_roles() const;
  std::uint32_t max_multiplicity() const noexcept;
  std::size_t size() const noexcept { return roles_.size(); }

  /// Compact digits when every role is at most 9, otherwise comma-separated;
  /// a single role above 9 gets a trailing comma ("12,").
  std::string canonical_text() const;

  friend bool operator==(const RoleSeed& a, const RoleSeed& b) { return a.roles_ == b.roles_; }

 private:
  explicit RoleSeed(std::vector<RoleId> sorted_roles);

  std::vector<RoleId> roles_;
  std::map<RoleId, std::uint32_t> mult_;
};

/// Multiset containment: every role of `a` occurs in `b` at least as often.
bool is_subseed(const RoleSeed& a, const RoleSeed& b);

/// Subsequence test on sorted role lists. For canonical seeds this agrees
/// with is_subseed; it is kept as a second, independent route.
bool is_subsequence(std::span<const RoleId> a, std::span<const RoleId> b);

}  // namespace fso
