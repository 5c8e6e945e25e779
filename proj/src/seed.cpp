#include "fso/seed.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "fso/error.hpp"

namespace fso {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

RoleId parse_extended_token(std::string_view token) {
  if (token.empty()) throw Error(ErrorCode::InvalidCharacter, "empty role in comma-separated seed");
  for (char c : token) {
    if (!is_digit(c)) {
      throw Error(ErrorCode::InvalidCharacter, "non-digit '" + std::string(1, c) + "' in seed");
    }
  }
  // "01" inside a comma list reads like a compact run; refuse to guess.
  if (token.size() > 1 && token.front() == '0') {
    throw Error(ErrorCode::MixedForm, "token '" + std::string(token) + "' mixes compact and extended forms");
  }
  RoleId value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::InvalidArgument, "role identifier '" + std::string(token) + "' out of range");
  }
  return value;
}

}  // namespace

RoleSeed::RoleSeed(std::vector<RoleId> sorted_roles) : roles_(std::move(sorted_roles)) {
  for (RoleId r : roles_) ++mult_[r];
}

RoleSeed RoleSeed::parse(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::EmptySeed, "seed text is empty");

  std::vector<RoleId> roles;
  if (text.find(',') != std::string_view::npos) {
    // A lone trailing comma marks a one-role extended seed such as "12,".
    if (text.back() == ',' && text.find(',') == text.size() - 1) text.remove_suffix(1);
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = text.find(',', start);
      const std::string_view token =
          text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      roles.push_back(parse_extended_token(token));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  } else {
    roles.reserve(text.size());
    for (char c : text) {
      if (!is_digit(c)) {
        throw Error(ErrorCode::InvalidCharacter, "non-digit '" + std::string(1, c) + "' in compact seed");
      }
      roles.push_back(static_cast<RoleId>(c - '0'));
    }
  }
  return from_roles(std::move(roles));
}

RoleSeed RoleSeed::from_roles(std::vector<RoleId> roles) {
  if (roles.empty()) throw Error(ErrorCode::EmptySeed, "seed has no roles");
  std::sort(roles.begin(), roles.end());
  return RoleSeed(std::move(roles));
}

std::uint32_t RoleSeed::multiplicity(RoleId role) const noexcept {
  auto it = mult_.find(role);
  return it == mult_.end() ? 0 : it->second;
}

std::vector<RoleId> RoleSeed::distinct_roles() const {
  std::vector<RoleId> out;
  out.reserve(mult_.size());
  for (const auto& [role, count] : mult_) out.push_back(role);
  return out;
}

std::uint32_t RoleSeed::max_multiplicity() const noexcept {
  std::uint32_t best = 0;
  for (const auto& [role, count] : mult_) best = std::max(best, count);
  return best;
}

std::string RoleSeed::canonical_text() const {
  const bool compact = roles_.back() <= 9;
  std::string out;
  for (std::size_t i = 0; i < roles_.size(); ++i) {
    if (compact) {
      out.push_back(static_cast<char>('0' + roles_[i]));
    } else {
      if (i) out.push_back(',');
      out += std::to_string(roles_[i]);
    }
  }
  if (!compact && roles_.size() == 1) out.push_back(',');
  return out;
}

bool is_subseed(const RoleSeed& a, const RoleSeed& b) {
  for (const auto& [role, count] : a.multiplicities()) {
    if (count > b.multiplicity(role)) return false;
  }
  return true;
}

bool is_subsequence(std::span<const RoleId> a, std::span<const RoleId> b) {
  std::size_t j = 0;
  for (RoleId r : a) {
    while (j < b.size() && b[j] != r) ++j;
    if (j == b.size()) return false;
    ++j;
  }
  return true;
}

}  // namespace fso
