#include <doctest.h>

#include <map>

#include "fso/error.hpp"
#include "fso/seed.hpp"
#include "generators.hpp"

using fso::ErrorCode;
using fso::RoleSeed;

namespace {

ErrorCode parse_error(std::string_view text) {
  try {
    RoleSeed::parse(text);
  } catch (const fso::Error& e) {
    return e.code();
  }
  FAIL("no error for '" << text << "'");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("parse_seed reads the smaller figure seed") {
  const auto s = RoleSeed::parse("011123334");
  const std::map<fso::RoleId, std::uint32_t> expected{{0, 1}, {1, 3}, {2, 1}, {3, 3}, {4, 1}};
  CHECK(s.multiplicities() == expected);
  CHECK(s.size() == 9);
  CHECK(s.canonical_text() == "011123334");
}

TEST_CASE("parse_seed single role and reordering") {
  CHECK(RoleSeed::parse("0").multiplicities() == std::map<fso::RoleId, std::uint32_t>{{0, 1}});
  const auto s = RoleSeed::parse("3102");
  CHECK(s.canonical_text() == "0123");
  CHECK(s.multiplicities() == std::map<fso::RoleId, std::uint32_t>{{0, 1}, {1, 1}, {2, 1}, {3, 1}});
}

TEST_CASE("extended form") {
  const auto s = RoleSeed::parse("12,0,3,12");
  CHECK(s.canonical_text() == "0,3,12,12");
  CHECK(s.multiplicity(12) == 2);
  // All ids below ten collapse to the compact form.
  CHECK(RoleSeed::parse("2,1,0").canonical_text() == "012");
  CHECK(RoleSeed::parse("0,10") == RoleSeed::parse(RoleSeed::parse("10,0").canonical_text()));
  // A single large role keeps a trailing comma so it does not read as digits.
  const auto lone = RoleSeed::from_roles({12});
  CHECK(lone.canonical_text() == "12,");
  CHECK(RoleSeed::parse("12,") == lone);
  CHECK(RoleSeed::parse("7,") == RoleSeed::parse("7"));
  CHECK_THROWS_AS(RoleSeed::parse("1,2,"), fso::Error);
  CHECK_THROWS_AS(RoleSeed::parse(","), fso::Error);
}

TEST_CASE("parse_seed errors") {
  CHECK(parse_error("") == ErrorCode::EmptySeed);
  CHECK(parse_error("01a2") == ErrorCode::InvalidCharacter);
  CHECK(parse_error("0 1") == ErrorCode::InvalidCharacter);
  CHECK(parse_error("-1") == ErrorCode::InvalidCharacter);
  CHECK(parse_error("1,,2") == ErrorCode::InvalidCharacter);
  CHECK(parse_error("1,2,") == ErrorCode::InvalidCharacter);
  CHECK(parse_error("01,2") == ErrorCode::MixedForm);
  CHECK(parse_error("1,x") == ErrorCode::InvalidCharacter);
  CHECK(parse_error("1,99999999999") == ErrorCode::InvalidArgument);
}

TEST_CASE("is_subseed examples") {
  const auto a = RoleSeed::parse("011123334");
  const auto b = RoleSeed::parse("011112233334");
  CHECK(fso::is_subseed(a, b));
  CHECK_FALSE(fso::is_subseed(b, a));
  CHECK(fso::is_subseed(a, a));
  CHECK_FALSE(fso::is_subseed(RoleSeed::parse("05"), b));
}

TEST_CASE("canonical text round-trips") {
  fso::Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const auto s = fso::testing::random_seed(rng, 12, i % 2 ? 9 : 30);
    CHECK(RoleSeed::parse(s.canonical_text()) == s);
    std::uint32_t total = 0;
    for (const auto& [role, count] : s.multiplicities()) {
      CHECK(count >= 1);
      total += count;
    }
    CHECK(total == s.size());
  }
}

TEST_CASE("is_subseed is a partial order") {
  fso::Rng rng(12);
  for (int i = 0; i < 2000; ++i) {
    const auto a = fso::testing::random_seed(rng, 5, 2);
    const auto b = fso::testing::random_seed(rng, 5, 2);
    const auto c = fso::testing::random_seed(rng, 5, 2);
    CHECK(fso::is_subseed(a, a));
    if (fso::is_subseed(a, b) && fso::is_subseed(b, a)) CHECK(a == b);
    if (fso::is_subseed(a, b) && fso::is_subseed(b, c)) CHECK(fso::is_subseed(a, c));
  }
}

TEST_CASE("subsequence and multiset containment agree") {
  fso::Rng rng(13);
  int positives = 0;
  for (int i = 0; i < 3000; ++i) {
    const auto b = fso::testing::random_seed(rng, 10, 4);
    const auto a = rng.bernoulli(0.5) ? fso::testing::random_subseed(rng, b) : fso::testing::random_seed(rng, 6, 4);
    const bool multiset = fso::is_subseed(a, b);
    CHECK(multiset == fso::is_subsequence(a.roles(), b.roles()));
    positives += multiset;
  }
  CHECK(positives > 1000);
}
