#include <doctest.h>

#include <cmath>
#include <numbers>
#include <regex>
#include <set>
#include <string>

#include "fso/embedding.hpp"
#include "fso/error.hpp"

using fso::RoleSeed;
using fso::SonLattice;

namespace {

std::size_t occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

// Level-k Cantor construction: both endpoints of each of the 2^k intervals.
std::vector<double> cantor_endpoints(int level) {
  std::vector<std::pair<double, double>> intervals{{0.0, 1.0}};
  for (int k = 0; k < level; ++k) {
    std::vector<std::pair<double, double>> next;
    for (auto [a, b] : intervals) {
      const double third = (b - a) / 3.0;
      next.emplace_back(a, a + third);
      next.emplace_back(b - third, b);
    }
    intervals = next;
  }
  std::vector<double> xs;
  for (auto [a, b] : intervals) {
    xs.push_back(a);
    xs.push_back(b);
  }
  return xs;
}

// Occupied boxes by scanning every grid interval [i s, (i+1) s) on a line.
std::uint64_t brute_force_boxes(const std::vector<double>& xs, double s) {
  const double lo = *std::min_element(xs.begin(), xs.end());
  const double hi = *std::max_element(xs.begin(), xs.end());
  std::uint64_t occupied = 0;
  for (std::int64_t i = 0; lo + static_cast<double>(i) * s <= hi; ++i) {
    const double left = static_cast<double>(i) * s;
    const double right = static_cast<double>(i + 1) * s;
    for (double x : xs) {
      if (x - lo >= left && x - lo < right) {
        ++occupied;
        break;
      }
    }
  }
  return occupied;
}

}  // namespace

TEST_CASE("single role embedding") {
  const SonLattice l(RoleSeed::parse("0"));
  const auto e = fso::embed(l, 0.4);
  REQUIRE(e.size() == 2);
  CHECK(e.xs[0] == 0.0);
  CHECK(e.ys[0] == 0.0);
  CHECK(e.xs[1] == 1.0);
  CHECK(e.ys[1] == 0.0);
}

TEST_CASE("square with explicit right angle") {
  const SonLattice l(RoleSeed::parse("01"));
  const auto e = fso::embed(l, 0.4, fso::AngleRule::fixed({{0, 0.0}, {1, std::numbers::pi / 2}}));
  const double expected[4][2] = {{0, 0}, {1, 0}, {0, 0.4}, {1, 0.4}};
  for (std::size_t v = 0; v < 4; ++v) {
    CHECK(std::abs(e.xs[v] - expected[v][0]) < 1e-15);
    CHECK(std::abs(e.ys[v] - expected[v][1]) < 1e-15);
  }
}

TEST_CASE("angle rules") {
  const SonLattice l(RoleSeed::parse("013"));
  const auto spread = fso::embed(l, 0.3);
  CHECK(spread.angles.at(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
  const auto by_id = fso::embed(l, 0.3, fso::AngleRule::by_id());
  CHECK(by_id.angles.at(3) == doctest::Approx(3.0 * std::numbers::pi / 2.0));
  CHECK_THROWS_AS(fso::embed(l, 0.3, fso::AngleRule::fixed({{0, 0.0}})), fso::Error);
  CHECK_THROWS_AS(fso::embed(l, 1.0), fso::Error);
  CHECK_THROWS_AS(fso::embed(l, 0.0), fso::Error);
}

TEST_CASE("smaller figure seed gives distinct points") {
  const SonLattice l(RoleSeed::parse("011123334"));
  for (double scale : {fso::kDefaultScaleRatio, 0.2}) {
    const auto e = fso::embed(l, scale);
    std::size_t collisions = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (std::size_t j = i + 1; j < e.size(); ++j) {
        if (std::hypot(e.xs[i] - e.xs[j], e.ys[i] - e.ys[j]) < 1e-9) ++collisions;
      }
    }
    CHECK(collisions == 0);
  }
  CHECK(fso::embed(l, fso::kDefaultScaleRatio).degenerate_scale);
  CHECK_FALSE(fso::embed(l, 0.2).degenerate_scale);
}

TEST_CASE("embedding is deterministic") {
  const SonLattice l(RoleSeed::parse("011112233334"));
  const auto a = fso::embed(l);
  const auto b = fso::embed(l);
  CHECK(a.xs == b.xs);
  CHECK(a.ys == b.ys);
}

TEST_CASE("sub-development shares coordinates with its image") {
  const auto a = RoleSeed::parse("011123334");
  const auto b = RoleSeed::parse("011112233334");
  const SonLattice la(a), lb(b);
  const auto eb = fso::embed(lb);
  const auto ea = fso::embed(la, eb.scale_ratio, fso::AngleRule::fixed(eb.angles));
  const auto report = fso::verify_modularity(a, b);
  for (fso::NodeId u = 0; u < la.size(); ++u) {
    CHECK(ea.xs[u] == eb.xs[report.image[u]]);
    CHECK(ea.ys[u] == eb.ys[report.image[u]]);
  }
  // A seed missing a role reuses the super-seed directions only after remapping.
  const auto c = RoleSeed::parse("0134");
  const auto ec = fso::embed(SonLattice(c), eb.scale_ratio, fso::AngleRule::fixed(eb.angles));
  const auto rc = fso::verify_modularity(c, b);
  for (fso::NodeId u = 0; u < ec.size(); ++u) CHECK(ec.xs[u] == eb.xs[rc.image[u]]);
}

TEST_CASE("box counting of two points is flat") {
  const std::vector<double> xs{0.0, 1.0}, ys{0.0, 0.0}, scales{1.0, 0.5, 0.25};
  const auto d = fso::box_counting_dimension(xs, ys, scales);
  CHECK(d.counts == std::vector<std::uint64_t>{2, 2, 2});
  CHECK(d.slope == doctest::Approx(0.0));
  CHECK(d.residual == doctest::Approx(0.0));
}

TEST_CASE("box counting of the Cantor set") {
  const auto xs = cantor_endpoints(6);
  REQUIRE(xs.size() == 128);
  const std::vector<double> ys(xs.size(), 0.0);
  const auto scales = fso::geometric_scales(0.5, 0.5, 8);
  const auto d = fso::box_counting_dimension(xs, ys, scales);
  for (std::size_t i = 0; i < scales.size(); ++i) CHECK(d.counts[i] == brute_force_boxes(xs, scales[i]));
  CHECK(std::abs(d.slope - std::log(2.0) / std::log(3.0)) < 0.1);
}

TEST_CASE("box counting preconditions") {
  const std::vector<double> xs{0.0, 1.0}, ys{0.0, 1.0};
  const std::vector<double> two{1.0, 0.5};
  const std::vector<double> rising{0.25, 0.5, 1.0};
  const std::vector<double> good{1.0, 0.5, 0.25};
  CHECK_THROWS_AS(fso::box_counting_dimension(xs, ys, two), fso::Error);
  CHECK_THROWS_AS(fso::box_counting_dimension(xs, ys, rising), fso::Error);
  const std::vector<double> same{0.3, 0.3};
  try {
    fso::box_counting_dimension(same, same, good);
    FAIL("expected DegenerateGeometry");
  } catch (const fso::Error& e) {
    CHECK(e.code() == fso::ErrorCode::DegenerateGeometry);
  }
}

TEST_CASE("figure seed dimension baselines") {
  // Regression baselines for the default embedding and eight halving scales.
  const SonLattice big(RoleSeed::parse("011112233334"));
  const SonLattice small(RoleSeed::parse("011123334"));
  const auto eb = fso::embed(big);
  const auto es = fso::embed(small);
  const auto db = fso::box_counting_dimension(eb, fso::default_scales(eb));
  const auto ds = fso::box_counting_dimension(es, fso::default_scales(es));
  CHECK(db.counts == std::vector<std::uint64_t>{5, 16, 43, 102, 162, 244, 300, 300});
  CHECK(ds.counts == std::vector<std::uint64_t>{5, 13, 23, 45, 78, 107, 128, 128});
  CHECK(db.slope == doctest::Approx(0.8413472622766015).epsilon(1e-12));
  CHECK(ds.slope == doctest::Approx(0.67489963046009482).epsilon(1e-12));
  CHECK(db.residual == doctest::Approx(0.4558609662069385).epsilon(1e-12));
  CHECK(ds.residual == doctest::Approx(0.32048537584491144).epsilon(1e-12));
  const auto again = fso::box_counting_dimension(eb, fso::default_scales(eb));
  CHECK(again.slope == db.slope);
  CHECK(again.counts == db.counts);
}

TEST_CASE("svg of the square") {
  const SonLattice l(RoleSeed::parse("01"));
  const auto e = fso::embed(l);
  const auto svg = fso::render_svg(l, e);
  CHECK(occurrences(svg, "<circle") == 4);
  CHECK(occurrences(svg, "<line") == 4);
  CHECK(svg == fso::render_svg(l, fso::embed(l)));

  fso::RenderOptions bare;
  bare.draw_edges = false;
  CHECK(occurrences(fso::render_svg(l, e, bare), "<line") == 0);
}

TEST_CASE("svg highlight places sub-development markers on their images") {
  const auto a = RoleSeed::parse("011123334");
  const auto b = RoleSeed::parse("011112233334");
  const SonLattice lb(b);
  const auto eb = fso::embed(lb);
  fso::RenderOptions opt;
  opt.highlight = fso::verify_modularity(a, b).image;
  const auto svg = fso::render_svg(lb, eb, opt);
  CHECK(occurrences(svg, "<circle") == 300 + 128);

  // Every highlighted marker repeats the centre of a plain marker.
  const std::regex circle("<circle cx=\"([0-9.\\-]+)\" cy=\"([0-9.\\-]+)\" r=\"([0-9.]+)\"");
  std::set<std::pair<std::string, std::string>> plain;
  std::size_t highlighted = 0, matched = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), circle); it != std::sregex_iterator(); ++it) {
    const auto key = std::pair((*it)[1].str(), (*it)[2].str());
    if ((*it)[3].str() == "2.000") {
      plain.insert(key);
    } else {
      ++highlighted;
      matched += plain.count(key);
    }
  }
  CHECK(highlighted == 128);
  CHECK(matched == 128);
}
