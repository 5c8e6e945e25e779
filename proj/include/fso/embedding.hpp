#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fso/lattice.hpp"

namespace fso {

inline constexpr double kDefaultScaleRatio = 0.35;

/// How role directions are laid out in the plane.
struct AngleRule {
  enum class Kind {
    Spread,    ///< k-th distinct role (k = 0..R-1) at 2*pi*k/R
    ById,      ///< role r at 2*pi*r/(max_role + 1)
    Explicit,  ///< angles given per role id
  };
  Kind kind = Kind::Spread;
  std::map<RoleId, double> angles;

  static AngleRule spread() { return {}; }
  static AngleRule by_id() { return {Kind::ById, {}}; }
  static AngleRule fixed(std::map<RoleId, double> angles) { return {Kind::Explicit, std::move(angles)}; }
};

/// Planar positions of all nodes of a lattice. A node with counts c sits at
///   sum over roles r of c[r] * scale_ratio^id(r) * (cos theta_r, sin theta_r)
/// so each role contributes a geometrically shrinking copy of the rest.
struct Embedding {
  std::vector<double> xs;
  std::vector<double> ys;
  double scale_ratio = kDefaultScaleRatio;
  std::map<RoleId, double> angles;
  /// Set when scale_ratio >= 1/(max multiplicity + 1): positions may collide.
  bool degenerate_scale = false;

  std::size_t size() const noexcept { return xs.size(); }
};

/// Throws InvalidArgument unless 0 < scale_ratio < 1 and every role has an
/// angle under an explicit rule.
Embedding embed(const SonLattice& lattice, double scale_ratio = kDefaultScaleRatio,
                const AngleRule& rule = AngleRule::spread());

struct DimensionEstimate {
  std::vector<double> scales;
  std::vector<std::uint64_t> counts;
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual of the log-log fit.
  double residual = 0.0;
};

/// Box-counting dimension: occupied cells N(s) of a grid anchored at the
/// lower-left corner of the bounding box, for each box size s, then the
/// least-squares slope of log N(s) against log(1/s).
///
/// Requires at least three strictly decreasing positive scales and two
/// distinct points; all points coincident raises DegenerateGeometry.
DimensionEstimate box_counting_dimension(std::span<const double> xs, std::span<const double> ys,
                                         std::span<const double> scales);

inline DimensionEstimate box_counting_dimension(const Embedding& e, std::span<const double> scales) {
  return box_counting_dimension(e.xs, e.ys, scales);
}

/// Geometric box sizes first, first*ratio, ... (count values).
std::vector<double> geometric_scales(double first, double ratio, std::size_t count);

/// Box sizes halving from the larger bounding-box side, the default sequence.
std::vector<double> default_scales(const Embedding& e, std::size_t count = 8);

struct RenderOptions {
  double canvas = 800.0;
  double margin = 20.0;
  double marker_radius = 2.0;
  bool draw_edges = true;
  /// Nodes drawn with the highlight style, e.g. the image of a sub-seed.
  std::vector<NodeId> highlight;
};

/// Deterministic SVG document: optional Hasse edges as lines, then one
/// circle per node in node order, then highlighted markers on top.
std::string render_svg(const SonLattice& lattice, const Embedding& embedding,
                       const RenderOptions& options = {});

}  // namespace fso
