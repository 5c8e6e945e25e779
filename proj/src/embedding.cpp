#include "fso/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fso/error.hpp"
#include "fso/simd/kernels.hpp"

namespace fso {

Embedding embed(const SonLattice& lattice, double scale_ratio, const AngleRule& rule) {
  if (!(scale_ratio > 0.0 && scale_ratio < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "scale ratio must lie in (0, 1), got " + std::to_string(scale_ratio));
  }
  const auto& roles = lattice.roles();
  Embedding e;
  e.scale_ratio = scale_ratio;
  e.degenerate_scale = scale_ratio >= 1.0 / (lattice.seed().max_multiplicity() + 1.0);

  for (std::size_t k = 0; k < roles.size(); ++k) {
    double theta = 0.0;
    switch (rule.kind) {
      case AngleRule::Kind::Spread:
        theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(roles.size());
        break;
      case AngleRule::Kind::ById:
        theta = 2.0 * std::numbers::pi * static_cast<double>(roles[k]) / (static_cast<double>(roles.back()) + 1.0);
        break;
      case AngleRule::Kind::Explicit: {
        auto it = rule.angles.find(roles[k]);
        if (it == rule.angles.end()) {
          throw Error(ErrorCode::InvalidArgument, "no angle given for role " + std::to_string(roles[k]));
        }
        theta = it->second;
        break;
      }
    }
    e.angles[roles[k]] = theta;
  }

  const std::size_t n = lattice.size();
  e.xs.assign(n, 0.0);
  e.ys.assign(n, 0.0);
  std::vector<double> column(n);
  const auto& kernels = simd::active();
  for (std::size_t k = 0; k < roles.size(); ++k) {
    // Repeated multiplication keeps scale^id reproducible without libm pow.
    double length = 1.0;
    for (RoleId i = 0; i < roles[k]; ++i) length *= scale_ratio;
    const double theta = e.angles[roles[k]];
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    for (std::size_t node = 0; node < n; ++node) column[node] = lattice.count(static_cast<NodeId>(node), k);
    kernels.accumulate_direction(column.data(), length * c, length * s, e.xs.data(), e.ys.data(), n);
  }
  return e;
}

std::vector<double> geometric_scales(double first, double ratio, std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  double s = first;
  for (std::size_t i = 0; i < count; ++i, s *= ratio) out.push_back(s);
  return out;
}

std::vector<double> default_scales(const Embedding& e, std::size_t count) {
  const auto [xmin, xmax] = std::minmax_element(e.xs.begin(), e.xs.end());
  const auto [ymin, ymax] = std::minmax_element(e.ys.begin(), e.ys.end());
  const double side = std::max(*xmax - *xmin, *ymax - *ymin);
  return geometric_scales(side > 0.0 ? side / 2.0 : 1.0, 0.5, count);
}

DimensionEstimate box_counting_dimension(std::span<const double> xs, std::span<const double> ys,
                                         std::span<const double> scales) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::InvalidArgument, "coordinate arrays differ in length");
  if (scales.size() < 3) throw Error(ErrorCode::InvalidArgument, "box counting needs at least three scales");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0) || (i > 0 && !(scales[i] < scales[i - 1]))) {
      throw Error(ErrorCode::InvalidArgument, "scales must be positive and strictly decreasing");
    }
  }
  if (xs.empty()) throw Error(ErrorCode::DegenerateGeometry, "no points");
  const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
  if (*xmin == *xmax && *ymin == *ymax) {
    throw Error(ErrorCode::DegenerateGeometry, "all points coincide");
  }

  const std::size_t n = xs.size();
  const auto& kernels = simd::active();
  std::vector<double> cx(n), cy(n);
  std::vector<std::pair<std::int64_t, std::int64_t>> cells(n);

  DimensionEstimate est;
  est.scales.assign(scales.begin(), scales.end());
  for (double s : scales) {
    kernels.floor_cells(xs.data(), *xmin, s, cx.data(), n);
    kernels.floor_cells(ys.data(), *ymin, s, cy.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      cells[i] = {static_cast<std::int64_t>(cx[i]), static_cast<std::int64_t>(cy[i])};
    }
    std::sort(cells.begin(), cells.end());
    est.counts.push_back(static_cast<std::uint64_t>(std::unique(cells.begin(), cells.end()) - cells.begin()));
  }

  const std::size_t m = scales.size();
  double mean_x = 0.0, mean_y = 0.0;
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    lx[i] = std::log(1.0 / scales[i]);
    ly[i] = std::log(static_cast<double>(est.counts[i]));
    mean_x += lx[i];
    mean_y += ly[i];
  }
  mean_x /= static_cast<double>(m);
  mean_y /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mean_x) * (lx[i] - mean_x);
    sxy += (lx[i] - mean_x) * (ly[i] - mean_y);
  }
  est.slope = sxy / sxx;
  est.intercept = mean_y - est.slope * mean_x;
  double sse = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ly[i] - (est.intercept + est.slope * lx[i]);
    sse += r * r;
  }
  est.residual = std::sqrt(sse / static_cast<double>(m));
  return est;
}

}  // namespace fso
