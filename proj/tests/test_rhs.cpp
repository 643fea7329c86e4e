#include "manufactured.hpp"

#include <helmfd/consistency.hpp>

#include <gtest/gtest.h>

#include <cstdio>

using namespace helmfd;
using testutil::ExpField;

namespace {

Real max_diff(const RhsWeightTable& a, const RhsWeightTable& b) {
  Real d = 0;
  for (std::size_t q = 0; q < a.f_index.size(); ++q)
    d = std::max(d, std::abs(a.f_weights[q] - b.f_weights[static_cast<std::size_t>(b.f_index.position(a.f_index[q]))]) /
                        std::max(1.0, std::abs(a.f_weights[q])));
  for (int s = 0; s < 4; ++s) {
    EXPECT_EQ(a.g_weights[s].size(), b.g_weights[s].size()) << s;
    for (std::size_t n = 0; n < std::min(a.g_weights[s].size(), b.g_weights[s].size()); ++n)
      d = std::max(d, std::abs(a.g_weights[s][n] - b.g_weights[s][n]) / std::max(1.0, std::abs(a.g_weights[s][n])));
  }
  return d;
}

} // namespace

TEST(SideRhs, ExplicitTablesMatchTheTaylorEngine) {
  const Real k = 37.0, h = 1.0 / 64;
  for (auto b : {BoundaryKind::Impedance, BoundaryKind::Neumann})
    for (auto s : check::kSides) {
      const auto lit = boundary_rhs(s, b, k, h);
      const auto pts = side_local_points(side_polys(b), k * h);
      const auto eng = engine_rhs(pts, side_frame(s), edge_bc(b), EdgeBc::Free, std::nullopt, k, h);
      EXPECT_LT(max_diff(lit, eng), 1e-11) << to_string(s);
    }
}

TEST(CornerRhs, RecombinationMatchesTheTaylorEngine) {
  const Real k = 23.0, h = 1.0 / 32;
  for (auto c : check::kCorners)
    for (auto [v, hz] : {std::pair{BoundaryKind::Impedance, BoundaryKind::Neumann},
                         std::pair{BoundaryKind::Neumann, BoundaryKind::Impedance},
                         std::pair{BoundaryKind::Impedance, BoundaryKind::Impedance}}) {
      const auto spec = corner_spec(c, v, hz);
      const auto lit = corner_rhs(spec, k, h);
      const auto eng = engine_rhs(corner_local_points(spec.polys, k * h), spec.frame, spec.bx, spec.by,
                                  frame_y_side(spec.frame), k, h);
      EXPECT_LT(max_diff(lit, eng), 1e-11) << to_string(c);
    }
}

TEST(StencilOrder, InteriorSlope) {
  const auto r = check::interior_slope();
  EXPECT_GE(r.slope, r.threshold);
}

TEST(StencilOrder, SideSlopes) {
  for (auto b : {BoundaryKind::Impedance, BoundaryKind::Neumann})
    for (auto s : check::kSides) {
      const auto r = check::side_slope(s, b);
      EXPECT_GE(r.slope, r.threshold) << r.name;
    }
}

TEST(StencilOrder, CornerSlopes) {
  for (auto c : check::kCorners)
    for (auto [v, hz] : {std::pair{BoundaryKind::Impedance, BoundaryKind::Neumann},
                         std::pair{BoundaryKind::Neumann, BoundaryKind::Impedance},
                         std::pair{BoundaryKind::Impedance, BoundaryKind::Impedance}}) {
      const auto r = check::corner_slope(c, v, hz);
      EXPECT_GE(r.slope, r.threshold) << r.name;
    }
}
