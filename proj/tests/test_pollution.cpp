#include "manufactured.hpp"

#include <helmfd/pollution.hpp>

#include <gtest/gtest.h>

#include <numbers>

using namespace helmfd;

namespace {

// The fits are deterministic; compute each once per test binary.
const InteriorFit& interior_fit() {
  static const InteriorFit f = fit_interior_params();
  return f;
}

} // namespace

TEST(Quadrature, IntegratesLowFrequencyCosines) {
  const AngularQuadrature Q(900);
  for (int m = 0; m <= 50; ++m) {
    Real s = 0;
    for (std::size_t i = 0; i < Q.size(); ++i) s += Q.weight[i] * std::cos(m * Q.theta[i]);
    EXPECT_NEAR(s, m == 0 ? 2 * std::numbers::pi : 0.0, 1e-12) << m;
  }
  EXPECT_THROW(AngularQuadrature(100), ConfigError);
}

TEST(Rounding, DyadicRoundingIsIdempotent) {
  for (Real x : {0.1234567, -3.0e-4, 1212.0 / (1 << 20), 7.7e-7}) {
    const Real r = round_dyadic(x);
    EXPECT_EQ(round_dyadic(r), r);
    EXPECT_LE(std::abs(r - x), std::ldexp(0.5, -20));
  }
}

TEST(InteriorPollution, TruncationOfBareCenterPoint) {
  EXPECT_NEAR(interior_truncation(0, 0, 0.5), 400 * 2 * std::numbers::pi, 1e-9);
}

TEST(InteriorPollution, PerSampleMinimizerBeatsNeighbours) {
  const Real kh = 0.7;
  const auto [a, b] = minimize_interior(kh);
  const Real best = interior_truncation(a, b, kh);
  for (Real d : {1e-3, -1e-3}) {
    EXPECT_LT(best, interior_truncation(a + d, b, kh));
    EXPECT_LT(best, interior_truncation(a, b + d, kh));
  }
}

TEST(InteriorPollution, FitKeepsHighDegreeParametersZero) {
  const auto& f = interior_fit();
  EXPECT_EQ(f.params[8], 0.0);
  EXPECT_EQ(f.params[9], 0.0);
  EXPECT_EQ(f.params[10], 0.0);
  for (int j = 0; j < 8; ++j) EXPECT_EQ(round_dyadic(f.params[j]), f.params[j]);
}

TEST(InteriorPollution, FittedObjectiveWithinFallbackBound) {
  const auto& f = interior_fit();
  EXPECT_LT(f.objective_fitted, f.objective_zero);
  EXPECT_LE(f.objective_fitted, 1.05 * f.objective_published);
}

TEST(InteriorPollution, FittedStencilIsConsistent) {
  const auto P = interior_family(interior_fit().params);
  EXPECT_LT(consistency_defect(interior_consistency_spec(), {P.c11, P.c10, P.c00}), 1e-12);
}

TEST(InteriorPollution, FittedStencilSlope) {
  const auto r = check::interior_family_slope(interior_fit().params);
  EXPECT_TRUE(r.pass()) << r.slope;
}

TEST(BoundaryPollution, GrazingPlaneWaveStaysFinite) {
  // Six nodes include theta = pi.
  const AngularQuadrature Q(6);
  const auto pts = side_points();
  const auto R = local_residuals(pts, EdgeBc::Impedance, EdgeBc::Free, 0.8, Q);
  for (const auto& row : R.r)
    for (const auto& v : row) EXPECT_TRUE(std::isfinite(v.real()) && std::isfinite(v.imag()));
  const Real t = local_truncation(pts, {1.0, 2.0, 4.0, -10.0}, EdgeBc::Impedance, EdgeBc::Free, 0.8, Q);
  EXPECT_TRUE(std::isfinite(t));
}

TEST(BoundaryPollution, ImpedanceSideFit) {
  const auto s = fit_impedance_side_params();
  EXPECT_LE(s.objective_fitted, 1.05 * s.objective_published);
  const auto P = impedance_side_family(s.params);
  EXPECT_LT(consistency_defect(side_consistency_spec(EdgeBc::Impedance, 6), {P.c11, P.c01, P.c10, P.c00}), 1e-12);
}

TEST(BoundaryPollution, DerivedCornersAreConsistentAndCompetitive) {
  const AngularQuadrature Q(900);
  const auto S = fitting_samples();
  {
    const auto c = derive_corner(EdgeBc::Impedance, EdgeBc::Neumann, 6, false);
    const auto& P = c.polys;
    EXPECT_LT(consistency_defect(corner_consistency_spec(EdgeBc::Impedance, EdgeBc::Neumann, 6, false),
                                 {P.c11, P.c01, P.c10, P.c00}),
              1e-12);
    EXPECT_LE(c.objective_fitted,
              1.05 * corner_objective(corner_impedance_neumann(), EdgeBc::Impedance, EdgeBc::Neumann, S, Q));
  }
  {
    const auto c = derive_corner(EdgeBc::Impedance, EdgeBc::Impedance, 7, true);
    const auto& P = c.polys;
    EXPECT_LT(consistency_defect(corner_consistency_spec(EdgeBc::Impedance, EdgeBc::Impedance, 7, true),
                                 {P.c11, P.c01, P.c00}),
              1e-12);
    EXPECT_LE(c.objective_fitted,
              1.05 * corner_objective(corner_impedance_impedance(), EdgeBc::Impedance, EdgeBc::Impedance, S, Q));
  }
}

TEST(BoundaryPollution, NeumannNeumannCornerThroughHook) {
  install_corner_deriver();
  const auto spec = corner_spec(Corner::BottomLeft, BoundaryKind::Neumann, BoundaryKind::Neumann);
  const auto& P = spec.polys;
  EXPECT_LT(consistency_defect(corner_consistency_spec(EdgeBc::Neumann, EdgeBc::Neumann, 7, true), {P.c11, P.c01, P.c00}),
            1e-12);
  const auto lit = corner_rhs(spec, 23.0, 1.0 / 32);
  EXPECT_FALSE(lit.f_weights.empty());
}
