#include <helmfd/fields.hpp>
#include <helmfd/interface.hpp>

#include <gtest/gtest.h>

#include <numbers>

using namespace helmfd;

namespace {

// psi scaled by a positive factor; same zero set and sign pattern.
class ScaledCurve : public InterfaceCurve {
public:
  ScaledCurve(std::shared_ptr<InterfaceCurve> c, Real s) : c_(std::move(c)), s_(s) {}
  Real psi(Real x, Real y) const override { return s_ * c_->psi(x, y); }
  CurveJet jet(Real t, int order) const override { return c_->jet(t, order); }
  std::string name() const override { return "scaled"; }

private:
  std::shared_ptr<InterfaceCurve> c_;
  Real s_;
};

struct Setup {
  std::string curve;
  Real l1, l2;
};

const std::vector<Setup> kCatalog{{"five-star", -0.5, 0.5}, {"eight-star", -0.5, 0.5}, {"ellipse", -1.5, 1.5},
                                  {"circle", -0.5, 0.5}};

} // namespace

TEST(Curves, JetsMatchFiniteDifferences) {
  for (const auto& s : kCatalog) {
    const auto C = make_curve(s.curve);
    const Real t = 0.83, d = 1e-5;
    const auto J = C->jet(t, 3);
    const auto p = C->point(t + d), m = C->point(t - d);
    EXPECT_NEAR(J.r[1], (p[0] - m[0]) / (2 * d), 1e-8) << s.curve;
    EXPECT_NEAR(J.s[1], (p[1] - m[1]) / (2 * d), 1e-8) << s.curve;
    const auto c = C->point(t);
    EXPECT_NEAR(2 * J.r[2], (p[0] - 2 * c[0] + m[0]) / (d * d), 1e-4) << s.curve;
    EXPECT_NEAR(C->psi(c[0], c[1]), 0.0, 1e-14) << s.curve;
  }
  EXPECT_THROW(make_curve("square"), ConfigError);
}

TEST(Classification, CircleExamples) {
  const StarCurve circle(0.3, 0.0, 1, "circle");
  const Grid G = square_grid(-0.5, 0.5, 3); // h = 1/8
  const auto C = classify(G, &circle);
  EXPECT_EQ(C.kind[static_cast<std::size_t>(G.index(4, 4))], PointKind::RegularInterior);
  EXPECT_EQ(C.side[static_cast<std::size_t>(G.index(4, 4))], -1);
  const int id = G.index(6, 5); // (0.25, 0.125)
  ASSERT_EQ(C.kind[static_cast<std::size_t>(id)], PointKind::Irregular);
  const auto& ip = C.irregular[static_cast<std::size_t>(C.irregular_index[static_cast<std::size_t>(id)])];
  int np = 0;
  for (bool b : ip.plus) np += b;
  EXPECT_GT(np, 0);
  EXPECT_LT(np, 9);
  EXPECT_EQ(C.kind[static_cast<std::size_t>(G.index(0, 0))], PointKind::Corner);
  EXPECT_EQ(C.kind[static_cast<std::size_t>(G.index(0, 3))], PointKind::RegularBoundary);
}

TEST(Classification, NoInterfaceIsAllRegular) {
  const Grid G = square_grid(0, 1, 4);
  const auto C = classify(G, nullptr);
  EXPECT_TRUE(C.irregular.empty());
  for (int j = 1; j < G.ny; ++j)
    for (int i = 1; i < G.nx; ++i) EXPECT_EQ(C.kind[static_cast<std::size_t>(G.index(i, j))], PointKind::RegularInterior);
}

TEST(Classification, InvariantUnderPositiveScalingOfPsi) {
  const auto star = make_curve("five-star");
  const ScaledCurve scaled(star, 17.5);
  const Grid G = square_grid(-0.5, 0.5, 6);
  const auto a = classify(G, star.get()), b = classify(G, &scaled);
  EXPECT_EQ(a.kind, b.kind);
  EXPECT_EQ(a.side, b.side);
}

TEST(Classification, InterfaceThroughBoundaryStencilIsUnsupported) {
  const StarCurve big(0.49, 0.0, 1, "big");
  EXPECT_THROW(classify(square_grid(-0.5, 0.5, 4), &big), UnsupportedError);
  // Eliminated Dirichlet sides have no stencil to straddle.
  EXPECT_NO_THROW(classify(square_grid(-0.5, 0.5, 4), &big, {true, true, true, true}));
}

TEST(Projection, CircleIsRadial) {
  const StarCurve circle(0.3, 0.0, 1, "circle");
  const Grid G = square_grid(-0.5, 0.5, 4); // h = 1/16
  const auto b = project(circle, G, 12, 12);  // (0.25, 0.25)
  EXPECT_NEAR(b.x_star, 0.3 / std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(b.y_star, 0.3 / std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(b.v0, (0.25 - 0.3 / std::sqrt(2.0)) * 16, 1e-11);
}

TEST(Projection, PointOnCurveMapsToItself) {
  const StarCurve circle(0.25, 0.0, 1, "circle");
  const Grid G = square_grid(-0.5, 0.5, 3); // x_6 = 0.25
  const auto b = project(circle, G, 6, 4);
  EXPECT_NEAR(b.x_star, 0.25, 1e-14);
  EXPECT_NEAR(b.y_star, 0.0, 1e-14);
  EXPECT_NEAR(b.v0, 0.0, 1e-12);
  EXPECT_NEAR(b.w0, 0.0, 1e-12);
}

TEST(Projection, FiveStarResidual) {
  const auto C = make_curve("five-star");
  const Real t = project_point(*C, 0.25, 0.0);
  const auto p = C->point(t);
  EXPECT_LE(std::abs(C->psi(p[0], p[1])), 1e-12);
  const auto J = C->jet(t, 1);
  EXPECT_LE(std::abs((0.25 - p[0]) * J.r[1] + (0.0 - p[1]) * J.s[1]), 1e-12 * (J.r[1] * J.r[1] + J.s[1] * J.s[1]));
}

TEST(Projection, AllCatalogCurvesStayInCell) {
  for (const auto& s : kCatalog) {
    const auto C = make_curve(s.curve);
    const Grid G = square_grid(s.l1, s.l2, s.curve == "ellipse" ? 8 : 6);
    const auto cls = classify(G, C.get());
    ASSERT_FALSE(cls.irregular.empty());
    for (const auto& ip : cls.irregular) {
      const auto b = project(*C, G, ip.i, ip.j);
      EXPECT_LT(std::abs(b.v0), 1.0);
      EXPECT_LT(std::abs(b.w0), 1.0);
      EXPECT_LE(std::abs(C->psi(b.x_star, b.y_star)), 1e-12);
      if (!b.orthogonal) continue;
      const auto J = C->jet(b.t_star, 1);
      const Real speed2 = J.r[1] * J.r[1] + J.s[1] * J.s[1];
      const Real F = (G.x(ip.i) - J.r[0]) * J.r[1] + (G.y(ip.j) - J.s[0]) * J.s[1];
      EXPECT_LE(std::abs(F), 1e-12 * speed2) << s.curve;
    }
  }
}

TEST(Projection, NormalPointsIntoOmegaPlus) {
  for (const auto& s : kCatalog) {
    const auto C = make_curve(s.curve);
    for (Real t : {0.1, 1.3, 2.9, 4.4}) EXPECT_EQ(normal_sign(*C, t, 1e-4), 1.0) << s.curve;
  }
}

TEST(JumpData, ConstantsAndArcLength) {
  const StarCurve circle(0.3, 0.0, 1, "circle");
  const auto jd = jump_coefficients(constant_param(2.5), constant_param(-4.0), circle, 1.1, 7);
  ASSERT_EQ(jd.g.size(), 8u);
  ASSERT_EQ(jd.gGamma.size(), 7u);
  EXPECT_NEAR(std::abs(jd.g[0] - 2.5), 0, 1e-15);
  EXPECT_NEAR(std::abs(jd.gGamma[0] + 4.0 * 0.3), 0, 1e-14);
  for (int p = 1; p < 7; ++p) {
    EXPECT_NEAR(std::abs(jd.g[static_cast<std::size_t>(p)]), 0, 1e-15);
    EXPECT_NEAR(std::abs(jd.gGamma[static_cast<std::size_t>(p)]), 0, 1e-13);
  }
  const auto star = make_curve("eight-star");
  const auto z = jump_coefficients(constant_param(-3.0), constant_param(0.0), *star, 0.4, 7);
  EXPECT_EQ(z.g[0], Complex(-3.0));
  for (const auto& v : z.gGamma) EXPECT_EQ(v, Complex(0));
}

TEST(Tangential, LowOrderChainRule) {
  const auto C = make_curve("ellipse");
  const auto J = C->jet(0.6, 4);
  const Real r1 = J.r[1], s1 = J.s[1], r2 = 2 * J.r[2], s2 = 2 * J.s[2];
  const auto p0 = tangential_functional(J, 0);
  ASSERT_EQ(p0.size(), 1u);
  EXPECT_EQ(p0[0], 1.0);
  const auto p1 = tangential_functional(J, 1);
  const auto L1 = lambda_set(1);
  EXPECT_NEAR(p1[static_cast<std::size_t>(L1.position({1, 0}))], r1, 1e-15);
  EXPECT_NEAR(p1[static_cast<std::size_t>(L1.position({0, 1}))], s1, 1e-15);
  EXPECT_EQ(p1[static_cast<std::size_t>(L1.position({0, 0}))], 0.0);
  const auto p2 = tangential_functional(J, 2);
  const auto L2 = lambda_set(2);
  auto at = [&](int m, int n) { return p2[static_cast<std::size_t>(L2.position({m, n}))]; };
  EXPECT_NEAR(at(1, 0), r2, 1e-14);
  EXPECT_NEAR(at(0, 1), s2, 1e-14);
  EXPECT_NEAR(at(2, 0), r1 * r1, 1e-14);
  EXPECT_NEAR(at(1, 1), 2 * r1 * s1, 1e-14);
  EXPECT_NEAR(at(0, 2), s1 * s1, 1e-14);
}

TEST(Fields, DerivativesAndHelmholtz) {
  const Field u = Field::monomial(2, 1, 3.0) * Field::sin_linear(2.0, -1.0, 0.3);
  // d/dx of 3 x^2 y sin(2x - y + 0.3) at (0.4, 0.7)
  const Real x = 0.4, y = 0.7, a = 2 * x - y + 0.3;
  EXPECT_NEAR(std::abs(u.deriv(1, 0, x, y) - Complex(6 * x * y * std::sin(a) + 6 * x * x * y * std::cos(a))), 0, 1e-14);
  EXPECT_NEAR(std::abs(u.dx().dy()(x, y) - u.deriv(1, 1, x, y)), 0, 1e-13);
  const Real k = 7, th = 0.9;
  const Field pw = Field::exponential(kI * k * std::cos(th), kI * k * std::sin(th));
  EXPECT_NEAR(std::abs(pw.helmholtz(k)(x, y)), 0, 1e-12);
  const auto all = u.derivs(lambda_set(4), x, y);
  const auto L = lambda_set(4);
  for (std::size_t q = 0; q < L.size(); ++q) EXPECT_NEAR(std::abs(all[q] - u.deriv(L[q].m, L[q].n, x, y)), 0, 1e-12);
}

TEST(Fields, CompositionAlongCurve) {
  const auto C = make_curve("five-star");
  const Field u = Field::sin_linear(3.0, 1.0) + Field::monomial(1, 2, 2.0);
  const Real t = 0.7;
  const auto s = along_curve(u, C->jet(t, 6));
  // Compare the first derivative with the chain rule.
  const auto J = C->jet(t, 1);
  const Complex d1 = u.deriv(1, 0, J.r[0], J.s[0]) * J.r[1] + u.deriv(0, 1, J.r[0], J.s[0]) * J.s[1];
  EXPECT_NEAR(std::abs(s[0] - u(J.r[0], J.s[0])), 0, 1e-14);
  EXPECT_NEAR(std::abs(s[1] - d1), 0, 1e-13);
}
