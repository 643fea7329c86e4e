#include <helmfd/checks.hpp>
#include <helmfd/taylor_engine.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace helmfd;

namespace {

// Exponential test function u = exp(a x + b y) with a, b complex; its
// derivatives are a^m b^n u and f = (a^2 + b^2 + k^2) u.
struct ExpFunction {
  Complex a, b;
  Real k;
  Complex u(int m, int n, Real x, Real y) const { return std::pow(a, m) * std::pow(b, n) * std::exp(a * x + b * y); }
  Complex f(int m, int n, Real x, Real y) const { return (a * a + b * b + k * k) * u(m, n, x, y); }
};

} // namespace

TEST(IndexSets, SizesAndOrdering) {
  for (int M = 0; M <= 9; ++M) {
    EXPECT_EQ(lambda_set(M).size(), static_cast<std::size_t>((M + 1) * (M + 2) / 2));
    EXPECT_EQ(lambda_set(M, IndexSetKind::Band1).size(), static_cast<std::size_t>(2 * M + 1));
    EXPECT_EQ(lambda_set(M, IndexSetKind::Band1).size() + lambda_set(M, IndexSetKind::Band2).size(),
              lambda_set(M).size());
  }
  const auto L = lambda_set(2);
  const std::vector<MultiIndex> expect{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  ASSERT_EQ(L.size(), expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    EXPECT_EQ(L[i], expect[i]);
    EXPECT_EQ(L.position(expect[i]), static_cast<int>(i));
  }
  EXPECT_FALSE(L.contains({3, 0}));
  EXPECT_THROW(lambda_set(-1), InvalidIndexError);
}

TEST(Kernels, CosinePartialSum) {
  const Real k = 3.7, x = 0.21;
  Real expect = 0;
  for (int p = 0; p <= 4; ++p) expect += std::pow(-1.0, p) * std::pow(k * x, 2 * p) / std::tgamma(2 * p + 1.0);
  EXPECT_NEAR(g_kernel(8, 0, 0, k, x, 0.0), expect, 1e-15);
}

TEST(Kernels, SourceKernelOnAxis) {
  const Real k = 2.3, x = 0.4;
  const Real expect = x * x / 2 - k * k * std::pow(x, 4) / 24 + std::pow(k, 4) * std::pow(x, 6) / 720 -
                      std::pow(k, 6) * std::pow(x, 8) / 40320;
  EXPECT_NEAR(h_kernel(8, 0, 0, k, x, 0.0), expect, 1e-15);
}

TEST(Kernels, OriginValuesAndTruncations) { EXPECT_LE(check::kernel_identity_defect(), 1e-14); }

TEST(Reduction, LibraryCheckMatchesTolerance) { EXPECT_LE(check::reduction_defect(), 1e-12); }

TEST(Kernels, RejectsIndicesOutsideLambda) {
  EXPECT_THROW(g_kernel(3, 2, 2, 1.0, 0.1, 0.1), InvalidIndexError);
  EXPECT_THROW(h_kernel(4, 2, 1, 1.0, 0.1, 0.1), InvalidIndexError);
  EXPECT_THROW(factorial<Real>(21), InvalidIndexError);
}

TEST(Kernels, TaylorRepresentationConvergesAtFullOrder) {
  // Sum over band1 of u^{(m,n)} G + sum over Lambda of f^{(m,n)} H
  // reproduces u with remainder O(r^{M+2}).
  ExpFunction F{{3.0, 4.0}, {-2.0, 5.0}, 6.0};
  const int M = 7;
  std::vector<Real> errs;
  for (Real r : {0.1, 0.05, 0.025}) {
    const Real x = 0.8 * r, y = -0.6 * r;
    Complex s = 0;
    for (const auto& a : lambda_set(M + 1, IndexSetKind::Band1)) s += F.u(a.m, a.n, 0, 0) * g_kernel(M + 1, a.m, a.n, F.k, x, y);
    for (const auto& a : lambda_set(M - 1)) s += F.f(a.m, a.n, 0, 0) * h_kernel(M + 1, a.m, a.n, F.k, x, y);
    errs.push_back(std::abs(s - F.u(0, 0, x, y)));
  }
  for (std::size_t i = 1; i < errs.size(); ++i) EXPECT_GT(std::log2(errs[i - 1] / errs[i]), M + 1.5);
}

TEST(Reduction, IdentitiesHoldForExponentials) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<Real> U(-1.5, 1.5);
  for (int trial = 0; trial < 5; ++trial) {
    ExpFunction F{{U(rng), U(rng)}, {U(rng), U(rng)}, 1.0 + std::abs(U(rng))};
    for (auto o : {Orientation::XMajor, Orientation::YMajor})
      for (const auto& a : lambda_set(9)) {
        const auto red = reduce_derivative(a.m, a.n, o);
        Complex s = 0;
        for (const auto& t : red.u_terms) {
          if (o == Orientation::XMajor) EXPECT_LE(t.index.m, 1);
          else EXPECT_LE(t.index.n, 1);
          s += t.weight(F.k) * F.u(t.index.m, t.index.n, 0.3, -0.2);
        }
        for (const auto& t : red.f_terms) s += t.weight(F.k) * F.f(t.index.m, t.index.n, 0.3, -0.2);
        const Complex ref = F.u(a.m, a.n, 0.3, -0.2);
        EXPECT_LE(std::abs(s - ref), 1e-12 * std::max(1.0, std::abs(ref))) << a.m << "," << a.n;
      }
  }
}

TEST(Reduction, FourthDerivativeExpansion) {
  // u^{(4,0)} = u^{(0,4)} + 2k^2 u^{(0,2)} + k^4 u + f^{(2,0)} - k^2 f - f^{(0,2)}
  const auto red = reduce_derivative(4, 0);
  const Real k = 1.7;
  auto coef = [&](const std::vector<ReductionTerm>& v, MultiIndex i) {
    Real s = 0;
    for (const auto& t : v)
      if (t.index == i) s += t.weight(k);
    return s;
  };
  EXPECT_DOUBLE_EQ(coef(red.u_terms, {0, 4}), 1.0);
  EXPECT_DOUBLE_EQ(coef(red.u_terms, {0, 2}), 2 * k * k);
  EXPECT_DOUBLE_EQ(coef(red.u_terms, {0, 0}), std::pow(k, 4));
  EXPECT_DOUBLE_EQ(coef(red.f_terms, {2, 0}), 1.0);
  EXPECT_DOUBLE_EQ(coef(red.f_terms, {0, 0}), -k * k);
  EXPECT_DOUBLE_EQ(coef(red.f_terms, {0, 2}), -1.0);
}

TEST(TaylorEngine, FreeExpansionMatchesKernels) {
  const Real k = 2.9, x = 0.13, y = -0.21;
  const int D = 8;
  const auto E = numeric_engine(D, k);
  const auto F = E.expand(x, y, Orientation::XMajor);
  for (int n = 0; n <= D; ++n) EXPECT_NEAR(std::abs(F.u0[n] - g_kernel(D, 0, n, k, x, y)), 0, 1e-14);
  for (int n = 0; n < D; ++n) EXPECT_NEAR(std::abs(F.u1[n] - g_kernel(D, 1, n, k, x, y)), 0, 1e-14);
  const auto& fi = E.f_index();
  for (std::size_t q = 0; q < fi.size(); ++q)
    EXPECT_NEAR(std::abs(F.f[q] - h_kernel(D, fi[q].m, fi[q].n, k, x, y)), 0, 1e-14);
}

TEST(TaylorEngine, SymbolicModeAgreesWithNumeric) {
  const int D = 8;
  const auto S = symbolic_engine(D, EdgeBc::Impedance, EdgeBc::Neumann);
  const Real kh = 0.7;
  const auto N = numeric_engine(D, kh, EdgeBc::Impedance, EdgeBc::Neumann);
  for (auto o : {Orientation::XMajor, Orientation::YMajor}) {
    const auto a = S.expand(1.0, 1.0, o);
    const auto b = N.expand(1.0, 1.0, o);
    for (int n = 0; n <= D; ++n) {
      EXPECT_NEAR(std::abs(a.u0[n](Complex(kh)) - b.u0[n]), 0, 1e-13);
      EXPECT_NEAR(std::abs(a.gx[n](Complex(kh)) - b.gx[n]), 0, 1e-13);
      EXPECT_NEAR(std::abs(a.gy[n](Complex(kh)) - b.gy[n]), 0, 1e-13);
    }
  }
}

TEST(Series, ArithmeticMatchesClosedForms) {
  using S = Series<Complex>;
  const int N = 10;
  const S t = S::variable(N);
  const S e = exp(t * Complex(2.0));
  for (int i = 0; i <= N; ++i) EXPECT_NEAR(std::abs(e[i] - std::pow(2.0, i) / std::tgamma(i + 1.0)), 0, 1e-14);
  const S one(N, 1.0);
  const S q = one / (one - t);
  for (int i = 0; i <= N; ++i) EXPECT_NEAR(std::abs(q[i] - 1.0), 0, 1e-14);
  const S r = sqrt(one + t);
  const S r2 = r * r;
  for (int i = 0; i <= N; ++i) EXPECT_NEAR(std::abs(r2[i] - (one + t)[i]), 0, 1e-14);
  EXPECT_THROW(one / t, NumericalError);
}
