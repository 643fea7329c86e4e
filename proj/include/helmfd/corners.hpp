#pragma once

#include <helmfd/stencils.hpp>

#include <functional>

namespace helmfd {

inline EdgeBc edge_bc(BoundaryKind b) {
  switch (b) {
  case BoundaryKind::Impedance: return EdgeBc::Impedance;
  case BoundaryKind::Neumann: return EdgeBc::Neumann;
  case BoundaryKind::Dirichlet: break;
  }
  throw UnsupportedError("Dirichlet sides have no local boundary operator");
}

// Grid side lying on X=0 (or Y=0) of a local frame anchored at a corner.
inline Side frame_x_side(const LocalFrame& F) {
  if (F.swap) return F.sx > 0 ? Side::Bottom : Side::Top;
  return F.sx > 0 ? Side::Left : Side::Right;
}
inline Side frame_y_side(const LocalFrame& F) {
  if (F.swap) return F.sy > 0 ? Side::Left : Side::Right;
  return F.sy > 0 ? Side::Bottom : Side::Top;
}

// Corner configuration in its local frame. Points on Y=0 use the x-major
// expansion; points on Y=h (tilde) use the y-major one.
struct CornerSpec {
  LocalFrame frame;
  EdgeBc bx = EdgeBc::Impedance;
  EdgeBc by = EdgeBc::Neumann;
  CornerPolys<> polys;
};

// Stencil polynomials for boundary pairs without a catalogued formula are
// provided by a hook installed by the optimizer module.
using CornerDeriver = std::function<CornerPolys<>(EdgeBc, EdgeBc)>;
inline CornerDeriver& corner_deriver() {
  static CornerDeriver d;
  return d;
}

inline CornerSpec corner_spec(Corner c, BoundaryKind vertical, BoundaryKind horizontal) {
  if (vertical == BoundaryKind::Dirichlet || horizontal == BoundaryKind::Dirichlet)
    throw UnsupportedError("corner touching a Dirichlet side is a Dirichlet node");
  const int sxx = (c == Corner::BottomLeft || c == Corner::TopLeft) ? 1 : -1;
  const int syy = (c == Corner::BottomLeft || c == Corner::BottomRight) ? 1 : -1;
  CornerSpec s;
  if (vertical == BoundaryKind::Neumann && horizontal == BoundaryKind::Impedance) {
    s.frame = {true, syy, sxx};
    s.bx = EdgeBc::Impedance;
    s.by = EdgeBc::Neumann;
  } else {
    s.frame = {false, sxx, syy};
    s.bx = edge_bc(vertical);
    s.by = edge_bc(horizontal);
  }
  if (s.bx == EdgeBc::Impedance && s.by == EdgeBc::Neumann) s.polys = corner_impedance_neumann();
  else if (s.bx == EdgeBc::Impedance && s.by == EdgeBc::Impedance) s.polys = corner_impedance_impedance();
  else {
    if (!corner_deriver()) throw UnsupportedError("no stencil available for this corner");
    s.polys = corner_deriver()(s.bx, s.by);
  }
  return s;
}

inline std::vector<LocalPoint> corner_local_points(const CornerPolys<>& P, Real kh) {
  return {{0, 0, eval(P.c00, kh), false},
          {1, 0, eval(P.c10, kh), false},
          {0, 1, eval(P.c01, kh), true},
          {1, 1, eval(P.c11, kh), true}};
}

inline StencilWeights corner_stencil(const CornerSpec& s, Real kh) {
  return to_grid(corner_local_points(s.polys, kh), s.frame, 1);
}

// Maps a right-hand side written in a local frame to grid derivatives.
inline RhsWeightTable local_rhs_to_grid(const LocalFrame& F, Side xside, std::optional<Side> yside,
                                        const MultiIndexSet& fi, const std::vector<Complex>& jf,
                                        const std::vector<Complex>& jx, const std::vector<Complex>& jy) {
  RhsWeightTable t;
  t.f_index = fi;
  t.f_weights.assign(fi.size(), Complex(0));
  for (std::size_t q = 0; q < fi.size(); ++q) {
    const auto [g, s] = F.to_grid_derivative(fi[q].m, fi[q].n);
    t.f_weights[static_cast<std::size_t>(fi.position(g))] += s * jf[q];
  }
  auto& gx = t.g(xside);
  gx.assign(jx.size(), Complex(0));
  for (std::size_t n = 0; n < jx.size(); ++n) gx[n] = F.tangent_sign(static_cast<int>(n)) * jx[n];
  if (yside) {
    auto& gy = t.g(*yside);
    gy.assign(jy.size(), Complex(0));
    for (std::size_t n = 0; n < jy.size(); ++n) gy[n] = F.normal_sign(static_cast<int>(n)) * jy[n];
  }
  return t;
}

// Corner right-hand side through the explicit recombination of the
// tilde-row data I~, the boundary sums K, K~ and the source sums S.
inline RhsWeightTable corner_rhs(const CornerSpec& s, Real k, Real h, int Mt = 8) {
  const auto pts = corner_local_points(s.polys, k * h);
  const Complex ik = kI * k;
  std::vector<Complex> It(Mt + 1, Complex(0)), K(Mt, Complex(0)), Kt(Mt, Complex(0));
  const auto fi = lambda_set(Mt - 2);
  std::vector<Complex> S(fi.size(), Complex(0));
  for (const auto& p : pts) {
    const Real X = p.a * h, Y = p.b * h;
    if (p.tilde) {
      for (int m = 0; m <= Mt; ++m) {
        Complex v = g_kernel(Mt, 0, m, k, Y, X);
        if (s.by == EdgeBc::Impedance && m + 1 <= Mt) v -= ik * g_kernel(Mt, 1, m, k, Y, X);
        It[m] += p.c * v;
      }
      for (int m = 0; m < Mt; ++m) Kt[m] -= p.c * g_kernel(Mt, 1, m, k, Y, X) / h;
      for (std::size_t q = 0; q < fi.size(); ++q) S[q] += p.c * h_kernel(Mt, fi[q].n, fi[q].m, k, Y, X) / h;
    } else {
      for (int n = 0; n < Mt; ++n) K[n] -= p.c * g_kernel(Mt, 1, n, k, X, Y) / h;
      for (std::size_t q = 0; q < fi.size(); ++q) S[q] += p.c * h_kernel(Mt, fi[q].m, fi[q].n, k, X, Y) / h;
    }
  }
  const Real k2 = k * k;
  auto sgn = [](int e) { return (e % 2 == 0) ? 1.0 : -1.0; };
  std::vector<Complex> Jx(Mt, Complex(0));
  for (int l = 0; 2 * l <= Mt - 1; ++l) {
    Complex v = K[2 * l];
    for (int p = std::max(l, 1); p <= (Mt - 1) / 2; ++p)
      v += sgn(p + 1) * binomial<Real>(p, l) * ipow(k2, p - l) * It[2 * p + 1] / h;
    if (l == 0) v -= It[1] / h;
    Jx[2 * l] = v;
  }
  for (int l = 0; 2 * l + 1 <= Mt - 1; ++l) Jx[2 * l + 1] = K[2 * l + 1];
  std::vector<Complex> Jf(fi.size(), Complex(0));
  for (std::size_t q = 0; q < fi.size(); ++q) {
    const int m = fi[q].m, n = fi[q].n;
    Complex v = S[q];
    if (n % 2 == 0) {
      const int j = n / 2, g = m % 2, l = m / 2;
      for (int p = std::max(j + l + 1, 1); p <= (Mt - g) / 2; ++p)
        v += sgn(p - l - 1) * binomial<Real>(p - l - 1, j) * ipow(k2, p - l - j - 1) * It[2 * p + g] / h;
    }
    Jf[q] = v;
  }
  return local_rhs_to_grid(s.frame, frame_x_side(s.frame), frame_y_side(s.frame), fi, Jf, Jx, Kt);
}

// Right-hand side of any stencil in a local frame obtained directly from
// the Taylor engine: h^{-1} sum C (data part of the expansion).
inline RhsWeightTable engine_rhs(const std::vector<LocalPoint>& pts, const LocalFrame& F, EdgeBc bx, EdgeBc by,
                                 std::optional<Side> yside, Real k, Real h, int D = 8) {
  const auto E = numeric_engine(D, k, bx, by);
  Functional<Complex> acc(D, Complex(0));
  for (const auto& p : pts)
    acc.axpy(p.c / h, E.expand(p.a * h, p.b * h, p.tilde ? Orientation::YMajor : Orientation::XMajor));
  std::vector<Complex> jx(acc.gx.begin(), acc.gx.begin() + D), jy(acc.gy.begin(), acc.gy.begin() + D);
  return local_rhs_to_grid(F, frame_x_side(F), yside, E.f_index(), acc.f, jx, jy);
}

} // namespace helmfd
