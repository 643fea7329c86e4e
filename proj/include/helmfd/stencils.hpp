#pragma once

#include <helmfd/stencil_catalog.hpp>

#include <array>
#include <optional>

namespace helmfd {

// Right-hand-side weights: the scheme row equals
// sum_{(m,n)} f^{(m,n)} f_weights + sum_side sum_n g_side^{(n)} g_weights[side][n],
// with derivatives taken at the expansion point in grid coordinates.
struct RhsWeightTable {
  MultiIndexSet f_index;
  std::vector<Complex> f_weights;
  std::array<std::vector<Complex>, 4> g_weights;

  std::vector<Complex>& g(Side s) { return g_weights[static_cast<int>(s)]; }
  const std::vector<Complex>& g(Side s) const { return g_weights[static_cast<int>(s)]; }
};

// Map between a local frame (boundary on X=0, outward normal -X) and the
// grid. Without swap X = sx (x-x0), Y = sy (y-y0); with swap
// X = sx (y-y0), Y = sy (x-x0).
struct LocalFrame {
  bool swap = false;
  int sx = 1;
  int sy = 1;

  Offset to_grid(int a, int b) const {
    return swap ? Offset{sy * b, sx * a} : Offset{sx * a, sy * b};
  }
  // Global (m,n) index and sign for the local derivative (p,q).
  std::pair<MultiIndex, Real> to_grid_derivative(int p, int q) const {
    const Real s = ((p % 2 == 1 && sx < 0) != (q % 2 == 1 && sy < 0)) ? -1.0 : 1.0;
    return {swap ? MultiIndex{q, p} : MultiIndex{p, q}, s};
  }
  // Sign of d^n/dY^n relative to the derivative along the grid tangent.
  Real tangent_sign(int n) const { return (n % 2 == 1 && sy < 0) ? -1.0 : 1.0; }
  Real normal_sign(int n) const { return (n % 2 == 1 && sx < 0) ? -1.0 : 1.0; }
};

inline LocalFrame side_frame(Side s) {
  switch (s) {
  case Side::Left: return {false, 1, 1};
  case Side::Right: return {false, -1, 1};
  case Side::Bottom: return {true, 1, 1};
  case Side::Top: return {true, -1, 1};
  }
  return {};
}

inline Complex eval(const Poly& p, Real kh) { return p(Complex(kh)); }

inline StencilWeights interior_stencil(const InteriorPolys<>& P, Real kh) {
  StencilWeights w;
  w.scale_power = 2;
  const Complex a = eval(P.c11, kh), b = eval(P.c10, kh), c = eval(P.c00, kh);
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di) {
      w.offsets.push_back({di, dj});
      const int r = std::abs(di) + std::abs(dj);
      w.coeffs.push_back(r == 2 ? a : (r == 1 ? b : c));
    }
  return w;
}

inline StencilWeights interior_stencil(Real kh) { return interior_stencil(interior_reduced(), kh); }

// J_{m,n} = h^{-2} sum C_{k,l} H_{Mt+1,m,n}(kh,lh) over Lambda_{Mt-1}.
inline RhsWeightTable interior_rhs(const StencilWeights& w, Real k, Real h, int Mt = 7) {
  RhsWeightTable t;
  t.f_index = lambda_set(Mt - 1);
  t.f_weights.assign(t.f_index.size(), Complex(0));
  for (std::size_t p = 0; p < w.offsets.size(); ++p) {
    const Real x = w.offsets[p].di * h, y = w.offsets[p].dj * h;
    for (std::size_t q = 0; q < t.f_index.size(); ++q)
      t.f_weights[q] += w.coeffs[p] * h_kernel(Mt + 1, t.f_index[q].m, t.f_index[q].n, k, x, y);
  }
  for (auto& v : t.f_weights) v /= h * h;
  return t;
}

inline SidePolys<> side_polys(BoundaryKind b) {
  switch (b) {
  case BoundaryKind::Impedance: return impedance_side();
  case BoundaryKind::Neumann: return neumann_side();
  case BoundaryKind::Dirichlet: break;
  }
  throw UnsupportedError("no side stencil for a Dirichlet side");
}

// Local 6-point side stencil (X normal index a in {0,1}, Y tangential b).
struct LocalPoint {
  int a = 0;
  int b = 0;
  Complex c;
  bool tilde = false;
};

inline std::vector<LocalPoint> side_local_points(const SidePolys<>& P, Real kh) {
  const Complex c11 = eval(P.c11, kh), c01 = eval(P.c01, kh), c10 = eval(P.c10, kh), c00 = eval(P.c00, kh);
  return {{0, -1, c01}, {0, 0, c00}, {0, 1, c01}, {1, -1, c11}, {1, 0, c10}, {1, 1, c11}};
}

inline StencilWeights to_grid(const std::vector<LocalPoint>& pts, const LocalFrame& F, int scale_power) {
  StencilWeights w;
  w.scale_power = scale_power;
  for (const auto& p : pts) {
    w.offsets.push_back(F.to_grid(p.a, p.b));
    w.coeffs.push_back(p.c);
    w.tilde.push_back(p.tilde);
  }
  return w;
}

inline StencilWeights boundary_stencil(Side s, BoundaryKind b, Real kh) {
  return to_grid(side_local_points(side_polys(b), kh), side_frame(s), 1);
}

// Side right-hand side, written per side in grid coordinates:
// G_n = -+ h^{-1} sum C G_{8,1,n}, H_{m,n} = h^{-1} sum C H_{8,.,.}.
inline RhsWeightTable boundary_rhs(Side s, BoundaryKind b, Real k, Real h) {
  const auto pts = side_local_points(side_polys(b), k * h);
  RhsWeightTable t;
  t.f_index = lambda_set(6);
  t.f_weights.assign(t.f_index.size(), Complex(0));
  auto& G = t.g(s);
  G.assign(8, Complex(0));
  for (const auto& p : pts) {
    // Local normal index a, tangential index b.
    for (int n = 0; n <= 7; ++n) {
      Complex v;
      switch (s) {
      case Side::Left: v = -g_kernel(8, 1, n, k, p.a * h, p.b * h); break;
      case Side::Right: v = g_kernel(8, 1, n, k, -p.a * h, p.b * h); break;
      case Side::Bottom: v = -g_kernel(8, 1, n, k, p.a * h, p.b * h); break;
      case Side::Top: v = g_kernel(8, 1, n, k, -p.a * h, p.b * h); break;
      }
      G[n] += p.c * v / h;
    }
    for (std::size_t q = 0; q < t.f_index.size(); ++q) {
      const int m = t.f_index[q].m, n = t.f_index[q].n;
      Real v = 0;
      switch (s) {
      case Side::Left: v = h_kernel(8, m, n, k, p.a * h, p.b * h); break;
      case Side::Right: v = h_kernel(8, m, n, k, -p.a * h, p.b * h); break;
      case Side::Bottom: v = h_kernel(8, n, m, k, p.a * h, p.b * h); break;
      case Side::Top: v = h_kernel(8, n, m, k, -p.a * h, p.b * h); break;
      }
      t.f_weights[q] += p.c * v / h;
    }
  }
  return t;
}

} // namespace helmfd
