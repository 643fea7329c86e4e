#pragma once

#include <helmfd/consistency.hpp>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>

namespace helmfd {

// Composite Simpson 3/8 rule for a 2*pi periodic integrand on n uniform
// nodes of [0, 2*pi); n must be a multiple of 3.
struct AngularQuadrature {
  std::vector<Real> theta;
  std::vector<Real> weight;

  explicit AngularQuadrature(int n = 900) {
    if (n <= 0 || n % 3 != 0) throw ConfigError("Simpson 3/8 needs a positive multiple of 3 nodes");
    const Real dt = 2 * std::numbers::pi / n;
    for (int i = 0; i < n; ++i) {
      theta.push_back(i * dt);
      // Periodic wrap merges the two end weights of the composite rule.
      weight.push_back(3 * dt / 8 * (i % 3 == 0 ? 2.0 : 3.0));
    }
  }
  std::size_t size() const { return theta.size(); }
};

// kh values used for fitting the free parameters: 1/4 + 3s/4000, s=0..1000.
inline std::vector<Real> fitting_samples() {
  std::vector<Real> s;
  for (int i = 0; i <= 1000; ++i) s.push_back(0.25 + 3.0 * i / 4000.0);
  return s;
}

inline Real round_dyadic(Real x, int bits = 20) { return std::nearbyint(std::ldexp(x, bits)) / std::ldexp(1.0, bits); }

// ---------------------------------------------------------------- interior

// Plane-wave truncation integral of the 9-point stencil normalized to
// C00 = -20.
inline Real interior_truncation(Complex cw11, Complex cw10, Real kh, const AngularQuadrature& Q = AngularQuadrature()) {
  Real acc = 0;
  for (std::size_t i = 0; i < Q.size(); ++i) {
    const Real a = std::cos(kh * std::cos(Q.theta[i])), b = std::cos(kh * std::sin(Q.theta[i]));
    const Complex T = -20.0 + cw11 * (4 * a * b) + cw10 * (2 * (a + b));
    acc += Q.weight[i] * std::norm(T);
  }
  return acc;
}

// Per-kh minimizer (C^w_{1,1}, C^w_{1,0}) of the truncation integral.
inline std::pair<Real, Real> minimize_interior(Real kh, const AngularQuadrature& Q = AngularQuadrature()) {
  Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < Q.size(); ++i) {
    const Real a = std::cos(kh * std::cos(Q.theta[i])), c = std::cos(kh * std::sin(Q.theta[i]));
    const Eigen::Vector2d r(4 * a * c, 2 * (a + c));
    A += Q.weight[i] * r * r.transpose();
    b += Q.weight[i] * 20.0 * r;
  }
  const Eigen::Vector2d w = A.ldlt().solve(b);
  return {w(0), w(1)};
}

struct InteriorFit {
  std::array<Real, 11> params{};  // rounded
  std::array<Real, 11> raw{};     // before rounding
  Real objective_fitted = 0;      // sum over samples of the truncation integral
  Real objective_published = 0;
  Real objective_zero = 0;
};

// Sum over kh samples of the truncation integral of a stencil family
// member normalized to C00 = -20.
inline Real interior_objective(const InteriorPolys<>& P, const std::vector<Real>& S, const AngularQuadrature& Q) {
  Real acc = 0;
  for (Real kh : S) {
    const Complex c00 = eval(P.c00, kh);
    acc += interior_truncation(-20.0 * eval(P.c11, kh) / c00, -20.0 * eval(P.c10, kh) / c00, kh, Q);
  }
  return acc;
}

// Least-squares fit of c1..c8 (c9=c10=c11=0) to the per-kh minimizers:
// min sum |C11 + C~w11 C00 / 20|^2 + |C10 + C~w10 C00 / 20|^2.
inline InteriorFit fit_interior_params(int round_bits = 20, int quadrature_nodes = 900) {
  const AngularQuadrature Q(quadrature_nodes);
  const auto S = fitting_samples();
  const auto base = interior_family({});
  std::array<InteriorPolys<>, 8> basis;
  for (int j = 0; j < 8; ++j) {
    std::array<Real, 11> e{};
    e[j] = 1;
    basis[j] = interior_family(e);
  }
  Eigen::MatrixXd A(2 * S.size(), 8);
  Eigen::VectorXd rhs(2 * S.size());
  for (std::size_t s = 0; s < S.size(); ++s) {
    const Real kh = S[s];
    const auto [w11, w10] = minimize_interior(kh, Q);
    auto row = [&](const Poly InteriorPolys<>::*pt, Real w, Eigen::Index r) {
      const Real b0 = eval(base.*pt, kh).real() + w / 20 * eval(base.c00, kh).real();
      for (int j = 0; j < 8; ++j)
        A(r, j) = eval(basis[j].*pt, kh).real() + w / 20 * eval(basis[j].c00, kh).real() - b0;
      rhs(r) = -b0;
    };
    row(&InteriorPolys<>::c11, w11, static_cast<Eigen::Index>(2 * s));
    row(&InteriorPolys<>::c10, w10, static_cast<Eigen::Index>(2 * s + 1));
  }
  // Column scaling keeps the least-squares problem well conditioned.
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  const Eigen::VectorXd y = (A * scale.cwiseInverse().asDiagonal()).colPivHouseholderQr().solve(rhs);
  InteriorFit out;
  for (int j = 0; j < 8; ++j) {
    out.raw[j] = y(j) / scale(j);
    out.params[j] = round_dyadic(out.raw[j], round_bits);
  }
  out.objective_fitted = interior_objective(interior_family(out.params), S, Q);
  out.objective_published = interior_objective(interior_reduced(), S, Q);
  out.objective_zero = interior_objective(interior_family({}), S, Q);
  return out;
}

// ---------------------------------------------------------- local stencils

// Plane-wave data on the local boundary X=0 and Y=0 for direction theta,
// with h=1 and wavenumber kh: d^n/dY^n of B_X u and d^m/dX^m of B_Y u at 0.
inline Complex plane_wave_edge_data(EdgeBc b, Real kh, Real normal_cos, Real tangent_sin, int n) {
  const Complex ik = kI * kh;
  const Complex base = (b == EdgeBc::Impedance) ? -ik * (normal_cos + 1) : -ik * normal_cos;
  return base * std::pow(ik * tangent_sin, n);
}

// Per-point plane-wave residual functions r_p(theta) with
// T(theta) = sum_p C_p r_p(theta) for a local stencil.
struct LocalResiduals {
  std::vector<std::vector<Complex>> r; // [point][theta]
};

inline LocalResiduals local_residuals(const std::vector<GroupedPoint>& pts, EdgeBc bx, EdgeBc by, Real kh,
                                      const AngularQuadrature& Q, int D = 8) {
  const auto E = numeric_engine(D, kh, bx, by);
  LocalResiduals out;
  for (const auto& p : pts) {
    const auto F = E.expand(Real(p.a), Real(p.b), p.tilde ? Orientation::YMajor : Orientation::XMajor);
    std::vector<Complex> row(Q.size());
    for (std::size_t i = 0; i < Q.size(); ++i) {
      const Real c = std::cos(Q.theta[i]), s = std::sin(Q.theta[i]);
      Complex v = std::exp(kI * kh * (c * p.a + s * p.b));
      for (int n = 0; n < D; ++n) {
        if (bx != EdgeBc::Free) v -= F.gx[n] * plane_wave_edge_data(bx, kh, c, s, n);
        if (by != EdgeBc::Free) v -= F.gy[n] * plane_wave_edge_data(by, kh, s, c, n);
      }
      row[i] = v;
    }
    out.r.push_back(std::move(row));
  }
  return out;
}

// Per-kh minimizer of the truncation integral over the group coefficients,
// with the group `fixed_group` pinned to `fixed_value`. Returns one
// complex weight per group.
inline std::vector<Complex> minimize_local(const std::vector<GroupedPoint>& pts, int groups, int fixed_group,
                                           Complex fixed_value, EdgeBc bx, EdgeBc by, Real kh,
                                           const AngularQuadrature& Q = AngularQuadrature()) {
  const auto R = local_residuals(pts, bx, by, kh, Q);
  const int nf = groups - 1;
  std::vector<int> col(static_cast<std::size_t>(groups), -1);
  for (int g = 0, c = 0; g < groups; ++g)
    if (g != fixed_group) col[static_cast<std::size_t>(g)] = c++;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(nf, nf);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(nf);
  for (std::size_t i = 0; i < Q.size(); ++i) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(nf);
    Complex r0 = 0;
    for (std::size_t p = 0; p < pts.size(); ++p) {
      const int g = pts[p].group;
      if (g == fixed_group) r0 += R.r[p][i];
      else v(col[static_cast<std::size_t>(g)]) += R.r[p][i];
    }
    A += Q.weight[i] * v.conjugate() * v.transpose();
    b -= Q.weight[i] * v.conjugate() * (fixed_value * r0);
  }
  const Eigen::VectorXcd w = A.ldlt().solve(b);
  std::vector<Complex> out(static_cast<std::size_t>(groups));
  for (int g = 0; g < groups; ++g)
    out[static_cast<std::size_t>(g)] = (g == fixed_group) ? fixed_value : w(col[static_cast<std::size_t>(g)]);
  return out;
}

// Truncation integral of a local stencil with the given group weights.
inline Real local_truncation(const std::vector<GroupedPoint>& pts, const std::vector<Complex>& w, EdgeBc bx, EdgeBc by,
                             Real kh, const AngularQuadrature& Q = AngularQuadrature()) {
  const auto R = local_residuals(pts, bx, by, kh, Q);
  Real acc = 0;
  for (std::size_t i = 0; i < Q.size(); ++i) {
    Complex T = 0;
    for (std::size_t p = 0; p < pts.size(); ++p) T += w[static_cast<std::size_t>(pts[p].group)] * R.r[p][i];
    acc += Q.weight[i] * std::norm(T);
  }
  return acc;
}

// Affine family of group polynomials: coefficients x = x0 + N z (real
// unknown layout of ConsistencySystem).
struct AffineFamily {
  ConsistencySystem layout;
  Eigen::VectorXd x0;
  Eigen::MatrixXd N;

  std::vector<Poly> polys(const Eigen::VectorXd& x) const {
    std::vector<Poly> out;
    for (int g = 0; g < layout.groups; ++g) {
      Poly p(layout.poly_degree);
      for (int q = 0; q <= layout.poly_degree; ++q) {
        const Real re = x(layout.column(g, q, 0));
        const Real im = layout.parts == 2 ? x(layout.column(g, q, 1)) : 0.0;
        p[q] = Complex(re, im);
      }
      out.push_back(p);
    }
    return out;
  }
};

// All consistent stencils with the constant term of group `fixed_group`
// pinned to `value`.
inline AffineFamily consistent_family(const ConsistencySpec& spec, int fixed_group, Real value) {
  AffineFamily F;
  F.layout = build_consistency(spec);
  const auto& L = F.layout;
  const Eigen::Index n = L.unknowns();
  const int pins = L.parts;
  Eigen::MatrixXd B(L.A.rows() + pins, n);
  B.topRows(L.A.rows()) = L.A;
  B.bottomRows(pins).setZero();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(B.rows());
  B(L.A.rows(), L.column(fixed_group, 0, 0)) = 1;
  rhs(L.A.rows()) = value;
  if (pins == 2) B(L.A.rows() + 1, L.column(fixed_group, 0, 1)) = 1;
  F.x0 = B.completeOrthogonalDecomposition().solve(rhs);
  if ((B * F.x0 - rhs).norm() > 1e-9) throw NumericalError("inconsistent stencil constraints");
  F.N = null_space(B);
  return F;
}

// Fits the free directions of a consistent family to per-kh minimizers:
// min sum_S sum_{g != fixed} |C_g - (C~w_g / C~w_fixed) C_fixed|^2.
inline Eigen::VectorXd fit_family(const AffineFamily& F, const std::vector<GroupedPoint>& pts, int fixed_group,
                                  Complex fixed_weight, EdgeBc bx, EdgeBc by, const std::vector<Real>& S,
                                  const AngularQuadrature& Q) {
  const int G = F.layout.groups;
  const Eigen::Index nz = F.N.cols();
  const Eigen::MatrixXd Pfull = [&] {
    Eigen::MatrixXd cols(F.N.rows(), nz + 1);
    cols.col(0) = F.x0;
    cols.rightCols(nz) = F.N;
    return cols;
  }();
  Eigen::MatrixXd A(2 * (G - 1) * static_cast<Eigen::Index>(S.size()), nz);
  Eigen::VectorXd b(A.rows());
  Eigen::Index r = 0;
  for (Real kh : S) {
    const auto w = minimize_local(pts, G, fixed_group, fixed_weight, bx, by, kh, Q);
    // Column j of Pfull evaluated as group polynomials at kh.
    std::vector<std::vector<Complex>> vals(static_cast<std::size_t>(nz + 1));
    for (Eigen::Index j = 0; j <= nz; ++j) {
      const auto P = F.polys(Pfull.col(j));
      for (int g = 0; g < G; ++g) vals[static_cast<std::size_t>(j)].push_back(eval(P[static_cast<std::size_t>(g)], kh));
    }
    for (int g = 0; g < G; ++g) {
      if (g == fixed_group) continue;
      const Complex ratio = w[static_cast<std::size_t>(g)] / fixed_weight;
      auto res = [&](Eigen::Index j) {
        return vals[static_cast<std::size_t>(j)][static_cast<std::size_t>(g)] -
               ratio * vals[static_cast<std::size_t>(j)][static_cast<std::size_t>(fixed_group)];
      };
      const Complex r0 = res(0);
      for (Eigen::Index j = 0; j < nz; ++j) {
        const Complex rj = res(j + 1);
        A(r, j) = rj.real();
        A(r + 1, j) = rj.imag();
      }
      b(r) = -r0.real();
      b(r + 1) = -r0.imag();
      r += 2;
    }
  }
  const Eigen::VectorXd z = A.colPivHouseholderQr().solve(b);
  return F.x0 + F.N * z;
}

// Groups of the 6-point side footprint in the local frame.
inline std::vector<GroupedPoint> side_points() { return side_consistency_spec(EdgeBc::Impedance, 6).points; }

struct SideFit {
  std::array<Real, 8> params{};
  std::array<Real, 8> raw{};
  Real objective_fitted = 0;
  Real objective_published = 0;
};

inline Real side_objective(const SidePolys<>& P, EdgeBc bx, const std::vector<Real>& S, const AngularQuadrature& Q) {
  const auto pts = side_points();
  Real acc = 0;
  for (Real kh : S) {
    const Complex c00 = eval(P.c00, kh);
    const Complex s = -10.0 / c00;
    acc += local_truncation(pts, {s * eval(P.c11, kh), s * eval(P.c01, kh), s * eval(P.c10, kh), -10.0}, bx,
                            EdgeBc::Free, kh, Q);
  }
  return acc;
}

// Fit of the eight real parameters of the impedance side family.
inline SideFit fit_impedance_side_params(int round_bits = 20, int quadrature_nodes = 900,
                                         std::vector<Real> S = fitting_samples()) {
  const AngularQuadrature Q(quadrature_nodes);
  const auto pts = side_points();
  const auto base = impedance_side_family({});
  std::array<SidePolys<>, 8> basis;
  for (int j = 0; j < 8; ++j) {
    std::array<Real, 8> e{};
    e[j] = 1;
    basis[j] = impedance_side_family(e);
  }
  using M = Poly SidePolys<>::*;
  const std::array<M, 3> free{&SidePolys<>::c11, &SidePolys<>::c01, &SidePolys<>::c10};
  Eigen::MatrixXd A(6 * S.size(), 8);
  Eigen::VectorXd rhs(6 * S.size());
  Eigen::Index r = 0;
  for (Real kh : S) {
    const auto w = minimize_local(pts, 4, 3, -10.0, EdgeBc::Impedance, EdgeBc::Free, kh, Q);
    for (int g = 0; g < 3; ++g) {
      const Complex ratio = w[static_cast<std::size_t>(g)] / 10.0;
      const Complex b0 = eval(base.*free[g], kh) + ratio * eval(base.c00, kh);
      for (int j = 0; j < 8; ++j) {
        const Complex v = eval(basis[j].*free[g], kh) + ratio * eval(basis[j].c00, kh) - b0;
        A(r, j) = v.real();
        A(r + 1, j) = v.imag();
      }
      rhs(r) = -b0.real();
      rhs(r + 1) = -b0.imag();
      r += 2;
    }
  }
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  const Eigen::VectorXd y = (A * scale.cwiseInverse().asDiagonal()).colPivHouseholderQr().solve(rhs);
  SideFit out;
  for (int j = 0; j < 8; ++j) {
    out.raw[j] = y(j) / scale(j);
    out.params[j] = round_dyadic(out.raw[j], round_bits);
  }
  out.objective_fitted = side_objective(impedance_side_family(out.params), EdgeBc::Impedance, S, Q);
  out.objective_published = side_objective(impedance_side(), EdgeBc::Impedance, S, Q);
  return out;
}

// Corner stencil derived from the consistency conditions and the
// pollution fit. Symmetric footprints tie C01 and C10.
struct CornerFit {
  CornerPolys<> polys;
  Real objective_fitted = 0;
  Real objective_published = 0;
};

inline Real corner_objective(const CornerPolys<>& P, EdgeBc bx, EdgeBc by, const std::vector<Real>& S,
                             const AngularQuadrature& Q) {
  const auto spec = corner_consistency_spec(bx, by, 6, false);
  Real acc = 0;
  for (Real kh : S) {
    const Complex s = -5.0 / eval(P.c00, kh);
    acc += local_truncation(spec.points, {s * eval(P.c11, kh), s * eval(P.c01, kh), s * eval(P.c10, kh), -5.0}, bx, by,
                            kh, Q);
  }
  return acc;
}

inline CornerFit derive_corner(EdgeBc bx, EdgeBc by, int order, bool symmetric, std::vector<Real> S = fitting_samples(),
                               int quadrature_nodes = 900) {
  const AngularQuadrature Q(quadrature_nodes);
  const auto spec = corner_consistency_spec(bx, by, order, symmetric);
  const int fixed = symmetric ? 2 : 3;
  const auto F = consistent_family(spec, fixed, -5.0);
  const Eigen::VectorXd x = fit_family(F, spec.points, fixed, -5.0, bx, by, S, Q);
  const auto P = F.polys(x);
  CornerFit out;
  out.polys.c11 = P[0];
  out.polys.c01 = P[1];
  out.polys.c10 = symmetric ? P[1] : P[2];
  out.polys.c00 = P[static_cast<std::size_t>(fixed)];
  out.objective_fitted = corner_objective(out.polys, bx, by, S, Q);
  return out;
}

// Catalogue hook for corners without a published stencil: both-Neumann
// corners use a seventh-order symmetric fit.
inline CornerPolys<> derived_corner_polys(EdgeBc bx, EdgeBc by) {
  if (bx == EdgeBc::Neumann && by == EdgeBc::Neumann) {
    static const CornerPolys<> cached = derive_corner(bx, by, 7, true, fitting_samples(), 300).polys;
    return cached;
  }
  throw UnsupportedError("no derivation rule for this corner");
}

inline void install_corner_deriver() { corner_deriver() = derived_corner_polys; }

} // namespace helmfd
