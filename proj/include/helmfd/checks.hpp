#pragma once

#include <helmfd/corners.hpp>
#include <helmfd/fields.hpp>
#include <helmfd/interface.hpp>
#include <helmfd/pollution.hpp>

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

// Local truncation checks: residual of single scheme rows on smooth
// manufactured fields and the fitted decay rate in h.
namespace helmfd::check {

// Sum of exponentials exp(a x + b y); generally not a Helmholtz solution,
// so f = Delta u + k^2 u is nonzero.
struct ExpField {
  std::vector<std::pair<Complex, Complex>> modes;
  std::vector<Complex> amps;
  Real k = 1;

  Complex u(int m, int n, Real x, Real y) const {
    Complex s = 0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const auto [a, b] = modes[i];
      s += amps[i] * std::pow(a, m) * std::pow(b, n) * std::exp(a * x + b * y);
    }
    return s;
  }
  Complex f(int m, int n, Real x, Real y) const { return u(m + 2, n, x, y) + u(m, n + 2, x, y) + k * k * u(m, n, x, y); }

  // n-th tangential derivative of B u on a side through (x,y).
  Complex g(Side s, BoundaryKind b, int n, Real x, Real y) const {
    const Complex ik = kI * k;
    const bool imp = (b == BoundaryKind::Impedance);
    switch (s) {
    case Side::Left: return -u(1, n, x, y) - (imp ? ik * u(0, n, x, y) : Complex(0));
    case Side::Right: return u(1, n, x, y) - (imp ? ik * u(0, n, x, y) : Complex(0));
    case Side::Bottom: return -u(n, 1, x, y) - (imp ? ik * u(n, 0, x, y) : Complex(0));
    case Side::Top: return u(n, 1, x, y) - (imp ? ik * u(n, 0, x, y) : Complex(0));
    }
    return 0;
  }
};

// A field with several oscillating modes of wavenumber about w.
inline ExpField oscillating_field(Real k, Real w) {
  ExpField F;
  F.k = k;
  F.modes = {{Complex(0.3 * w, 0.8 * w), Complex(-0.2 * w, 0.55 * w)},
             {Complex(-0.1 * w, -0.6 * w), Complex(0.25 * w, 0.7 * w)},
             {Complex(0.15 * w, 0.4 * w), Complex(0.05 * w, -0.9 * w)}};
  F.amps = {1.0, Complex(0.5, -0.3), Complex(-0.7, 0.2)};
  return F;
}

using LD = long double;
using CLD = std::complex<LD>;

// u evaluated in extended precision.
inline CLD u_ext(const ExpField& F, LD x, LD y) {
  CLD s = 0;
  for (std::size_t i = 0; i < F.modes.size(); ++i) {
    const CLD a(F.modes[i].first.real(), F.modes[i].first.imag());
    const CLD b(F.modes[i].second.real(), F.modes[i].second.imag());
    s += CLD(F.amps[i].real(), F.amps[i].imag()) * std::exp(a * x + b * y);
  }
  return s;
}

template <class P>
CLD eval_ext(const P& poly, LD kh) { return poly(CLD(kh)); }

// Extended-precision stencil coefficients for the catalogued stencils, in
// the same point order as the library builds them.
inline std::vector<CLD> interior_coeffs_ext(LD kh) {
  const auto P = interior_reduced<LD>();
  std::vector<CLD> c;
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di) {
      const int r = std::abs(di) + std::abs(dj);
      c.push_back(eval_ext(r == 2 ? P.c11 : (r == 1 ? P.c10 : P.c00), kh));
    }
  return c;
}

inline std::vector<CLD> side_coeffs_ext(BoundaryKind b, LD kh) {
  const auto P = b == BoundaryKind::Impedance ? impedance_side<LD>() : neumann_side<LD>();
  const CLD c11 = eval_ext(P.c11, kh), c01 = eval_ext(P.c01, kh), c10 = eval_ext(P.c10, kh), c00 = eval_ext(P.c00, kh);
  return {c01, c00, c01, c11, c10, c11};
}

inline std::vector<CLD> corner_coeffs_ext(EdgeBc bx, EdgeBc by, LD kh) {
  const auto P = (bx == EdgeBc::Impedance && by == EdgeBc::Impedance)
                     ? corner_impedance_impedance<LD>()
                     : corner_impedance_neumann<LD>();
  return {eval_ext(P.c00, kh), eval_ext(P.c10, kh), eval_ext(P.c01, kh), eval_ext(P.c11, kh)};
}

// Residual of one scheme row: h^{-s} sum C u - sum f J - sum g J_g.
// When ext is given the left side is evaluated in extended precision.
inline Complex row_residual(const StencilWeights& w, const RhsWeightTable& t, const ExpField& F,
                            Real x0, Real y0, Real h, const std::vector<std::pair<Side, BoundaryKind>>& sides,
                            const std::vector<CLD>& ext = {}) {
  Complex lhs = 0;
  if (ext.empty()) {
    for (std::size_t p = 0; p < w.offsets.size(); ++p)
      lhs += w.coeffs[p] * F.u(0, 0, x0 + w.offsets[p].di * h, y0 + w.offsets[p].dj * h);
    lhs /= std::pow(h, w.scale_power);
  } else {
    CLD acc = 0;
    for (std::size_t p = 0; p < w.offsets.size(); ++p)
      acc += ext[p] * u_ext(F, LD(x0) + LD(w.offsets[p].di) * LD(h), LD(y0) + LD(w.offsets[p].dj) * LD(h));
    acc /= std::pow(LD(h), w.scale_power);
    lhs = Complex(static_cast<Real>(acc.real()), static_cast<Real>(acc.imag()));
  }
  Complex rhs = 0;
  for (std::size_t q = 0; q < t.f_index.size(); ++q) rhs += t.f_weights[q] * F.f(t.f_index[q].m, t.f_index[q].n, x0, y0);
  for (const auto& [s, b] : sides) {
    const auto& G = t.g(s);
    for (std::size_t n = 0; n < G.size(); ++n) rhs += G[n] * F.g(s, b, static_cast<int>(n), x0, y0);
  }
  return lhs - rhs;
}

// Least-squares slope of log2(err) against log2(h).
inline Real fitted_slope(const std::vector<Real>& hs, const std::vector<Real>& errs) {
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  const Real n = static_cast<Real>(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const Real x = std::log2(hs[i]), y = std::log2(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}


inline std::string format_pair(Real a, Real b) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g, %g", a, b);
  return buf;
}

// ---------------------------------------------------------------- irregular

inline Field smooth_plus(Real w) {
  return Field::exponential(Complex(0.3 * w, 0.8 * w), Complex(-0.2 * w, 0.55 * w)) +
         Field::exponential(Complex(-0.1 * w, -0.6 * w), Complex(0.25 * w, 0.7 * w), Complex(0.5, -0.3));
}

inline Field smooth_minus(Real w) {
  return Field::exponential(Complex(0.15 * w, 0.4 * w), Complex(0.05 * w, -0.9 * w), Complex(-0.7, 0.2)) +
         Field::monomial(2, 1, 3.0) + Field::constant(1.5);
}

struct TwoSided {
  Field up, um, fp, fm;
  ParamData g, gG;
};

inline TwoSided two_sided(const Field& up, const Field& um, Real kp, Real km, std::shared_ptr<const InterfaceCurve> C) {
  auto [g, gG] = jumps_from_solution(up, um, C);
  return {up, um, up.helmholtz(kp), um.helmholtz(km), g, gG};
}

// Irregular residual h^{-1} sum C u - rhs at a grid point offset (v0, w0)
// cells from the base point gamma(t).
template <class Build>
Complex irregular_residual(const InterfaceCurve& C, const TwoSided& P, Real t, Real v0, Real w0, Real h, int M,
                           Real kp, Real km, Build&& build) {
  const auto J = C.jet(t, M + 1);
  const Real xs = J.r[0], ys = J.s[0];
  IrregularPoint ip{0, 0, {}};
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di)
      ip.plus[static_cast<std::size_t>(slot(di, dj))] = C.psi(xs + (v0 + di) * h, ys + (w0 + dj) * h) > 0;
  const BasePoint b{xs, ys, t, v0, w0, 0, 0, true};
  const auto T = transmission(J, normal_sign(C, t, 1e-7), kp, km, M);
  const IrregularStencil S = build(ip, b, T);
  Complex lhs = 0;
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di) {
      const auto sl = static_cast<std::size_t>(slot(di, dj));
      const Field& u = ip.plus[sl] ? P.up : P.um;
      lhs += S.coeffs[sl] * u(xs + (v0 + di) * h, ys + (w0 + dj) * h);
    }
  lhs /= h;
  const auto jd = jump_coefficients(P.g, P.gG, C, t, M);
  const Complex rhs = S.rhs(P.fp.derivs(S.fset, xs, ys), P.fm.derivs(S.fset, xs, ys), jd);
  return lhs - rhs;
}

// -------------------------------------------------------------------- suite

struct SlopeResult {
  std::string name;
  Real slope = 0, threshold = 0;
  bool pass() const { return slope >= threshold; }
};

inline const std::array<Side, 4> kSides{Side::Left, Side::Right, Side::Bottom, Side::Top};
inline const std::array<Corner, 4> kCorners{Corner::BottomLeft, Corner::BottomRight, Corner::TopLeft, Corner::TopRight};

inline std::pair<Side, Side> corner_sides(Corner c) {
  switch (c) {
  case Corner::BottomLeft: return {Side::Left, Side::Bottom};
  case Corner::BottomRight: return {Side::Right, Side::Bottom};
  case Corner::TopLeft: return {Side::Left, Side::Top};
  case Corner::TopRight: return {Side::Right, Side::Top};
  }
  return {};
}

// Field frequencies keep h = 2^-4..2^-9 between the pre-asymptotic range
// and the rounding floor of the right-hand side.
inline ExpField field_for_order(int order) {
  return order >= 7 ? oscillating_field(20.0, 25.0) : oscillating_field(12.0, 14.0);
}

inline SlopeResult interior_slope() {
  const ExpField F = field_for_order(6);
  std::vector<Real> hs, errs;
  for (int J = 4; J <= 9; ++J) {
    const Real h = std::ldexp(1.0, -J);
    const auto w = interior_stencil(F.k * h);
    hs.push_back(h);
    errs.push_back(std::abs(row_residual(w, interior_rhs(w, F.k, h), F, 0.1, 0.2, h, {}, interior_coeffs_ext(F.k * h))));
  }
  return {"interior", fitted_slope(hs, errs), 5.7};
}

inline SlopeResult side_slope(Side s, BoundaryKind b) {
  const bool neumann = b == BoundaryKind::Neumann;
  const ExpField F = field_for_order(neumann ? 7 : 6);
  std::vector<Real> hs, errs;
  for (int J = 4; J <= 9; ++J) {
    const Real h = std::ldexp(1.0, -J);
    const auto w = boundary_stencil(s, b, F.k * h);
    hs.push_back(h);
    errs.push_back(std::abs(row_residual(w, boundary_rhs(s, b, F.k, h), F, 0.1, 0.2, h, {{s, b}}, side_coeffs_ext(b, F.k * h))));
  }
  return {"side " + to_string(s) + " " + to_string(b), fitted_slope(hs, errs), neumann ? 6.7 : 5.7};
}

inline SlopeResult corner_slope(Corner c, BoundaryKind v, BoundaryKind hz) {
  const bool seventh = v == BoundaryKind::Impedance && hz == BoundaryKind::Impedance;
  const ExpField F = field_for_order(seventh ? 7 : 6);
  const auto spec = corner_spec(c, v, hz);
  const auto [sv, sh] = corner_sides(c);
  std::vector<Real> hs, errs;
  for (int J = 4; J <= 9; ++J) {
    const Real h = std::ldexp(1.0, -J);
    hs.push_back(h);
    errs.push_back(std::abs(row_residual(corner_stencil(spec, F.k * h), corner_rhs(spec, F.k, h), F, 0.1, 0.2, h,
                                         {{sv, v}, {sh, hz}}, corner_coeffs_ext(spec.bx, spec.by, F.k * h))));
  }
  return {"corner " + to_string(c) + " " + to_string(v) + "/" + to_string(hz), fitted_slope(hs, errs), seventh ? 6.7 : 5.7};
}

inline SlopeResult same_k_slope(Real v0, Real w0) {
  const Real k = 10;
  std::shared_ptr<const InterfaceCurve> C = make_curve("five-star");
  const auto P = two_sided(smooth_plus(12), smooth_minus(12), k, k, C);
  std::vector<Real> hs, errs;
  for (int J = 4; J <= 8; ++J) {
    const Real h = std::ldexp(1.0, -J);
    hs.push_back(h);
    errs.push_back(std::abs(irregular_residual(*C, P, 0.9, v0, w0, h, kSameKOrder, k, k,
                                               [&](const IrregularPoint& ip, const BasePoint& b, const TransmissionTable& T) {
                                                 return irregular_stencil_same_k(ip, b, T, k, h);
                                               })));
  }
  return {"irregular same k (" + format_pair(v0, w0) + ")", fitted_slope(hs, errs), 6.7};
}

inline SlopeResult general_slope(Real kp, Real km) {
  std::shared_ptr<const InterfaceCurve> C = make_curve("circle");
  const auto P = two_sided(smooth_plus(12), smooth_minus(12), kp, km, C);
  std::vector<Real> hs, errs;
  for (int J = 4; J <= 8; ++J) {
    const Real h = std::ldexp(1.0, -J);
    hs.push_back(h);
    errs.push_back(std::abs(irregular_residual(*C, P, 2.3, 0.35, 0.6, h, kGeneralOrder, kp, km,
                                               [&](const IrregularPoint& ip, const BasePoint& b, const TransmissionTable& T) {
                                                 return irregular_stencil_general(ip, b, T, kp, km, h);
                                               })));
  }
  return {"irregular general k (" + format_pair(kp, km) + ")", fitted_slope(hs, errs), 4.7};
}

inline std::vector<SlopeResult> slope_suite() {
  std::vector<SlopeResult> out{interior_slope()};
  for (auto b : {BoundaryKind::Neumann, BoundaryKind::Impedance})
    for (auto s : kSides) out.push_back(side_slope(s, b));
  for (auto c : kCorners)
    for (auto [v, hz] : {std::pair{BoundaryKind::Impedance, BoundaryKind::Neumann},
                         std::pair{BoundaryKind::Neumann, BoundaryKind::Impedance},
                         std::pair{BoundaryKind::Impedance, BoundaryKind::Impedance}})
      out.push_back(corner_slope(c, v, hz));
  for (auto [v0, w0] : {std::pair{0.4, -0.3}, std::pair{-0.7, 0.55}}) out.push_back(same_k_slope(v0, w0));
  for (auto [kp, km] : {std::pair{9.0, 10.0}, std::pair{10.0, 1.0}, std::pair{6.0, 6.0}, std::pair{0.0, 0.0}})
    out.push_back(general_slope(kp, km));
  return out;
}

// --------------------------------------------------------------- properties

// Largest deviation of the Taylor kernels from their closed forms: delta
// values at the origin and the cosine/sine partial sums on the x axis.
inline Real kernel_identity_defect() {
  const int M1 = 8;
  const Real k = 3.7, x = 0.21;
  Real d = 0;
  for (const auto& a : lambda_set(M1)) d = std::max(d, std::abs(g_kernel(M1, a.m, a.n, k, 0.0, 0.0) - (a.m + a.n == 0)));
  for (const auto& a : lambda_set(M1 - 2)) d = std::max(d, std::abs(h_kernel(M1, a.m, a.n, k, 0.0, 0.0)));
  Real c = 0, sn = 0;
  for (int p = 0; 2 * p <= M1; ++p) c += std::pow(-1.0, p) * std::pow(k * x, 2 * p) / std::tgamma(2 * p + 1.0);
  for (int p = 0; 2 * p + 1 <= M1; ++p) sn += std::pow(-1.0, p) * std::pow(k * x, 2 * p + 1) / std::tgamma(2 * p + 2.0) / k;
  d = std::max(d, std::abs(g_kernel(M1, 0, 0, k, x, 0.0) - c));
  d = std::max(d, std::abs(g_kernel(M1, 1, 0, k, x, 0.0) - sn));
  return d;
}

// Relative error of the derivative reductions against exact derivatives of
// random complex exponentials, both orientations, all of Lambda_9.
inline Real reduction_defect() {
  std::mt19937 rng(7);
  std::uniform_real_distribution<Real> U(-1.5, 1.5);
  Real worst = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const Complex a(U(rng), U(rng)), b(U(rng), U(rng));
    const Real k = 1.0 + std::abs(U(rng)), x = 0.3, y = -0.2;
    auto u = [&](int m, int n) { return std::pow(a, m) * std::pow(b, n) * std::exp(a * x + b * y); };
    auto f = [&](int m, int n) { return (a * a + b * b + k * k) * u(m, n); };
    for (auto o : {Orientation::XMajor, Orientation::YMajor})
      for (const auto& i : lambda_set(9)) {
        const auto red = reduce_derivative(i.m, i.n, o);
        Complex s = 0;
        for (const auto& t : red.u_terms) s += t.weight(k) * u(t.index.m, t.index.n);
        for (const auto& t : red.f_terms) s += t.weight(k) * f(t.index.m, t.index.n);
        worst = std::max(worst, std::abs(s - u(i.m, i.n)) / std::max(1.0, std::abs(u(i.m, i.n))));
      }
  }
  return worst;
}

inline const std::vector<std::string>& catalog_curves() {
  static const std::vector<std::string> c{"five-star", "eight-star", "ellipse", "circle"};
  return c;
}

// Deviation of T_u from its forced structure: lower block triangular in
// derivative order with the (0,0), (1,0), (0,1) block equal to I.
inline Real transmission_structure_defect(const TransmissionTable& T) {
  const auto& B = T.band;
  Real d = 0;
  for (std::size_t r = 0; r < B.size(); ++r)
    for (std::size_t c = 0; c < B.size(); ++c)
      if (B[c].order() > B[r].order())
        d = std::max(d, std::abs(T.Tu(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))));
  const int low[3] = {B.position({0, 0}), B.position({1, 0}), B.position({0, 1})};
  for (int r : low)
    for (int c : low) d = std::max(d, std::abs(T.Tu(r, c) - (r == c)));
  return d;
}

// Worst structural defect over random curves, parameters and wavenumbers,
// plus |T_u - I| for equal wavenumbers.
inline Real transmission_defect() {
  std::mt19937 rng(20261015);
  std::uniform_real_distribution<Real> T2pi(0, 2 * std::numbers::pi), K(0, 120);
  std::uniform_int_distribution<int> pick(0, 3), order(2, 7);
  Real d = 0;
  for (int n = 0; n < 50; ++n) {
    const auto C = make_curve(catalog_curves()[static_cast<std::size_t>(pick(rng))]);
    const Real t = T2pi(rng), kp = K(rng), km = K(rng);
    const int M = order(rng);
    d = std::max(d, transmission_structure_defect(transmission(C->jet(t, M), normal_sign(*C, t, 1e-7), kp, km, M)));
    const auto E = transmission(C->jet(t, 7), normal_sign(*C, t, 1e-7), kp, kp, 7);
    d = std::max(d, (E.Tu - Eigen::MatrixXd::Identity(E.Tu.rows(), E.Tu.cols())).cwiseAbs().maxCoeff());
  }
  return d;
}

// Reconstructs the Omega_- band1 derivatives of a two-sided field from its
// Omega_+ derivatives, sources and jump data; normwise relative error.
inline Real transmission_oracle_error(const std::string& name, int M, Real t) {
  const Real kp = 3, km = 5;
  std::shared_ptr<const InterfaceCurve> C = make_curve(name);
  const auto P = two_sided(smooth_plus(3), smooth_minus(3), kp, km, C);
  const auto J = C->jet(t, M);
  const auto T = transmission(J, normal_sign(*C, t, 1e-7), kp, km, M);
  const Real x = J.r[0], y = J.s[0];
  const auto up = P.up.derivs(T.band, x, y), um = P.um.derivs(T.band, x, y);
  const auto fp = P.fp.derivs(T.fset, x, y), fm = P.fm.derivs(T.fset, x, y);
  const auto jd = jump_coefficients(P.g, P.gG, *C, t, M);
  Real err = 0, scale = 0;
  for (std::size_t r = 0; r < T.band.size(); ++r) {
    const auto R = static_cast<Eigen::Index>(r);
    Complex v = 0;
    for (std::size_t c = 0; c < T.band.size(); ++c) v += T.Tu(R, static_cast<Eigen::Index>(c)) * up[c];
    for (std::size_t c = 0; c < T.fset.size(); ++c)
      v += T.Tf_plus(R, static_cast<Eigen::Index>(c)) * fp[c] + T.Tf_minus(R, static_cast<Eigen::Index>(c)) * fm[c];
    for (int p = 0; p <= M; ++p) v += T.Tg(R, p) * jd.g[static_cast<std::size_t>(p)];
    for (int p = 0; p < M; ++p) v += T.TgGamma(R, p) * jd.gGamma[static_cast<std::size_t>(p)];
    err = std::max(err, std::abs(v - um[r]));
    scale = std::max(scale, std::abs(um[r]));
  }
  return err / scale;
}

// Row residual slope of an interior family member, with the extended
// precision reference built from the same parameters.
inline SlopeResult interior_family_slope(const std::array<Real, 11>& params) {
  std::array<LD, 11> c{};
  for (std::size_t j = 0; j < 11; ++j) c[j] = params[j];
  const auto Pe = interior_family<LD>(c);
  const auto P = interior_family(params);
  const ExpField F = field_for_order(6);
  std::vector<Real> hs, errs;
  for (int J = 4; J <= 9; ++J) {
    const Real h = std::ldexp(1.0, -J);
    const auto w = interior_stencil(P, F.k * h);
    std::vector<CLD> ext;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        const int r = std::abs(di) + std::abs(dj);
        ext.push_back(eval_ext(r == 2 ? Pe.c11 : (r == 1 ? Pe.c10 : Pe.c00), LD(F.k * h)));
      }
    hs.push_back(h);
    errs.push_back(std::abs(row_residual(w, interior_rhs(w, F.k, h), F, 0.1, 0.2, h, {}, ext)));
  }
  return {"fitted interior stencil", fitted_slope(hs, errs), 5.7};
}

} // namespace helmfd::check
