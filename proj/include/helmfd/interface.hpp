#pragma once

#include <helmfd/geometry.hpp>
#include <helmfd/reduction.hpp>
#include <helmfd/stencils.hpp>

#include <Eigen/Dense>

#include <map>

namespace helmfd {

// -------------------------------------------------------- tangential maps

// Linear functional sum_{(m,n)} c_{m,n}(t) u^{(m,n)}(gamma(t)) with
// coefficients kept as Taylor series in t - t*.
using JetFunctional = std::map<std::pair<int, int>, RealSeries>;

inline JetFunctional differentiate(const JetFunctional& F, const CurveJet& J) {
  const RealSeries dr = J.dr(), ds = J.ds();
  JetFunctional out;
  auto add = [&](std::pair<int, int> key, const RealSeries& s) {
    auto it = out.find(key);
    if (it == out.end()) out.emplace(key, s);
    else it->second += s;
  };
  for (const auto& [key, c] : F) {
    if (c.degree() >= 1) add(key, c.derivative());
    add({key.first + 1, key.second}, c * dr);
    add({key.first, key.second + 1}, c * ds);
  }
  return out;
}

// Values at t* of the p-th derivative, as weights over Lambda_M.
inline std::vector<Real> evaluate(const JetFunctional& F, const MultiIndexSet& L) {
  std::vector<Real> w(L.size(), 0.0);
  for (const auto& [key, c] : F) {
    const int pos = L.position({key.first, key.second});
    if (pos < 0) throw InvalidIndexError("functional leaves the index set");
    w[static_cast<std::size_t>(pos)] += c[0];
  }
  return w;
}

// d^p/dt^p u(r(t), s(t)) at t* as weights over Lambda_p.
inline std::vector<Real> tangential_functional(const CurveJet& J, int p) {
  JetFunctional F{{{0, 0}, RealSeries(p, 1.0)}};
  for (int q = 0; q < p; ++q) F = differentiate(F, J);
  return evaluate(F, lambda_set(p));
}

// ------------------------------------------------------------ transmission

// u_-^{b} = Tu u_+ + Tf_plus f_+ + Tf_minus f_- + Tg g + TgGamma g_Gamma over
// b in band1(M), f over Lambda_{M-2}, g over p=0..M, g_Gamma over p=0..M-1.
struct TransmissionTable {
  int M = 0;
  MultiIndexSet band, fset;
  Eigen::MatrixXd Tu, Tf_plus, Tf_minus, Tg, TgGamma;
  Real condition = 0;
};

namespace detail {

// The transmission solve runs in extended precision: the seventh-order
// systems on the star curves reach condition numbers near 1e8.
using XReal = long double;
using XMatrix = Eigen::Matrix<XReal, Eigen::Dynamic, Eigen::Dynamic>;
using XVector = Eigen::Matrix<XReal, Eigen::Dynamic, 1>;

// Rows: functional weights over Lambda_M; returns band1 and f matrices
// after eliminating band2 derivatives with the PDE for wavenumber k.
inline std::pair<XMatrix, XMatrix> reduce_rows(const std::vector<std::vector<Real>>& rows, const MultiIndexSet& L,
                                               const MultiIndexSet& band, const MultiIndexSet& fset, Real k) {
  const auto R = static_cast<Eigen::Index>(rows.size());
  XMatrix A = XMatrix::Zero(R, static_cast<Eigen::Index>(band.size()));
  XMatrix F = XMatrix::Zero(R, static_cast<Eigen::Index>(fset.size()));
  for (std::size_t q = 0; q < L.size(); ++q) {
    const auto red = reduce_derivative(L[q].m, L[q].n);
    for (Eigen::Index e = 0; e < R; ++e) {
      const XReal w = rows[static_cast<std::size_t>(e)][q];
      if (w == 0) continue;
      for (const auto& t : red.u_terms) A(e, band.position(t.index)) += w * t.weight(XReal(k));
      for (const auto& t : red.f_terms) F(e, fset.position(t.index)) += w * t.weight(XReal(k));
    }
  }
  return {A, F};
}

} // namespace detail

// Builds the 2M+1 jump equations: d^p/dt^p of [u] = g for p=0..M and of the
// arc-length scaled flux jump sigma (s' [u_x] - r' [u_y]) = g_Gamma for
// p=0..M-1, then solves for the band1 derivatives of u_-.
inline TransmissionTable transmission(const CurveJet& J, Real sigma, Real k_plus, Real k_minus, int M) {
  if (M < 2 || M > 9) throw InvalidIndexError("transmission order out of range");
  if (J.r.degree() < M) throw InvalidIndexError("curve jet too short");
  const auto L = lambda_set(M);
  TransmissionTable T;
  T.M = M;
  T.band = lambda_set(M, IndexSetKind::Band1);
  T.fset = lambda_set(M - 2);
  const int E = 2 * M + 1;
  std::vector<std::vector<Real>> rows;
  std::vector<Real> scale; // p! for the data columns
  {
    JetFunctional F{{{0, 0}, RealSeries(M, 1.0)}};
    Real fact = 1;
    for (int p = 0; p <= M; ++p) {
      if (p > 0) {
        F = differentiate(F, J);
        fact *= p;
      }
      rows.push_back(evaluate(F, L));
      scale.push_back(fact);
    }
  }
  {
    JetFunctional F{{{1, 0}, sigma * J.ds()}, {{0, 1}, -sigma * J.dr()}};
    Real fact = 1;
    for (int p = 0; p < M; ++p) {
      if (p > 0) {
        F = differentiate(F, J);
        fact *= p;
      }
      rows.push_back(evaluate(F, L));
      scale.push_back(fact);
    }
  }
  using detail::XMatrix;
  using detail::XReal;
  using detail::XVector;
  auto [Ap, Fp] = detail::reduce_rows(rows, L, T.band, T.fset, k_plus);
  auto [Am, Fm] = detail::reduce_rows(rows, L, T.band, T.fset, k_minus);

  // Equilibrate rows and columns before factorizing.
  XVector rs = XVector::Ones(E), cs = XVector::Ones(E);
  for (int sweep = 0; sweep < 4; ++sweep) {
    const XMatrix S = rs.asDiagonal() * Am * cs.asDiagonal();
    for (int e = 0; e < E; ++e) rs(e) /= std::sqrt(S.row(e).cwiseAbs().maxCoeff());
    const XMatrix S2 = rs.asDiagonal() * Am * cs.asDiagonal();
    for (int c = 0; c < E; ++c) cs(c) /= std::sqrt(S2.col(c).cwiseAbs().maxCoeff());
  }
  const XMatrix S = rs.asDiagonal() * Am * cs.asDiagonal();
  const Eigen::JacobiSVD<XMatrix> svd(S);
  const auto sv = svd.singularValues();
  T.condition = sv(sv.size() - 1) > 0 ? static_cast<Real>(sv(0) / sv(sv.size() - 1)) : std::numeric_limits<Real>::infinity();
  if (!(T.condition < 1e14))
    throw NumericalError("transmission system is singular (condition " + std::to_string(T.condition) + ")");
  const Eigen::FullPivLU<XMatrix> lu(S);
  auto solve = [&](const XMatrix& B) -> Eigen::MatrixXd {
    return (cs.asDiagonal() * lu.solve(rs.asDiagonal() * B)).template cast<Real>();
  };
  // Tu = I + Am^{-1} (Ap - Am), so equal wavenumbers give the identity exactly.
  T.Tu = Eigen::MatrixXd::Identity(E, E) + solve(Ap - Am);
  T.Tf_plus = solve(Fp);
  T.Tf_minus = -solve(Fm);
  XMatrix D = XMatrix::Zero(E, E);
  for (int e = 0; e < E; ++e) D(e, e) = -scale[static_cast<std::size_t>(e)];
  const Eigen::MatrixXd TD = solve(D);
  T.Tg = TD.leftCols(M + 1);
  T.TgGamma = TD.rightCols(M);
  return T;
}

// ------------------------------------------------------ irregular stencils

// Irregular-point scheme h^{-1} sum C u = sum f_+ J+ + sum f_- J- + sum g Jg
// + sum g_Gamma JgGamma, in grid orientation.
struct IrregularStencil {
  std::array<Complex, 9> coeffs{}; // by slot(di,dj)
  MultiIndexSet fset;
  std::vector<Complex> J_plus, J_minus, J_g, J_gGamma;
  BasePoint base;

  StencilWeights weights() const {
    StencilWeights w;
    w.scale_power = 1;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        w.offsets.push_back({di, dj});
        w.coeffs.push_back(coeffs[static_cast<std::size_t>(slot(di, dj))]);
      }
    return w;
  }

  Complex rhs(const std::vector<Complex>& f_plus, const std::vector<Complex>& f_minus, const JumpData& jd) const {
    Complex s = 0;
    for (std::size_t q = 0; q < fset.size(); ++q) s += J_plus[q] * f_plus[q] + J_minus[q] * f_minus[q];
    for (std::size_t p = 0; p < J_g.size(); ++p) s += J_g[p] * jd.g[p];
    for (std::size_t p = 0; p < J_gGamma.size(); ++p) s += J_gGamma[p] * jd.gGamma[p];
    return s;
  }
};

// Right-hand side weights shared by both irregular schemes.
inline IrregularStencil irregular_rhs(const std::array<Complex, 9>& C, const std::array<bool, 9>& plus,
                                      const BasePoint& b, const TransmissionTable& T, Real k_plus, Real k_minus,
                                      Real h) {
  const int M = T.M;
  IrregularStencil S;
  S.coeffs = C;
  S.base = b;
  S.fset = T.fset;
  const std::size_t nf = T.fset.size(), nb = T.band.size();
  S.J_plus.assign(nf, 0.0);
  S.J_minus.assign(nf, 0.0);
  std::vector<Complex> Im(nb, 0.0);
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di) {
      const auto sl = static_cast<std::size_t>(slot(di, dj));
      const Real x = (b.v0 + di) * h, y = (b.w0 + dj) * h;
      const Real k = plus[sl] ? k_plus : k_minus;
      auto& Jz = plus[sl] ? S.J_plus : S.J_minus;
      for (std::size_t q = 0; q < nf; ++q) Jz[q] += C[sl] * h_kernel(M, T.fset[q].m, T.fset[q].n, k, x, y) / h;
      if (!plus[sl])
        for (std::size_t q = 0; q < nb; ++q) Im[q] += C[sl] * g_kernel(M, T.band[q].m, T.band[q].n, k_minus, x, y);
    }
  S.J_g.assign(static_cast<std::size_t>(M + 1), 0.0);
  S.J_gGamma.assign(static_cast<std::size_t>(M), 0.0);
  for (std::size_t q = 0; q < nb; ++q) {
    const Complex w = Im[q] / h;
    const auto r = static_cast<Eigen::Index>(q);
    for (std::size_t c = 0; c < nf; ++c) {
      S.J_plus[c] += w * T.Tf_plus(r, static_cast<Eigen::Index>(c));
      S.J_minus[c] += w * T.Tf_minus(r, static_cast<Eigen::Index>(c));
    }
    for (int p = 0; p <= M; ++p) S.J_g[static_cast<std::size_t>(p)] += w * T.Tg(r, p);
    for (int p = 0; p < M; ++p) S.J_gGamma[static_cast<std::size_t>(p)] += w * T.TgGamma(r, p);
  }
  return S;
}

inline constexpr int kSameKOrder = 7;
inline constexpr int kGeneralOrder = 5;

// Equal wavenumbers: the regular interior coefficients with transmission
// corrections in the right-hand side, scaled by h^{-1}.
inline IrregularStencil irregular_stencil_same_k(const IrregularPoint& ip, const BasePoint& b,
                                                 const TransmissionTable& T, Real k, Real h) {
  if (T.M != kSameKOrder) throw InvalidIndexError("same-k scheme needs a seventh-order transmission table");
  const auto P = interior_reduced();
  const Complex c11 = eval(P.c11, k * h), c10 = eval(P.c10, k * h), c00 = eval(P.c00, k * h);
  std::array<Complex, 9> C{};
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di) {
      const int r = std::abs(di) + std::abs(dj);
      C[static_cast<std::size_t>(slot(di, dj))] = r == 2 ? c11 : (r == 1 ? c10 : c00);
    }
  return irregular_rhs(C, ip.plus, b, T, k, k, h);
}

namespace detail {

// Coefficients in eta = K h of K^{m+n} G_{M1,m,n}(a eta / K, b eta / K).
inline std::vector<Real> scaled_g_kernel(int M1, int m, int n, Real k, Real K, Real a, Real b) {
  std::vector<Real> c(static_cast<std::size_t>(M1 + 1), 0.0);
  const Real q = (k / K) * (k / K);
  for (int p = 0; p <= (M1 - m - n) / 2; ++p)
    for (int l = p; l <= p + n / 2; ++l) {
      const Real sgn = (l % 2 == 0) ? 1.0 : -1.0;
      c[static_cast<std::size_t>(m + n + 2 * p)] +=
          sgn * binomial<Real>(l, p) * ipow(q, p) * scaled_monomial(a, b, m + 2 * l, n + 2 * p - 2 * l);
    }
  return c;
}

} // namespace detail

struct GeneralCoefficients {
  std::array<Complex, 9> C{};
  std::array<std::array<Real, kGeneralOrder + 1>, 9> c{}; // c_{k,l,p}
  Real residual = 0;
};

// Solves the fifth-order consistency system for a general irregular point
// with pinned constant terms (-20 center, 4 edges, 1 corners). Free
// directions are fixed by the basic solution of a column-pivoted QR.
inline GeneralCoefficients general_coefficients(const IrregularPoint& ip, const BasePoint& b,
                                                const TransmissionTable& T, Real k_plus, Real k_minus, Real h) {
  constexpr int M = kGeneralOrder;
  if (T.M != M) throw InvalidIndexError("general scheme needs a fifth-order transmission table");
  // With both wavenumbers zero the expansion runs in powers of h itself.
  const Real K = (k_plus == 0 && k_minus == 0) ? 1.0 : std::max(k_plus, k_minus);
  const auto& band = T.band;
  const int nb = static_cast<int>(band.size());
  // Equation rows: (m,n) in band1(M) and powers q = m+n..M.
  std::vector<std::pair<int, int>> eqs;
  for (int e = 0; e < nb; ++e)
    for (int q = band[static_cast<std::size_t>(e)].order(); q <= M; ++q) eqs.push_back({e, q});
  const auto NE = static_cast<Eigen::Index>(eqs.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(NE, 9 * (M + 1));
  for (int s = 0; s < 9; ++s) {
    const int di = s % 3 - 1, dj = s / 3 - 1;
    const Real a = b.v0 + di, bb = b.w0 + dj;
    const bool plus = ip.plus[static_cast<std::size_t>(s)];
    // Polynomial in eta multiplying C_s in each band equation.
    std::vector<std::vector<Real>> poly(static_cast<std::size_t>(nb), std::vector<Real>(M + 1, 0.0));
    if (plus) {
      for (int e = 0; e < nb; ++e)
        poly[static_cast<std::size_t>(e)] = detail::scaled_g_kernel(M, band[static_cast<std::size_t>(e)].m,
                                                                    band[static_cast<std::size_t>(e)].n, k_plus, K, a, bb);
    } else {
      for (int e2 = 0; e2 < nb; ++e2) {
        const auto g = detail::scaled_g_kernel(M, band[static_cast<std::size_t>(e2)].m,
                                               band[static_cast<std::size_t>(e2)].n, k_minus, K, a, bb);
        for (int e = 0; e < nb; ++e) {
          const Real t = T.Tu(e2, e) * std::pow(K, band[static_cast<std::size_t>(e)].order() -
                                                      band[static_cast<std::size_t>(e2)].order());
          if (t == 0) continue;
          for (int q = 0; q <= M; ++q) poly[static_cast<std::size_t>(e)][static_cast<std::size_t>(q)] += t * g[static_cast<std::size_t>(q)];
        }
      }
    }
    for (Eigen::Index r = 0; r < NE; ++r) {
      const auto [e, q] = eqs[static_cast<std::size_t>(r)];
      for (int p = 0; p <= q; ++p) {
        A(r, s * (M + 1) + p) += poly[static_cast<std::size_t>(e)][static_cast<std::size_t>(q - p)];
      }
    }
  }
  // Pinned constants move to the right-hand side.
  Eigen::VectorXd pinned = Eigen::VectorXd::Zero(9);
  for (int s = 0; s < 9; ++s) {
    const int r = std::abs(s % 3 - 1) + std::abs(s / 3 - 1);
    pinned(s) = r == 2 ? 1.0 : (r == 1 ? 4.0 : -20.0);
  }
  Eigen::MatrixXd Af(NE, 9 * M);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(NE);
  for (int s = 0; s < 9; ++s) {
    rhs -= A.col(s * (M + 1)) * pinned(s);
    Af.middleCols(s * M, M) = A.middleCols(s * (M + 1) + 1, M);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Af);
  qr.setThreshold(1e-12);
  const Eigen::VectorXd x = qr.solve(rhs);
  GeneralCoefficients out;
  const Real Amax = std::max(A.cwiseAbs().maxCoeff(), 1.0);
  out.residual = (Af * x - rhs).cwiseAbs().maxCoeff() / Amax;
  if (!(out.residual <= 1e-9))
    throw NumericalError("no consistent irregular stencil at point (" + std::to_string(ip.i) + "," +
                         std::to_string(ip.j) + ")");
  const Real eta = K * h;
  for (int s = 0; s < 9; ++s) {
    auto& cs = out.c[static_cast<std::size_t>(s)];
    cs[0] = pinned(s);
    for (int p = 1; p <= M; ++p) cs[static_cast<std::size_t>(p)] = x(s * M + p - 1);
    Real v = 0;
    for (int p = M; p >= 0; --p) v = v * eta + cs[static_cast<std::size_t>(p)];
    out.C[static_cast<std::size_t>(s)] = v;
  }
  return out;
}

inline IrregularStencil irregular_stencil_general(const IrregularPoint& ip, const BasePoint& b,
                                                  const TransmissionTable& T, Real k_plus, Real k_minus, Real h) {
  const auto G = general_coefficients(ip, b, T, k_plus, k_minus, h);
  return irregular_rhs(G.C, ip.plus, b, T, k_plus, k_minus, h);
}

} // namespace helmfd
