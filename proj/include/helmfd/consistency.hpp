#pragma once

#include <helmfd/corners.hpp>

#include <Eigen/Dense>

namespace helmfd {

// Stencil point in a local frame; points of one group share a coefficient.
struct GroupedPoint {
  int a = 0;
  int b = 0;
  int group = 0;
  bool tilde = false;
};

// Linear conditions on the polynomial coefficients c_{g,p} (C_g = sum_p
// c_{g,p} (kh)^p) for the scheme h^{-s} sum C u = RHS to be consistent of
// the requested order. Complex coefficients are split into real and
// imaginary unknowns.
struct ConsistencySpec {
  std::vector<GroupedPoint> points;
  int groups = 0;
  int poly_degree = 4;
  EdgeBc bx = EdgeBc::Free;
  EdgeBc by = EdgeBc::Free;
  int scale_power = 1;
  int order = 6;
  bool complex_coeffs = true;
};

struct ConsistencySystem {
  Eigen::MatrixXd A;
  int groups = 0;
  int poly_degree = 0;
  int parts = 2;
  int column(int g, int p, int part) const { return ((g * (poly_degree + 1)) + p) * parts + part; }
  int unknowns() const { return static_cast<int>(A.cols()); }
};

namespace detail {
// Symbolic expansions of every point, grouped: returns for each group the
// summed Functional<Poly>.
inline std::vector<Functional<Poly>> grouped_functionals(const ConsistencySpec& s, int D) {
  const auto E = symbolic_engine(D, s.bx, s.by);
  std::vector<Functional<Poly>> out(static_cast<std::size_t>(s.groups), Functional<Poly>(D, Poly(D + 2)));
  for (const auto& p : s.points)
    out[static_cast<std::size_t>(p.group)].axpy(Poly(D + 2, Complex(1)),
                                                E.expand(Real(p.a), Real(p.b), p.tilde ? Orientation::YMajor : Orientation::XMajor));
  return out;
}

// (polynomial, derivative order) for every free symbol.
inline std::vector<std::pair<const Poly*, int>> free_symbols(const Functional<Poly>& F, EdgeBc bx) {
  std::vector<std::pair<const Poly*, int>> v;
  for (std::size_t n = 0; n < F.u0.size(); ++n) v.push_back({&F.u0[n], static_cast<int>(n)});
  if (bx == EdgeBc::Free)
    for (std::size_t n = 0; n < F.u1.size(); ++n) v.push_back({&F.u1[n], static_cast<int>(n) + 1});
  return v;
}
} // namespace detail

inline int consistency_degree(const ConsistencySpec& s) { return s.order + s.scale_power; }

inline ConsistencySystem build_consistency(const ConsistencySpec& s) {
  const int D = consistency_degree(s);
  const auto G = detail::grouped_functionals(s, D);
  ConsistencySystem sys;
  sys.groups = s.groups;
  sys.poly_degree = s.poly_degree;
  sys.parts = s.complex_coeffs ? 2 : 1;
  const int cols = s.groups * (s.poly_degree + 1) * sys.parts;
  std::vector<Eigen::VectorXd> rows;
  const std::size_t nsym = detail::free_symbols(G[0], s.bx).size();
  for (std::size_t q = 0; q < nsym; ++q) {
    const int d = detail::free_symbols(G[0], s.bx)[q].second;
    for (int j = 0; j < s.order + s.scale_power - d; ++j) {
      Eigen::VectorXd re = Eigen::VectorXd::Zero(cols), im = Eigen::VectorXd::Zero(cols);
      for (int g = 0; g < s.groups; ++g) {
        const Poly& P = *detail::free_symbols(G[static_cast<std::size_t>(g)], s.bx)[q].first;
        for (int p = 0; p <= std::min(j, s.poly_degree); ++p) {
          const Complex w = P.coeff(j - p);
          // (x + i y) w
          re(sys.column(g, p, 0)) += w.real();
          im(sys.column(g, p, 0)) += w.imag();
          if (sys.parts == 2) {
            re(sys.column(g, p, 1)) -= w.imag();
            im(sys.column(g, p, 1)) += w.real();
          }
        }
      }
      rows.push_back(re);
      rows.push_back(im);
    }
  }
  sys.A.resize(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) sys.A.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  return sys;
}

// Largest coefficient of the consistency defect for given group polynomials.
inline Real consistency_defect(const ConsistencySpec& s, const std::vector<Poly>& C) {
  const int D = consistency_degree(s);
  const auto G = detail::grouped_functionals(s, D);
  const std::size_t nsym = detail::free_symbols(G[0], s.bx).size();
  Real worst = 0;
  for (std::size_t q = 0; q < nsym; ++q) {
    const int d = detail::free_symbols(G[0], s.bx)[q].second;
    for (int j = 0; j < s.order + s.scale_power - d; ++j) {
      Complex acc = 0;
      for (int g = 0; g < s.groups; ++g) {
        const Poly& P = *detail::free_symbols(G[static_cast<std::size_t>(g)], s.bx)[q].first;
        for (int p = 0; p <= std::min(j, C[static_cast<std::size_t>(g)].degree()); ++p)
          acc += C[static_cast<std::size_t>(g)][p] * P.coeff(j - p);
      }
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

// Null space basis (columns) of the consistency matrix.
inline Eigen::MatrixXd null_space(const Eigen::MatrixXd& A, Real rel_tol = 1e-10) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Real tol = rel_tol * (sv.size() ? sv(0) : 1.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return svd.matrixV().rightCols(A.cols() - rank);
}

// Grouping helpers for the standard footprints.
inline ConsistencySpec interior_consistency_spec(int poly_degree = 7) {
  ConsistencySpec s;
  for (int b = -1; b <= 1; ++b)
    for (int a = -1; a <= 1; ++a) {
      const int r = std::abs(a) + std::abs(b);
      s.points.push_back({a, b, r == 2 ? 0 : (r == 1 ? 1 : 2), false});
    }
  s.groups = 3;
  s.poly_degree = poly_degree;
  s.scale_power = 2;
  s.order = 6;
  s.complex_coeffs = false;
  return s;
}

// Groups: 0 = (1,+-1), 1 = (0,+-1), 2 = (1,0), 3 = (0,0).
inline ConsistencySpec side_consistency_spec(EdgeBc bx, int order, int poly_degree = 4) {
  ConsistencySpec s;
  for (int b = -1; b <= 1; ++b)
    for (int a = 0; a <= 1; ++a) {
      const int g = (b != 0) ? (a == 1 ? 0 : 1) : (a == 1 ? 2 : 3);
      s.points.push_back({a, b, g, false});
    }
  s.groups = 4;
  s.poly_degree = poly_degree;
  s.bx = bx;
  s.scale_power = 1;
  s.order = order;
  s.complex_coeffs = true;
  return s;
}

// Groups: 0 = (1,1), 1 = (0,1), 2 = (1,0), 3 = (0,0); symmetric merges 1,2.
inline ConsistencySpec corner_consistency_spec(EdgeBc bx, EdgeBc by, int order, bool symmetric,
                                               int poly_degree = 4) {
  ConsistencySpec s;
  s.points = {{1, 1, 0, true}, {0, 1, 1, true}, {1, 0, symmetric ? 1 : 2, false}, {0, 0, symmetric ? 2 : 3, false}};
  s.groups = symmetric ? 3 : 4;
  s.poly_degree = poly_degree;
  s.bx = bx;
  s.by = by;
  s.scale_power = 1;
  s.order = order;
  s.complex_coeffs = true;
  return s;
}

} // namespace helmfd
