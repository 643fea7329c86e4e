#pragma once

#include <helmfd/corners.hpp>
#include <helmfd/interface.hpp>

#include <Eigen/Sparse>
#include <Eigen/UmfPackSupport>

#include <map>
#include <ostream>

namespace helmfd {

// Derivatives of a source term over an index set at a point.
using DerivOracle = std::function<std::vector<Complex>(const MultiIndexSet&, Real x, Real y)>;
// Derivatives 0..count-1 of a side datum along its side (increasing x or y).
using SideOracle = std::function<std::vector<Complex>(int count, Real x, Real y)>;

// Everything the matrix depends on.
struct OperatorSpec {
  Real k_plus = 0, k_minus = 0;
  std::array<BoundaryKind, 4> bc{BoundaryKind::Dirichlet, BoundaryKind::Dirichlet, BoundaryKind::Dirichlet,
                                 BoundaryKind::Dirichlet};
  std::shared_ptr<const InterfaceCurve> curve;
  // Use the general irregular scheme even for equal wavenumbers.
  bool force_general = false;
  Real normal_probe = 1e-7;

  BoundaryKind kind(Side s) const { return bc[static_cast<std::size_t>(s)]; }
};

// Data entering only the right-hand side. Dirichlet sides read g at n = 0.
struct ProblemData {
  DerivOracle f_plus, f_minus;
  std::array<SideOracle, 4> g;
  ParamData jump_g, jump_gGamma;
};

// 64-bit indices: the factors of the finest desk-scale grids overflow the
// 32-bit UMFPACK interface.
using SparseIndex = SuiteSparse_long;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor, SparseIndex>;

enum class RowKind { Dirichlet, Interior, Side, Corner, Irregular };

class Discretization {
public:
  Discretization(OperatorSpec op, const Grid& G) : op_(std::move(op)), G_(G) {
    if (op_.k_plus < 0 || op_.k_minus < 0) throw ConfigError("wavenumbers must be nonnegative");
    if (!op_.curve && op_.k_plus != op_.k_minus) throw ConfigError("unequal wavenumbers need an interface");
    std::array<bool, 4> eliminated{};
    for (int s = 0; s < 4; ++s) eliminated[static_cast<std::size_t>(s)] = op_.bc[static_cast<std::size_t>(s)] == BoundaryKind::Dirichlet;
    cls_ = classify(G_, op_.curve.get(), eliminated);
    classify_rows();
    build();
  }

  const Grid& grid() const { return G_; }
  const OperatorSpec& spec() const { return op_; }
  const Classification& classification() const { return cls_; }
  const SparseMatrix& matrix() const { return A_; }
  int unknowns() const { return static_cast<int>(A_.rows()); }
  RowKind row_kind(int node) const { return kind_[static_cast<std::size_t>(node)]; }
  int unknown(int node) const { return unknown_[static_cast<std::size_t>(node)]; }
  bool uses_general_scheme() const { return general_; }

  Eigen::VectorXcd rhs(const ProblemData& d) const {
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(A_.rows());
    const auto uD = dirichlet_values(d);
    for (int node = 0; node < G_.points(); ++node) {
      const int r = unknown_[static_cast<std::size_t>(node)];
      if (r < 0) continue;
      const int i = node % (G_.nx + 1), j = node / (G_.nx + 1);
      const Real x = G_.x(i), y = G_.y(j);
      Complex v = 0;
      const auto ir = irregular_row_.find(node);
      if (ir != irregular_row_.end()) {
        const auto& S = irregular_[static_cast<std::size_t>(ir->second)];
        const Real xs = S.base.x_star, ys = S.base.y_star;
        const int M = general_ ? kGeneralOrder : kSameKOrder;
        const auto fp = d.f_plus ? d.f_plus(S.fset, xs, ys) : std::vector<Complex>(S.fset.size(), Complex(0));
        const auto fm = d.f_minus ? d.f_minus(S.fset, xs, ys) : std::vector<Complex>(S.fset.size(), Complex(0));
        JumpData jd;
        if (d.jump_g && d.jump_gGamma) jd = jump_coefficients(d.jump_g, d.jump_gGamma, *op_.curve, S.base.t_star, M);
        else {
          jd.g.assign(static_cast<std::size_t>(M + 1), Complex(0));
          jd.gGamma.assign(static_cast<std::size_t>(M), Complex(0));
        }
        v = S.rhs(fp, fm, jd);
      } else {
        const RhsWeightTable& t = *table_[static_cast<std::size_t>(node)];
        const bool plus = cls_.side[static_cast<std::size_t>(node)] > 0;
        const DerivOracle& f = plus ? d.f_plus : d.f_minus;
        if (f) {
          const auto fv = f(t.f_index, x, y);
          for (std::size_t q = 0; q < fv.size(); ++q) v += t.f_weights[q] * fv[q];
        }
        for (int s = 0; s < 4; ++s) {
          const auto& gw = t.g_weights[static_cast<std::size_t>(s)];
          if (gw.empty()) continue;
          const auto& go = d.g[static_cast<std::size_t>(s)];
          if (!go) throw ConfigError("missing boundary data for the " + to_string(static_cast<Side>(s)) + " side");
          const auto gv = go(static_cast<int>(gw.size()), x, y);
          for (std::size_t n = 0; n < gw.size(); ++n) v += gw[n] * gv[n];
        }
      }
      for (const auto& [col, c] : eliminated_[static_cast<std::size_t>(r)]) v -= c * uD[static_cast<std::size_t>(col)];
      b(r) = v;
    }
    return b;
  }

  // Nodal field with Dirichlet values filled in.
  std::vector<Complex> expand(const Eigen::VectorXcd& x, const ProblemData& d) const {
    auto u = dirichlet_values(d);
    for (int node = 0; node < G_.points(); ++node) {
      const int r = unknown_[static_cast<std::size_t>(node)];
      if (r >= 0) u[static_cast<std::size_t>(node)] = x(r);
    }
    return u;
  }

  // Coordinate triplets "row col re im", one nonzero per line.
  void write_triplets(std::ostream& os) const {
    os.precision(17);
    for (int c = 0; c < A_.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(A_, c); it; ++it)
        os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
  }

private:
  std::optional<Side> dirichlet_side(int i, int j) const {
    const std::array<std::pair<Side, bool>, 4> on{{{Side::Left, i == 0},
                                                   {Side::Right, i == G_.nx},
                                                   {Side::Bottom, j == 0},
                                                   {Side::Top, j == G_.ny}}};
    for (const auto& [s, b] : on)
      if (b && op_.kind(s) == BoundaryKind::Dirichlet) return s;
    return std::nullopt;
  }

  void classify_rows() {
    const auto P = static_cast<std::size_t>(G_.points());
    kind_.assign(P, RowKind::Interior);
    unknown_.assign(P, -1);
    dside_.assign(P, Side::Left);
    int n = 0;
    for (int j = 0; j <= G_.ny; ++j)
      for (int i = 0; i <= G_.nx; ++i) {
        const auto id = static_cast<std::size_t>(G_.index(i, j));
        if (auto s = dirichlet_side(i, j)) {
          kind_[id] = RowKind::Dirichlet;
          dside_[id] = *s;
          continue;
        }
        switch (cls_.kind[id]) {
        case PointKind::RegularInterior: kind_[id] = RowKind::Interior; break;
        case PointKind::RegularBoundary: kind_[id] = RowKind::Side; break;
        case PointKind::Corner: kind_[id] = RowKind::Corner; break;
        case PointKind::Irregular: kind_[id] = RowKind::Irregular; break;
        }
        unknown_[id] = n++;
      }
    eliminated_.assign(static_cast<std::size_t>(n), {});
  }

  Real k_of(int node) const { return cls_.side[static_cast<std::size_t>(node)] > 0 ? op_.k_plus : op_.k_minus; }

  // Stencils and right-hand-side tables, cached per distinct configuration.
  struct Cached {
    StencilWeights w;
    RhsWeightTable t;
  };
  const Cached& regular_row(int node, int i, int j) {
    const Real k = k_of(node);
    const RowKind rk = kind_[static_cast<std::size_t>(node)];
    int key = 0;
    Cached c;
    if (rk == RowKind::Interior) {
      key = 0;
    } else if (rk == RowKind::Side) {
      const Side s = i == 0 ? Side::Left : (i == G_.nx ? Side::Right : (j == 0 ? Side::Bottom : Side::Top));
      key = 1 + static_cast<int>(s);
    } else {
      const Corner cr = j == 0 ? (i == 0 ? Corner::BottomLeft : Corner::BottomRight)
                               : (i == 0 ? Corner::TopLeft : Corner::TopRight);
      key = 5 + static_cast<int>(cr);
    }
    key = 2 * key + (cls_.side[static_cast<std::size_t>(node)] > 0 ? 1 : 0);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const Real kh = k * G_.h;
    if (rk == RowKind::Interior) {
      c.w = interior_stencil(kh);
      c.t = interior_rhs(c.w, k, G_.h);
    } else if (rk == RowKind::Side) {
      const Side s = static_cast<Side>(key / 2 - 1);
      c.w = boundary_stencil(s, op_.kind(s), kh);
      c.t = boundary_rhs(s, op_.kind(s), k, G_.h);
    } else {
      const Corner cr = static_cast<Corner>(key / 2 - 5);
      const Side v = (cr == Corner::BottomLeft || cr == Corner::TopLeft) ? Side::Left : Side::Right;
      const Side hz = (cr == Corner::BottomLeft || cr == Corner::BottomRight) ? Side::Bottom : Side::Top;
      const auto spec = corner_spec(cr, op_.kind(v), op_.kind(hz));
      c.w = corner_stencil(spec, kh);
      c.t = corner_rhs(spec, k, G_.h);
    }
    return cache_.emplace(key, std::move(c)).first->second;
  }

  void build() {
    const int n = static_cast<int>(eliminated_.size());
    general_ = op_.curve && (op_.force_general || op_.k_plus != op_.k_minus);
    const int M = general_ ? kGeneralOrder : kSameKOrder;
    table_.assign(static_cast<std::size_t>(G_.points()), nullptr);
    std::vector<Eigen::Triplet<Complex, SparseIndex>> trips;
    trips.reserve(static_cast<std::size_t>(n) * 9);
    for (int j = 0; j <= G_.ny; ++j)
      for (int i = 0; i <= G_.nx; ++i) {
        const int node = G_.index(i, j);
        const int r = unknown_[static_cast<std::size_t>(node)];
        if (r < 0) continue;
        StencilWeights w;
        if (kind_[static_cast<std::size_t>(node)] == RowKind::Irregular) {
          const auto& ip = cls_.irregular[static_cast<std::size_t>(cls_.irregular_index[static_cast<std::size_t>(node)])];
          const auto b = project(*op_.curve, G_, i, j);
          const auto T = transmission(op_.curve->jet(b.t_star, M), normal_sign(*op_.curve, b.t_star, op_.normal_probe),
                                      op_.k_plus, op_.k_minus, M);
          max_condition_ = std::max(max_condition_, T.condition);
          auto S = general_ ? irregular_stencil_general(ip, b, T, op_.k_plus, op_.k_minus, G_.h)
                            : irregular_stencil_same_k(ip, b, T, op_.k_plus, G_.h);
          w = S.weights();
          irregular_row_[node] = static_cast<int>(irregular_.size());
          irregular_.push_back(std::move(S));
        } else {
          const Cached& c = regular_row(node, i, j);
          w = c.w;
          table_[static_cast<std::size_t>(node)] = &c.t;
        }
        const Real scale = std::pow(G_.h, -w.scale_power);
        for (std::size_t p = 0; p < w.offsets.size(); ++p) {
          const int a = i + w.offsets[p].di, bb = j + w.offsets[p].dj;
          if (a < 0 || bb < 0 || a > G_.nx || bb > G_.ny)
            throw InvalidIndexError("stencil of node (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") leaves the grid");
          const int col_node = G_.index(a, bb);
          const Complex c = w.coeffs[p] * scale;
          const int col = unknown_[static_cast<std::size_t>(col_node)];
          if (col < 0) eliminated_[static_cast<std::size_t>(r)].push_back({col_node, c});
          else trips.emplace_back(r, col, c);
        }
      }
    A_.resize(n, n);
    A_.setFromTriplets(trips.begin(), trips.end());
    A_.makeCompressed();
  }

  std::vector<Complex> dirichlet_values(const ProblemData& d) const {
    std::vector<Complex> u(static_cast<std::size_t>(G_.points()), Complex(0));
    for (int j = 0; j <= G_.ny; ++j)
      for (int i = 0; i <= G_.nx; ++i) {
        const auto id = static_cast<std::size_t>(G_.index(i, j));
        if (kind_[id] != RowKind::Dirichlet) continue;
        const auto& go = d.g[static_cast<std::size_t>(dside_[id])];
        if (!go) throw ConfigError("missing Dirichlet data for the " + to_string(dside_[id]) + " side");
        u[id] = go(1, G_.x(i), G_.y(j))[0];
      }
    return u;
  }

public:
  Real max_transmission_condition() const { return max_condition_; }

private:
  OperatorSpec op_;
  Grid G_;
  Classification cls_;
  std::vector<RowKind> kind_;
  std::vector<int> unknown_;
  std::vector<Side> dside_;
  std::vector<std::vector<std::pair<int, Complex>>> eliminated_;
  std::map<int, Cached> cache_;
  std::vector<const RhsWeightTable*> table_;
  std::map<int, int> irregular_row_;
  std::vector<IrregularStencil> irregular_;
  SparseMatrix A_;
  bool general_ = false;
  Real max_condition_ = 0;
};

// Sparse LU factorization reused across right-hand sides.
class LinearSolver {
public:
  explicit LinearSolver(const SparseMatrix& A, Real tol = 1e-10) : A_(A), tol_(tol) {
    lu_.compute(A_);
    if (lu_.info() != Eigen::Success)
      throw NumericalError("sparse factorization failed (UMFPACK status " +
                           std::to_string(lu_.umfpackFactorizeReturncode()) + ")");
  }

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) {
    Eigen::VectorXcd x = lu_.solve(b);
    if (lu_.info() != Eigen::Success) throw NumericalError("sparse solve failed");
    const Real nb = b.norm();
    residual_ = nb > 0 ? (A_ * x - b).norm() / nb : (A_ * x).norm();
    if (!(residual_ <= tol_)) throw NumericalError("solver residual " + std::to_string(residual_) + " above target");
    return x;
  }

  Real last_residual() const { return residual_; }

private:
  const SparseMatrix& A_;
  Eigen::UmfPackLU<SparseMatrix> lu_;
  Real tol_;
  Real residual_ = 0;
};

// ------------------------------------------------------------------ norms

struct ErrorPair {
  Real l2 = 0, inf = 0;
};

// Relative l2 error (h^2 weights) and absolute max error against u.
inline ErrorPair exact_errors(const Grid& G, const std::vector<Complex>& uh,
                              const std::function<Complex(Real, Real)>& u) {
  if (uh.size() != static_cast<std::size_t>(G.points())) throw InvalidIndexError("field does not match the grid");
  Real e2 = 0, u2 = 0, einf = 0;
  for (int j = 0; j <= G.ny; ++j)
    for (int i = 0; i <= G.nx; ++i) {
      const Complex ex = u(G.x(i), G.y(j));
      const Real e = std::abs(uh[static_cast<std::size_t>(G.index(i, j))] - ex);
      e2 += e * e;
      u2 += std::norm(ex);
      einf = std::max(einf, e);
    }
  const Real w = G.h * G.h;
  return {std::sqrt(w * e2) / std::sqrt(w * u2), einf};
}

// ||u_h - u_{h/2}|| on the coarse nodes, l2 with the coarse h^2 weight.
inline ErrorPair self_errors(const Grid& coarse, const std::vector<Complex>& uh, const Grid& fine,
                             const std::vector<Complex>& uh2) {
  if (fine.nx != 2 * coarse.nx || fine.ny != 2 * coarse.ny || std::abs(fine.h * 2 - coarse.h) > 1e-15 * coarse.h ||
      uh.size() != static_cast<std::size_t>(coarse.points()) || uh2.size() != static_cast<std::size_t>(fine.points()))
    throw InvalidIndexError("self-convergence needs the grid with exactly half the spacing");
  Real e2 = 0, einf = 0;
  for (int j = 0; j <= coarse.ny; ++j)
    for (int i = 0; i <= coarse.nx; ++i) {
      const Real e = std::abs(uh[static_cast<std::size_t>(coarse.index(i, j))] -
                              uh2[static_cast<std::size_t>(fine.index(2 * i, 2 * j))]);
      e2 += e * e;
      einf = std::max(einf, e);
    }
  return {std::sqrt(coarse.h * coarse.h * e2), einf};
}

inline Real convergence_order(Real e_coarse, Real e_fine) { return std::log2(e_coarse / e_fine); }

} // namespace helmfd
