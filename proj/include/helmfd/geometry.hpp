#pragma once

#include <helmfd/series.hpp>

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace helmfd {

using RealSeries = Series<Real>;
using ComplexSeries = Series<Complex>;

// Taylor coefficients of r and s at a parameter value: r(t+tau) = sum r[p] tau^p.
struct CurveJet {
  RealSeries r, s;
  RealSeries dr() const { return r.derivative(); }
  RealSeries ds() const { return s.derivative(); }
};

// Taylor coefficients of sin(w t) or cos(w t) around t0, truncated at N.
inline RealSeries trig_series(Real t0, Real w, int N, bool cosine) {
  RealSeries out(N);
  Real wp = 1, fact = 1;
  for (int p = 0; p <= N; ++p) {
    if (p > 0) {
      wp *= w;
      fact *= p;
    }
    const Real phase = w * t0 + p * std::numbers::pi / 2;
    out[p] = wp * (cosine ? std::cos(phase) : std::sin(phase)) / fact;
  }
  return out;
}

// Closed curve Gamma = {psi = 0} with a 2*pi periodic parametrization.
// psi > 0 marks Omega_plus.
class InterfaceCurve {
public:
  virtual ~InterfaceCurve() = default;
  virtual Real psi(Real x, Real y) const = 0;
  virtual CurveJet jet(Real t, int order) const = 0;
  virtual std::string name() const = 0;

  std::array<Real, 2> point(Real t) const {
    const auto J = jet(t, 0);
    return {J.r[0], J.s[0]};
  }
};

// Polar star rho(theta) = a + b sin(n theta); a circle when b = 0.
class StarCurve : public InterfaceCurve {
public:
  StarCurve(Real a, Real b, int n, std::string name) : a_(a), b_(b), n_(n), name_(std::move(name)) {
    if (a <= std::abs(b)) throw GeometryError("star curve radius must stay positive");
  }

  Real rho(Real t) const { return a_ + b_ * std::sin(n_ * t); }

  Real psi(Real x, Real y) const override {
    const Real r = rho(std::atan2(y, x));
    return x * x + y * y - r * r;
  }

  CurveJet jet(Real t, int order) const override {
    RealSeries rho_s = b_ * trig_series(t, n_, order, false);
    rho_s[0] += a_;
    return {rho_s * trig_series(t, 1, order, true), rho_s * trig_series(t, 1, order, false)};
  }

  std::string name() const override { return name_; }

private:
  Real a_, b_;
  int n_;
  std::string name_;
};

// Axis-aligned ellipse (x/ax)^2 + (y/ay)^2 = 1, r = ax cos t, s = ay sin t.
class EllipseCurve : public InterfaceCurve {
public:
  EllipseCurve(Real ax, Real ay, std::string name) : ax_(ax), ay_(ay), name_(std::move(name)) {}

  Real psi(Real x, Real y) const override { return (x / ax_) * (x / ax_) + (y / ay_) * (y / ay_) - 1; }

  CurveJet jet(Real t, int order) const override {
    return {ax_ * trig_series(t, 1, order, true), ay_ * trig_series(t, 1, order, false)};
  }

  std::string name() const override { return name_; }

private:
  Real ax_, ay_;
  std::string name_;
};

// Named curves used by the interface experiments.
inline std::shared_ptr<InterfaceCurve> make_curve(const std::string& name) {
  if (name == "five-star") return std::make_shared<StarCurve>(0.2, 0.08, 5, name);
  if (name == "eight-star") return std::make_shared<StarCurve>(0.2, 0.05, 8, name);
  if (name == "ellipse") return std::make_shared<EllipseCurve>(1.0, 0.5, name);
  if (name == "circle") return std::make_shared<StarCurve>(0.3, 0.0, 1, name);
  throw ConfigError("unknown curve '" + name + "'");
}

// ------------------------------------------------------------------ grid

// Uniform grid x_i = x0 + i h, y_j = y0 + j h, i=0..nx, j=0..ny.
struct Grid {
  Real x0 = 0, y0 = 0, h = 1;
  int nx = 1, ny = 1;

  Real x(int i) const { return x0 + i * h; }
  Real y(int j) const { return y0 + j * h; }
  int index(int i, int j) const { return j * (nx + 1) + i; }
  int points() const { return (nx + 1) * (ny + 1); }
  bool on_boundary(int i, int j) const { return i == 0 || j == 0 || i == nx || j == ny; }
};

inline Grid square_grid(Real l1, Real l2, int J) {
  const int N = 1 << J;
  return {l1, l1, (l2 - l1) / N, N, N};
}

enum class PointKind { RegularInterior, RegularBoundary, Corner, Irregular };

// Footprint slot of offset (di,dj), di,dj in {-1,0,1}.
inline constexpr int slot(int di, int dj) { return (dj + 1) * 3 + (di + 1); }

struct IrregularPoint {
  int i = 0, j = 0;
  std::array<bool, 9> plus{}; // footprint point lies in d+ (psi > 0)
};

struct Classification {
  std::vector<PointKind> kind;
  std::vector<signed char> side; // +1 in Omega_plus, -1 otherwise
  std::vector<IrregularPoint> irregular;
  std::vector<int> irregular_index; // grid index -> position in irregular, or -1
};

// Points on the sides flagged in eliminated (Left, Right, Bottom, Top) carry
// no stencil, so a straddled footprint there is harmless.
inline Classification classify(const Grid& G, const InterfaceCurve* curve, std::array<bool, 4> eliminated = {}) {
  Classification C;
  const int P = G.points();
  C.kind.assign(static_cast<std::size_t>(P), PointKind::RegularInterior);
  C.side.assign(static_cast<std::size_t>(P), -1);
  C.irregular_index.assign(static_cast<std::size_t>(P), -1);
  for (int j = 0; j <= G.ny; ++j)
    for (int i = 0; i <= G.nx; ++i) {
      const auto id = static_cast<std::size_t>(G.index(i, j));
      const bool corner = (i == 0 || i == G.nx) && (j == 0 || j == G.ny);
      C.kind[id] = corner ? PointKind::Corner : (G.on_boundary(i, j) ? PointKind::RegularBoundary : PointKind::RegularInterior);
      if (curve) C.side[id] = curve->psi(G.x(i), G.y(j)) > 0 ? 1 : -1;
      else C.side[id] = 1;
    }
  if (!curve) return C;
  for (int j = 0; j <= G.ny; ++j)
    for (int i = 0; i <= G.nx; ++i) {
      IrregularPoint ip{i, j, {}};
      int np = 0, nm = 0;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int a = i + di, b = j + dj;
          if (a < 0 || b < 0 || a > G.nx || b > G.ny) continue;
          const bool p = C.side[static_cast<std::size_t>(G.index(a, b))] > 0;
          ip.plus[static_cast<std::size_t>(slot(di, dj))] = p;
          (p ? np : nm)++;
        }
      if (np == 0 || nm == 0) continue;
      if (G.on_boundary(i, j)) {
        if ((i == 0 && eliminated[0]) || (i == G.nx && eliminated[1]) || (j == 0 && eliminated[2]) ||
            (j == G.ny && eliminated[3]))
          continue;
        throw UnsupportedError("interface crosses the stencil of boundary point (" + std::to_string(i) + "," +
                               std::to_string(j) + ")");
      }
      C.kind[static_cast<std::size_t>(G.index(i, j))] = PointKind::Irregular;
      C.irregular_index[static_cast<std::size_t>(G.index(i, j))] = static_cast<int>(C.irregular.size());
      C.irregular.push_back(ip);
    }
  return C;
}

// ------------------------------------------------------------ projection

struct BasePoint {
  Real x_star = 0, y_star = 0, t_star = 0;
  Real v0 = 0, w0 = 0;
  int i = 0, j = 0;
  bool orthogonal = true; // false when the in-cell fallback was used
};

struct ProjectionOptions {
  int samples = 720;
  Real tol = 1e-13;
  int max_iter = 50;
  int reseeds = 8;
  Real cell_margin = 1e-10; // fallback base points keep |v0|,|w0| <= 1 - margin
};

namespace detail {

// Stationarity function F(t) = (x-r)r' + (y-s)s' and its derivative.
inline std::array<Real, 2> stationarity(const InterfaceCurve& C, Real x, Real y, Real t) {
  const auto J = C.jet(t, 2);
  const Real r = J.r[0], s = J.s[0], r1 = J.r[1], s1 = J.s[1], r2 = 2 * J.r[2], s2 = 2 * J.s[2];
  return {(x - r) * r1 + (y - s) * s1, -(r1 * r1 + s1 * s1) + (x - r) * r2 + (y - s) * s2};
}

inline std::optional<Real> newton(const InterfaceCurve& C, Real x, Real y, Real t, Real lo, Real hi,
                                  const ProjectionOptions& o) {
  for (int it = 0; it < o.max_iter; ++it) {
    const auto [F, dF] = stationarity(C, x, y, t);
    if (dF == 0) return std::nullopt;
    const Real dt = F / dF;
    t -= dt;
    if (t < lo || t > hi) return std::nullopt;
    if (std::abs(dt) <= o.tol) return t;
  }
  return std::nullopt;
}

// Bisection for a sign change of f on [lo, hi].
template <class F>
std::optional<Real> bisect(F&& f, Real lo, Real hi, Real tol) {
  Real flo = f(lo);
  if (flo * f(hi) > 0) return std::nullopt;
  while (hi - lo > tol) {
    const Real mid = 0.5 * (lo + hi);
    const Real fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline Real dist2(const InterfaceCurve& C, Real x, Real y, Real t) {
  const auto p = C.point(t);
  return (p[0] - x) * (p[0] - x) + (p[1] - y) * (p[1] - y);
}

// Stationary points of the distance seeded from the closest samples,
// ordered by distance.
inline std::vector<Real> stationary_feet(const InterfaceCurve& C, Real x, Real y, const ProjectionOptions& o) {
  const Real dt = 2 * std::numbers::pi / o.samples;
  std::vector<std::pair<Real, int>> d2;
  for (int s = 0; s < o.samples; ++s) d2.push_back({dist2(C, x, y, s * dt), s});
  const int R = std::min(o.reseeds, o.samples);
  std::partial_sort(d2.begin(), d2.begin() + R, d2.end());
  std::vector<std::pair<Real, Real>> found;
  for (int r = 0; r < R; ++r) {
    const Real seed = d2[static_cast<std::size_t>(r)].second * dt;
    auto t = newton(C, x, y, seed, seed - 2 * dt, seed + 2 * dt, o);
    if (!t) t = bisect([&](Real u) { return stationarity(C, x, y, u)[0]; }, seed - dt, seed + dt, o.tol);
    if (t) found.push_back({dist2(C, x, y, *t), *t});
  }
  std::sort(found.begin(), found.end());
  std::vector<Real> out;
  for (const auto& f : found) out.push_back(f.second);
  return out;
}

} // namespace detail

// Orthogonal projection of an arbitrary point: the parameter of the
// nearest stationary point of the distance.
inline Real project_point(const InterfaceCurve& C, Real x, Real y, const ProjectionOptions& o = {}) {
  const auto feet = detail::stationary_feet(C, x, y, o);
  if (feet.empty()) throw GeometryError("projection did not converge");
  return feet.front();
}

// Base point of grid point (i,j): the orthogonal projection when it falls
// in the open cell (-1,1)^2 around the point; otherwise the point of Gamma
// nearest to (x_i,y_j) inside the cell shrunk by cell_margin.
inline BasePoint project(const InterfaceCurve& C, const Grid& G, int i, int j, const ProjectionOptions& o = {}) {
  const Real x = G.x(i), y = G.y(j);
  auto make = [&](Real t, bool orth) {
    const auto p = C.point(t);
    return BasePoint{p[0], p[1], t, (x - p[0]) / G.h, (y - p[1]) / G.h, i, j, orth};
  };
  for (Real t : detail::stationary_feet(C, x, y, o)) {
    const auto b = make(t, true);
    if (std::abs(b.v0) < 1 && std::abs(b.w0) < 1) return b;
  }
  // Fallback: minimize the distance over the parameter runs inside the
  // shrunk cell; a constrained minimizer is a stationary point or a run end.
  const Real lim = 1 - o.cell_margin;
  auto excess = [&](Real t) {
    const auto p = C.point(t);
    return std::max(std::abs(x - p[0]), std::abs(y - p[1])) / G.h - lim;
  };
  const int n = 8 * o.samples;
  const Real dt = 2 * std::numbers::pi / n;
  std::optional<BasePoint> best;
  Real bestd = std::numeric_limits<Real>::infinity();
  auto consider = [&](Real t) {
    if (excess(t) > 1e-12) return;
    const Real d = detail::dist2(C, x, y, t);
    if (d < bestd) {
      bestd = d;
      best = make(t, false);
    }
  };
  std::vector<Real> e(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) e[static_cast<std::size_t>(s)] = excess(s * dt);
  auto at = [&](int s) { return e[static_cast<std::size_t>((s + n) % n)]; };
  auto ends = [&](Real t0, Real t1) {
    const bool in0 = excess(t0) < 0;
    if (auto t = detail::bisect(excess, t0, t1, o.tol)) consider(in0 ? *t - o.tol : *t + o.tol);
  };
  for (int s = 0; s < n; ++s) {
    const Real t0 = s * dt, t1 = t0 + dt;
    if (at(s) < 0) consider(t0);
    if ((at(s) < 0) != (at(s + 1) < 0)) ends(t0, t1);
    // Short runs that slip between samples (curve clipping a cell corner).
    if (at(s) >= 0 && at(s) <= at(s - 1) && at(s) <= at(s + 1)) {
      const auto [tm, em] = boost::math::tools::brent_find_minima(excess, t0 - dt, t1, 52);
      if (em < 0) {
        consider(tm);
        ends(t0 - dt, tm);
        ends(tm, t1);
      }
    }
  }
  if (!best) throw GeometryError("no base point in the cell of grid point (" + std::to_string(i) + "," + std::to_string(j) + ")");
  return *best;
}

// Orientation factor sigma with n = sigma (s', -r') / |gamma'| pointing into
// Omega_plus, decided by probing psi at distance eps along the normal.
inline Real normal_sign(const InterfaceCurve& C, Real t, Real eps) {
  const auto J = C.jet(t, 1);
  const Real nx = J.s[1], ny = -J.r[1], len = std::hypot(nx, ny);
  if (len == 0) throw GeometryError("degenerate parametrization");
  return C.psi(J.r[0] + eps * nx / len, J.s[0] + eps * ny / len) > 0 ? 1.0 : -1.0;
}

// --------------------------------------------------------------- jump data

// Parametric datum t -> Taylor series of degree `order` at t.
using ParamData = std::function<ComplexSeries(Real t, int order)>;

inline ParamData constant_param(Complex c) {
  return [c](Real, int order) { return ComplexSeries(order, c); };
}

struct JumpData {
  std::vector<Complex> g;      // p = 0..M
  std::vector<Complex> gGamma; // p = 0..M-1, arc-length factor included
};

inline ComplexSeries to_complex(const RealSeries& s) {
  ComplexSeries out(s.degree());
  for (int i = 0; i <= s.degree(); ++i) out[i] = s[i];
  return out;
}

inline JumpData jump_coefficients(const ParamData& g, const ParamData& gGamma, const InterfaceCurve& C, Real t, int M) {
  const auto J = C.jet(t, M);
  const RealSeries speed = sqrt(J.dr() * J.dr() + J.ds() * J.ds());
  const auto gs = g(t, M);
  const auto gGs = gGamma(t, M - 1) * to_complex(speed);
  if (gs.degree() < M || gGs.degree() < M - 1) throw InvalidIndexError("jump data series too short");
  JumpData out;
  for (int p = 0; p <= M; ++p) out.g.push_back(gs[p]);
  for (int p = 0; p < M; ++p) out.gGamma.push_back(gGs[p]);
  return out;
}

} // namespace helmfd
