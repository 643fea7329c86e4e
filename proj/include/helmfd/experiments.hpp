#pragma once

#include <helmfd/assembly.hpp>
#include <helmfd/fields.hpp>

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace helmfd {

// ---------------------------------------------------------------- oracles

inline DerivOracle field_oracle(Field f) {
  return [f = std::move(f)](const MultiIndexSet& I, Real x, Real y) { return f.derivs(I, x, y); };
}

// Derivatives of g along side s.
inline SideOracle side_oracle(Field g, Side s) {
  const bool vertical = s == Side::Left || s == Side::Right;
  return [g = std::move(g), vertical](int count, Real x, Real y) {
    std::vector<Complex> v(static_cast<std::size_t>(count));
    for (int n = 0; n < count; ++n) v[static_cast<std::size_t>(n)] = vertical ? g.deriv(0, n, x, y) : g.deriv(n, 0, x, y);
    return v;
  };
}

// B u on side s: u, the outward normal derivative, or that minus i k u.
inline Field boundary_operator(const Field& u, Side s, BoundaryKind b, Real k) {
  if (b == BoundaryKind::Dirichlet) return u;
  const bool vertical = s == Side::Left || s == Side::Right;
  const Real sign = (s == Side::Left || s == Side::Bottom) ? -1.0 : 1.0;
  Field g = (vertical ? u.dx() : u.dy()) * Complex(sign);
  if (b == BoundaryKind::Impedance) g = g - u * (kI * k);
  return g;
}

// Curvature |x'y'' - x''y'| / |r'|^3 as parametric data.
inline ParamData curvature_param(std::shared_ptr<const InterfaceCurve> curve, Real scale = 1) {
  return [curve, scale](Real t, int order) {
    const auto J = curve->jet(t, order + 2);
    const RealSeries dr = J.dr(), ds = J.ds();
    const RealSeries d2r = dr.derivative(), d2s = ds.derivative();
    const RealSeries a = dr.truncated(order), b = ds.truncated(order);
    RealSeries N = a * d2s.truncated(order) - d2r.truncated(order) * b;
    if (N[0] < 0) N = N * RealSeries(order, -1.0);
    const RealSeries sp = sqrt(a * a + b * b);
    return to_complex(N / (sp * sp * sp)) * Complex(scale);
  };
}

// ---------------------------------------------------------------- catalog

struct ExperimentConfig {
  std::string example = "ex1";
  int J_min = 0, J_max = -1;  // negative: example default
  std::vector<Real> k;        // example dependent; empty for defaults
  int angles = 30;
  Real alpha = NAN, beta = NAN, K = NAN;
  bool force_general = false;
  bool allow_large = false;
};

// One right-hand side; exact is empty when the solution is unknown.
struct Case {
  ProblemData data;
  std::function<Complex(Real, Real)> exact;
};

struct Problem {
  std::string id;
  Real l1 = 0, l2 = 1;
  OperatorSpec op;
  std::vector<Case> cases;
  int J_min = 4, J_max = 6;
  bool self_convergence = false;
  bool interface() const { return static_cast<bool>(op.curve); }
};

namespace detail {

inline Real pick(Real v, Real fallback) { return std::isnan(v) ? fallback : v; }

inline std::array<SideOracle, 4> sides_from(const Field& u, const std::array<BoundaryKind, 4>& bc, Real k) {
  std::array<SideOracle, 4> g;
  for (int s = 0; s < 4; ++s) {
    const Side side = static_cast<Side>(s);
    g[static_cast<std::size_t>(s)] = side_oracle(boundary_operator(u, side, bc[static_cast<std::size_t>(s)], k), side);
  }
  return g;
}

inline std::array<SideOracle, 4> sides_from(const std::array<Field, 4>& g) {
  std::array<SideOracle, 4> out;
  for (int s = 0; s < 4; ++s) out[static_cast<std::size_t>(s)] = side_oracle(g[static_cast<std::size_t>(s)], static_cast<Side>(s));
  return out;
}

inline std::function<Complex(Real, Real)> exact_of(Field u) {
  return [u = std::move(u)](Real x, Real y) { return u(x, y); };
}

inline std::function<Complex(Real, Real)> exact_of(Field up, Field um, std::shared_ptr<const InterfaceCurve> c) {
  return [up = std::move(up), um = std::move(um), c](Real x, Real y) { return c->psi(x, y) > 0 ? up(x, y) : um(x, y); };
}

constexpr std::array<BoundaryKind, 4> kAllDirichlet{BoundaryKind::Dirichlet, BoundaryKind::Dirichlet,
                                                    BoundaryKind::Dirichlet, BoundaryKind::Dirichlet};
// Impedance left, Dirichlet right, Neumann bottom, impedance top.
constexpr std::array<BoundaryKind, 4> kMixed{BoundaryKind::Impedance, BoundaryKind::Dirichlet, BoundaryKind::Neumann,
                                             BoundaryKind::Impedance};

inline Real one_k(const ExperimentConfig& c, Real fallback) {
  if (c.k.size() > 1) throw ConfigError(c.example + " takes a single wavenumber");
  return c.k.empty() ? fallback : c.k[0];
}

inline std::pair<Real, Real> two_k(const ExperimentConfig& c, Real kp, Real km) {
  if (c.k.empty()) return {kp, km};
  if (c.k.size() == 1) return {c.k[0], c.k[0]};
  if (c.k.size() == 2) return {c.k[0], c.k[1]};
  throw ConfigError(c.example + " takes at most two wavenumbers (k+, k-)");
}

} // namespace detail

inline const std::vector<std::string>& example_ids() {
  static const std::vector<std::string> ids{"ex1", "ex2", "ex3", "ex4", "iface1", "iface2", "iface3", "iface4"};
  return ids;
}

inline Problem make_problem(const ExperimentConfig& c) {
  using namespace detail;
  using std::numbers::pi;
  Problem P;
  P.id = c.example;
  P.op.force_general = c.force_general;
  if (c.example == "ex1") {
    const Real k = one_k(c, 50);
    if (c.angles < 1) throw ConfigError("ex1 needs at least one angle");
    P.op.k_plus = P.op.k_minus = k;
    P.op.bc = kAllDirichlet;
    for (int q = 0; q < c.angles; ++q) {
      const Real th = 2 * pi * q / c.angles;
      const Field u = Field::exponential(kI * k * std::cos(th), kI * k * std::sin(th));
      P.cases.push_back({{field_oracle(Field()), field_oracle(Field()), sides_from(u, P.op.bc, k), {}, {}}, exact_of(u)});
    }
    P.J_min = 4;
    P.J_max = 7;
  } else if (c.example == "ex2" || c.example == "ex3") {
    const bool two = c.example == "ex2";
    const Real k = one_k(c, two ? 300 : 450);
    const Real a = pick(c.alpha, two ? 50 : 400), b = pick(c.beta, two ? 290 : 200);
    P.op.k_plus = P.op.k_minus = k;
    P.op.bc = two ? std::array{BoundaryKind::Dirichlet, BoundaryKind::Dirichlet, BoundaryKind::Dirichlet,
                               BoundaryKind::Impedance}
                  : kMixed;
    const Field u = two ? (Field::monomial(0, 1) - Field::constant(1)) * Field::cos_linear(a, 0) * Field::sin_linear(0, b, -b)
                        : Field::sin_linear(a, b);
    P.cases.push_back({{field_oracle(u.helmholtz(k)), field_oracle(u.helmholtz(k)), sides_from(u, P.op.bc, k), {}, {}},
                       exact_of(u)});
    P.J_min = two ? 7 : 8;
    P.J_max = 9;
  } else if (c.example == "ex4") {
    const Real k = one_k(c, 200);
    P.op.k_plus = P.op.k_minus = k;
    P.op.bc = kMixed;
    const Field f = Field::sin_linear(2 * pi, 0) * Field::sin_linear(0, 2 * pi) * Complex(k * k);
    const std::array<Field, 4> g{Field::sin_linear(0, pi), Field(), Field::sin_linear(pi, 0), Field::sin_linear(pi, 0)};
    P.cases.push_back({{field_oracle(f), field_oracle(f), sides_from(g), {}, {}}, {}});
    P.self_convergence = true;
    P.J_min = 4;
    P.J_max = 8;
  } else if (c.example == "iface1") {
    const Real k = one_k(c, 400);
    P.l1 = -0.5;
    P.l2 = 0.5;
    P.op.k_plus = P.op.k_minus = k;
    P.op.bc = kMixed;
    P.op.curve = make_curve("eight-star");
    const Field up = Field::sin_linear(280, 0) * Field::cos_linear(0, 280), um = up + Field::constant(3);
    P.cases.push_back({{field_oracle(up.helmholtz(k)), field_oracle(um.helmholtz(k)), sides_from(up, P.op.bc, k),
                        constant_param(-3.0), constant_param(0.0)},
                       exact_of(up, um, P.op.curve)});
    P.J_min = 8;
    P.J_max = 9;
  } else if (c.example == "iface2") {
    const auto [kp, km] = two_k(c, 0, 0);
    P.l1 = -1.5;
    P.l2 = 1.5;
    P.op.k_plus = kp;
    P.op.k_minus = km;
    P.op.bc = kAllDirichlet;
    P.op.curve = make_curve("ellipse");
    const Real w = 4 * pi;
    const Field fp = Field::sin_linear(w, 0) * Field::sin_linear(0, w) * Complex(w * w);
    const Field fm = Field::cos_linear(w, w) * Complex(w * w);
    const auto kappa = curvature_param(P.op.curve, -1.0);
    P.cases.push_back({{field_oracle(fp), field_oracle(fm), sides_from({Field(), Field(), Field(), Field()}), kappa, kappa}, {}});
    P.self_convergence = true;
    P.J_min = 2;
    P.J_max = 8;
  } else if (c.example == "iface3") {
    const auto [kp, km] = two_k(c, 90, 100);
    const Real K = pick(c.K, 70);
    P.l1 = -0.5;
    P.l2 = 0.5;
    P.op.k_plus = kp;
    P.op.k_minus = km;
    P.op.bc = kAllDirichlet;
    P.op.curve = make_curve("circle");
    const Field up = Field::cos_linear(K, K);
    const Field um = up + Field::monomial(2, 0, 40) + Field::monomial(0, 2, 40) + Field::monomial(1, 1, 20);
    // Jumps as functions of the polar angle on the circle of radius 3/10.
    const Field sc = Field::sin_linear(2, 0) * Complex(0.5);
    const ParamData g = param_from_field(Field::constant(-18.0 / 5) - sc * Complex(9.0 / 5));
    const ParamData gG = param_from_field(Field::constant(-24.0) - sc * Complex(12.0));
    P.cases.push_back({{field_oracle(up.helmholtz(kp)), field_oracle(um.helmholtz(km)), sides_from(up, P.op.bc, kp), g, gG},
                       exact_of(up, um, P.op.curve)});
    P.J_min = 7;
    P.J_max = 9;
  } else if (c.example == "iface4") {
    const auto [kp, km] = two_k(c, 10, 1);
    P.l1 = -0.5;
    P.l2 = 0.5;
    P.op.k_plus = kp;
    P.op.k_minus = km;
    P.op.bc = kAllDirichlet;
    P.op.curve = make_curve("five-star");
    const Real w = 2 * pi;
    const Field fp = Field::sin_linear(w, 0) * Field::sin_linear(0, w), fm = Field::cos_linear(w, 0) * Field::cos_linear(0, w);
    P.cases.push_back({{field_oracle(fp), field_oracle(fm), sides_from({Field(), Field(), Field(), Field()}),
                        param_from_field(Field::sin_linear(1, 0)), param_from_field(Field::cos_linear(1, 0))},
                       {}});
    P.self_convergence = true;
    P.J_min = 6;
    P.J_max = 8;
  } else {
    throw ConfigError("unknown example '" + c.example + "'");
  }
  if (c.J_max >= 0) {
    P.J_min = c.J_min;
    P.J_max = c.J_max;
  }
  if (P.J_min < 1 || P.J_max < P.J_min) throw ConfigError("invalid J range");
  return P;
}

// Largest J solved without the override: direct factorization memory.
inline int memory_bound(const Problem& P) { return P.interface() ? 9 : 10; }

// ------------------------------------------------------------------ runner

struct ResultRow {
  int J = 0;
  Real h = 0, ppw = 0;
  Real err_l2 = 0, err_inf = 0;
  std::optional<Real> order_l2, order_inf;
  Real residual = 0;  // largest solver residual at this level
};

struct Solution {
  Grid grid;
  std::vector<std::vector<Complex>> fields;  // one per case
  Real residual = 0;
};

inline Solution solve_level(const Problem& P, int J) {
  Solution s{square_grid(P.l1, P.l2, J), {}, 0};
  const Discretization D(P.op, s.grid);
  LinearSolver S(D.matrix());
  for (const auto& c : P.cases) {
    s.fields.push_back(D.expand(S.solve(D.rhs(c.data)), c.data));
    s.residual = std::max(s.residual, S.last_residual());
  }
  return s;
}

// Rows ordered by J; errors averaged over cases (the plane-wave protocol
// for a multi-angle problem).
inline std::vector<ResultRow> run(const Problem& P, bool allow_large = false) {
  const int finest = P.J_max + (P.self_convergence ? 1 : 0);
  if (!allow_large && finest > memory_bound(P))
    throw ResourceError(P.id + ": J = " + std::to_string(finest) + " exceeds the memory bound J <= " +
                        std::to_string(memory_bound(P)) + " (override to run anyway)");
  const Real kmax = std::max(P.op.k_plus, P.op.k_minus);
  std::vector<ResultRow> rows;
  std::optional<Solution> prev;
  for (int J = P.J_min; J <= finest; ++J) {
    Solution cur = solve_level(P, J);
    auto make_row = [&](const Solution& s, int level, auto&& err) {
      ResultRow r;
      r.J = level;
      r.h = s.grid.h;
      r.ppw = kmax > 0 ? 2 * std::numbers::pi / (kmax * s.grid.h) : INFINITY;
      r.residual = s.residual;
      for (std::size_t q = 0; q < P.cases.size(); ++q) {
        const ErrorPair e = err(q);
        r.err_l2 += e.l2;
        r.err_inf += e.inf;
      }
      r.err_l2 /= static_cast<Real>(P.cases.size());
      r.err_inf /= static_cast<Real>(P.cases.size());
      if (!rows.empty()) {
        r.order_l2 = convergence_order(rows.back().err_l2, r.err_l2);
        r.order_inf = convergence_order(rows.back().err_inf, r.err_inf);
      }
      rows.push_back(r);
    };
    if (!P.self_convergence) {
      make_row(cur, J, [&](std::size_t q) { return exact_errors(cur.grid, cur.fields[q], P.cases[q].exact); });
    } else if (prev) {
      const Solution& c0 = *prev;
      make_row(c0, J - 1, [&](std::size_t q) { return self_errors(c0.grid, c0.fields[q], cur.grid, cur.fields[q]); });
      rows.back().residual = std::max(c0.residual, cur.residual);
    }
    prev = std::move(cur);
  }
  return rows;
}

inline std::vector<ResultRow> run(const ExperimentConfig& c) { return run(make_problem(c), c.allow_large); }

// -------------------------------------------------------------------- CSV

inline const char* kCsvHeader = "J,h,ppw,err_l2,order_l2,err_inf,order_inf";

inline std::string format_sci(Real v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

inline void write_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.J << ',' << format_sci(r.h) << ',' << format_sci(r.ppw) << ',' << format_sci(r.err_l2) << ','
       << (r.order_l2 ? format_sci(*r.order_l2) : "") << ',' << format_sci(r.err_inf) << ','
       << (r.order_inf ? format_sci(*r.order_inf) : "") << '\n';
  }
}

inline void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  write_csv(rows, f);
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

inline std::vector<ResultRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw IoError("not a results file");
  std::vector<ResultRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 7) throw IoError("malformed row '" + line + "'");
    ResultRow r;
    r.J = std::stoi(f[0]);
    r.h = std::stod(f[1]);
    r.ppw = std::strtod(f[2].c_str(), nullptr);
    r.err_l2 = std::stod(f[3]);
    if (!f[4].empty()) r.order_l2 = std::stod(f[4]);
    r.err_inf = std::stod(f[5]);
    if (!f[6].empty()) r.order_inf = std::stod(f[6]);
    rows.push_back(r);
  }
  return rows;
}

} // namespace helmfd
