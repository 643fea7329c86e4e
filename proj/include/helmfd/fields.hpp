#pragma once

#include <helmfd/geometry.hpp>
#include <helmfd/index_sets.hpp>
#include <helmfd/kernels.hpp>

#include <complex>
#include <vector>

namespace helmfd {

// Finite sum of terms P(x,y) exp(a x + b y) with complex polynomial P.
// Closed under differentiation and products, which is all the problem
// catalogue needs to hand exact derivatives to the schemes.
class Field {
public:
  struct Monomial {
    int i = 0, j = 0;
    Complex c;
  };
  struct Term {
    Complex a, b;
    std::vector<Monomial> poly;
  };

  Field() = default;

  static Field constant(Complex c) { return exponential(0, 0, c); }
  static Field exponential(Complex a, Complex b, Complex c = 1) {
    Field f;
    f.terms_.push_back({a, b, {{0, 0, c}}});
    return f;
  }
  static Field monomial(int i, int j, Complex c = 1) {
    Field f;
    f.terms_.push_back({0, 0, {{i, j, c}}});
    return f;
  }
  // sin(alpha x + beta y + phi) and cos(alpha x + beta y + phi).
  static Field sin_linear(Real alpha, Real beta, Real phi = 0) {
    const Complex e = std::exp(kI * phi);
    return exponential(kI * alpha, kI * beta, e / (2.0 * kI)) + exponential(-kI * alpha, -kI * beta, -1.0 / (e * 2.0 * kI));
  }
  static Field cos_linear(Real alpha, Real beta, Real phi = 0) {
    const Complex e = std::exp(kI * phi);
    return exponential(kI * alpha, kI * beta, e / 2.0) + exponential(-kI * alpha, -kI * beta, 1.0 / (e * 2.0));
  }

  const std::vector<Term>& terms() const { return terms_; }

  Field& operator+=(const Field& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    return *this;
  }
  Field& operator*=(Complex s) {
    for (auto& t : terms_)
      for (auto& m : t.poly) m.c *= s;
    return *this;
  }
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, Field b) { return a += (b *= -1.0); }
  friend Field operator*(Field a, Complex s) { return a *= s; }
  friend Field operator*(Complex s, Field a) { return a *= s; }
  friend Field operator*(const Field& a, const Field& b) {
    Field out;
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) {
        Term p{s.a + t.a, s.b + t.b, {}};
        for (const auto& m : s.poly)
          for (const auto& n : t.poly) p.poly.push_back({m.i + n.i, m.j + n.j, m.c * n.c});
        out.terms_.push_back(std::move(p));
      }
    return out;
  }

  Field dx() const { return differentiate(true); }
  Field dy() const { return differentiate(false); }
  Field laplacian() const { return dx().dx() + dy().dy(); }
  // Delta u + k^2 u.
  Field helmholtz(Real k) const { return laplacian() + (*this) * Complex(k * k); }

  Complex operator()(Real x, Real y) const { return deriv(0, 0, x, y); }

  // d^{m+n} / dx^m dy^n at (x,y), by the Leibniz formula per term.
  Complex deriv(int m, int n, Real x, Real y) const {
    Complex s = 0;
    for (const auto& t : terms_) {
      const Complex e = std::exp(t.a * x + t.b * y);
      Complex acc = 0;
      for (const auto& mo : t.poly) acc += mo.c * leibniz(mo, t.a, t.b, m, n, x, y);
      s += e * acc;
    }
    return s;
  }

  // All derivatives over an index set, sharing the exponentials.
  std::vector<Complex> derivs(const MultiIndexSet& I, Real x, Real y) const {
    std::vector<Complex> out(I.size(), Complex(0));
    for (const auto& t : terms_) {
      const Complex e = std::exp(t.a * x + t.b * y);
      for (std::size_t q = 0; q < I.size(); ++q) {
        Complex acc = 0;
        for (const auto& mo : t.poly) acc += mo.c * leibniz(mo, t.a, t.b, I[q].m, I[q].n, x, y);
        out[q] += e * acc;
      }
    }
    return out;
  }

private:
  static Complex leibniz(const Monomial& mo, Complex a, Complex b, int m, int n, Real x, Real y) {
    auto part = [](int i, int m, Complex a, Real x) {
      Complex s = 0;
      for (int al = 0; al <= std::min(m, i); ++al) {
        const Real c = binomial<Real>(m, al) * falling(i, al);
        s += c * ipow(x, i - al) * ipow(a, m - al);
      }
      return s;
    };
    return part(mo.i, m, a, x) * part(mo.j, n, b, y);
  }
  static Real falling(int i, int a) {
    Real r = 1;
    for (int q = 0; q < a; ++q) r *= i - q;
    return r;
  }

  Field differentiate(bool in_x) const {
    Field out;
    for (const auto& t : terms_) {
      Term d{t.a, t.b, {}};
      for (const auto& mo : t.poly) {
        const Complex f = in_x ? t.a : t.b;
        if (f != Complex(0)) d.poly.push_back({mo.i, mo.j, mo.c * f});
        const int p = in_x ? mo.i : mo.j;
        if (p > 0) d.poly.push_back({in_x ? mo.i - 1 : mo.i, in_x ? mo.j : mo.j - 1, mo.c * Real(p)});
      }
      if (!d.poly.empty()) out.terms_.push_back(std::move(d));
    }
    return out;
  }

  std::vector<Term> terms_;
};

// A field in one variable t (stored as x) seen as parametric data.
inline ParamData param_from_field(Field f) {
  return [f = std::move(f)](Real t, int order) {
    ComplexSeries s(order);
    Real fact = 1;
    for (int p = 0; p <= order; ++p) {
      if (p > 0) fact *= p;
      s[p] = f.deriv(p, 0, t, 0) / fact;
    }
    return s;
  };
}

// Taylor series in t of f(r(t), s(t)) from the curve jet.
inline ComplexSeries along_curve(const Field& f, const CurveJet& J) {
  const int N = std::min(J.r.degree(), J.s.degree());
  const ComplexSeries R = to_complex(J.r.truncated(N)), S = to_complex(J.s.truncated(N));
  ComplexSeries out(N);
  for (const auto& t : f.terms()) {
    const ComplexSeries e = exp(R * t.a + S * t.b);
    ComplexSeries P(N);
    for (const auto& mo : t.poly) {
      ComplexSeries mono(N, mo.c);
      for (int q = 0; q < mo.i; ++q) mono = mono * R;
      for (int q = 0; q < mo.j; ++q) mono = mono * S;
      P += mono;
    }
    out += P * e;
  }
  return out;
}

// Jump data [u] and [grad u . n] of a two-sided solution, as parametric
// data (the flux excludes the arc-length factor).
inline std::pair<ParamData, ParamData> jumps_from_solution(const Field& u_plus, const Field& u_minus,
                                                           std::shared_ptr<const InterfaceCurve> curve,
                                                           Real probe = 1e-7) {
  const Field d = u_plus - u_minus;
  const Field dx = d.dx(), dy = d.dy();
  ParamData g = [curve, d](Real t, int order) { return along_curve(d, curve->jet(t, order)); };
  ParamData gG = [curve, dx, dy, probe](Real t, int order) {
    const auto J = curve->jet(t, order + 1);
    const Real sigma = normal_sign(*curve, t, probe);
    const RealSeries dr = J.dr(), ds = J.ds();
    const ComplexSeries flux = (to_complex(ds) * along_curve(dx, J) - to_complex(dr) * along_curve(dy, J)) * Complex(sigma);
    return flux / to_complex(sqrt(dr * dr + ds * ds));
  };
  return {g, gG};
}

} // namespace helmfd
