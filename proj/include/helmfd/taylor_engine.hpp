#pragma once

#include <helmfd/reduction.hpp>
#include <helmfd/series.hpp>

#include <vector>

namespace helmfd {

// Boundary condition seen in a local frame where the boundary is X=0 (or
// Y=0) and the outward normal is -X (or -Y). Impedance means
// -u_X - i k u = g, Neumann means -u_X = g.
enum class EdgeBc { Free, Neumann, Impedance };

// Linear functional of the free data: coefficients of u^{(0,n)}, u^{(1,n)},
// f^{(m,n)} and the boundary data derivatives.
template <class S>
struct Functional {
  std::vector<S> u0;
  std::vector<S> u1;
  std::vector<S> f;  // indexed by lambda_set(D-2)
  std::vector<S> gx; // d^n/dY^n of the data on X=0
  std::vector<S> gy; // d^m/dX^m of the data on Y=0

  Functional() = default;
  Functional(int D, S zero)
      : u0(D + 1, zero), u1(D + 1, zero), f(lambda_set(std::max(D - 2, 0)).size(), zero),
        gx(D + 1, zero), gy(D + 1, zero) {}

  Functional& axpy(const S& a, const Functional& o) {
    auto go = [&](std::vector<S>& x, const std::vector<S>& y) {
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += a * y[i];
    };
    go(u0, o.u0);
    go(u1, o.u1);
    go(f, o.f);
    go(gx, o.gx);
    go(gy, o.gy);
    return *this;
  }
};

// Expands u at an offset (X,Y) from the expansion point by a Taylor
// polynomial of total degree D, then eliminates every derivative except
// the free ones using the PDE and the local boundary conditions. S is
// either Complex (numeric) or Series<Complex> (polynomial in kh, h=1).
template <class S>
class TaylorEngine {
public:
  TaylorEngine(int D, S k, S zero, EdgeBc bx = EdgeBc::Free, EdgeBc by = EdgeBc::Free)
      : D_(D), zero_(zero), bx_(bx), by_(by), fset_(lambda_set(std::max(D - 2, 0))) {
    kpow_.push_back(one());
    for (int p = 1; p <= D + 2; ++p) kpow_.push_back(kpow_.back() * k);
    ik_ = kpow_[1] * Complex(0, 1);
  }

  int degree() const { return D_; }
  const MultiIndexSet& f_index() const { return fset_; }

  template <class X>
  Functional<S> expand(X x, X y, Orientation o) const {
    Functional<S> out(D_, zero_);
    for (int d = 0; d <= D_; ++d)
      for (int m = d; m >= 0; --m) {
        const int n = d - m;
        const auto mono = scaled_monomial(x, y, m, n);
        if (mono == X(0)) continue;
        add_u(out, m, n, one() * Complex(mono), o);
      }
    return out;
  }

private:
  S one() const {
    S s = zero_;
    s += unit(zero_);
    return s;
  }
  static S unit(const S& z) {
    if constexpr (std::is_same_v<S, Complex>) {
      (void)z;
      return Complex(1);
    } else {
      S s = z;
      s[0] = Complex(1);
      return s;
    }
  }

  void add_u(Functional<S>& out, int m, int n, const S& w, Orientation o) const {
    const auto red = reduce_derivative(m, n, o);
    for (const auto& t : red.f_terms) {
      const int pos = fset_.position(t.index);
      if (pos < 0) continue; // beyond the truncation degree
      out.f[pos] += w * kpow_[t.k_power] * Complex(t.coef);
    }
    for (const auto& t : red.u_terms) {
      const S wt = w * kpow_[t.k_power] * Complex(t.coef);
      if (o == Orientation::XMajor) add_band_x(out, t.index.m, t.index.n, wt);
      else add_band_y(out, t.index.m, t.index.n, wt);
    }
  }

  void add_band_x(Functional<S>& out, int a, int b, const S& w) const {
    if (b > D_) return;
    if (a == 0) {
      out.u0[b] += w;
      return;
    }
    switch (bx_) {
    case EdgeBc::Free: out.u1[b] += w; break;
    case EdgeBc::Neumann: out.gx[b] -= w; break;
    case EdgeBc::Impedance:
      out.u0[b] -= w * ik_;
      out.gx[b] -= w;
      break;
    }
  }

  void add_band_y(Functional<S>& out, int a, int b, const S& w) const {
    if (a > D_) return;
    if (b == 0) {
      add_u(out, a, 0, w, Orientation::XMajor);
      return;
    }
    switch (by_) {
    case EdgeBc::Free: throw UnsupportedError("y-major expansion needs a boundary condition on Y=0");
    case EdgeBc::Neumann: out.gy[a] -= w; break;
    case EdgeBc::Impedance:
      add_u(out, a, 0, w * ik_ * Complex(-1), Orientation::XMajor);
      out.gy[a] -= w;
      break;
    }
  }

  int D_;
  S zero_;
  EdgeBc bx_, by_;
  MultiIndexSet fset_;
  std::vector<S> kpow_;
  S ik_;
};

using Poly = Series<Complex>;

// Engine with h=1 and k replaced by the symbol kh, truncated at degree D.
inline TaylorEngine<Poly> symbolic_engine(int D, EdgeBc bx = EdgeBc::Free, EdgeBc by = EdgeBc::Free) {
  return TaylorEngine<Poly>(D, Poly::variable(D + 2), Poly(D + 2), bx, by);
}

inline TaylorEngine<Complex> numeric_engine(int D, Real k, EdgeBc bx = EdgeBc::Free,
                                            EdgeBc by = EdgeBc::Free) {
  return TaylorEngine<Complex>(D, Complex(k), Complex(0), bx, by);
}

} // namespace helmfd
