#pragma once

#include <helmfd/types.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace helmfd {

// Power series a_0 + a_1 t + ... + a_N t^N, truncated at degree N.
// Also used as a polynomial in kh when N is large enough.
template <class S>
class Series {
public:
  Series() = default;
  explicit Series(int degree, S c0 = S(0)) : c_(static_cast<std::size_t>(degree + 1), S(0)) { c_[0] = c0; }
  Series(int degree, std::vector<S> coeffs) : c_(static_cast<std::size_t>(degree + 1), S(0)) {
    for (std::size_t i = 0; i < coeffs.size() && i < c_.size(); ++i) c_[i] = coeffs[i];
  }

  static Series variable(int degree) {
    Series s(degree);
    if (degree >= 1) s.c_[1] = S(1);
    return s;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  S& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  const S& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  S coeff(int i) const { return (i >= 0 && i <= degree()) ? c_[static_cast<std::size_t>(i)] : S(0); }
  const std::vector<S>& coeffs() const { return c_; }

  template <class X>
  auto operator()(X t) const {
    decltype(S(0) * t) acc(0);
    for (int i = degree(); i >= 0; --i) acc = acc * t + c_[static_cast<std::size_t>(i)];
    return acc;
  }

  Series& operator+=(const Series& o) {
    grow(o.degree());
    for (int i = 0; i <= o.degree(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Series& operator-=(const Series& o) {
    grow(o.degree());
    for (int i = 0; i <= o.degree(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Series& operator*=(S s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator-(Series a) { return a *= S(-1); }
  friend Series operator*(Series a, S s) { return a *= s; }
  friend Series operator*(S s, Series a) { return a *= s; }

  // Product truncated at the smaller of the two degrees.
  friend Series operator*(const Series& a, const Series& b) {
    const int N = std::min(a.degree(), b.degree());
    Series out(N);
    for (int i = 0; i <= N; ++i) {
      if (a.c_[i] == S(0)) continue;
      for (int j = 0; i + j <= N; ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return out;
  }

  friend Series operator/(const Series& a, const Series& b) {
    if (b.c_[0] == S(0)) throw NumericalError("series division by a series with zero constant term");
    const int N = std::min(a.degree(), b.degree());
    Series out(N);
    for (int i = 0; i <= N; ++i) {
      S acc = a.c_[i];
      for (int j = 1; j <= i; ++j) acc -= b.c_[j] * out.c_[i - j];
      out.c_[i] = acc / b.c_[0];
    }
    return out;
  }

  Series derivative() const {
    Series out(std::max(degree() - 1, 0));
    for (int i = 1; i <= degree(); ++i) out.c_[i - 1] = S(i) * c_[i];
    return out;
  }

  Series truncated(int N) const { return Series(N, c_); }

private:
  void grow(int d) {
    if (d > degree()) c_.resize(static_cast<std::size_t>(d + 1), S(0));
  }
  std::vector<S> c_{S(0)};
};

template <class S>
Series<S> sqrt(const Series<S>& a) {
  using std::sqrt;
  if (a[0] == S(0)) throw NumericalError("series sqrt of a series with zero constant term");
  const int N = a.degree();
  Series<S> out(N);
  out[0] = sqrt(a[0]);
  for (int i = 1; i <= N; ++i) {
    S acc = a[i];
    for (int j = 1; j < i; ++j) acc -= out[j] * out[i - j];
    out[i] = acc / (S(2) * out[0]);
  }
  return out;
}

template <class S>
Series<S> exp(const Series<S>& a) {
  using std::exp;
  const int N = a.degree();
  Series<S> out(N);
  out[0] = exp(a[0]);
  // b' = a' b
  for (int i = 1; i <= N; ++i) {
    S acc(0);
    for (int j = 1; j <= i; ++j) acc += S(j) * a[j] * out[i - j];
    out[i] = acc / S(i);
  }
  return out;
}

template <class S>
Series<S> pow(const Series<S>& a, int e) {
  Series<S> out(a.degree(), S(1));
  for (int i = 0; i < e; ++i) out = out * a;
  return out;
}

} // namespace helmfd
