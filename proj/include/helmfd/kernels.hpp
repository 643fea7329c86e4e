#pragma once

#include <helmfd/index_sets.hpp>

#include <array>
#include <cmath>

namespace helmfd {

inline constexpr int kMaxFactorial = 20;

template <class T = Real>
constexpr std::array<T, kMaxFactorial + 1> factorial_table() {
  std::array<T, kMaxFactorial + 1> f{};
  f[0] = T(1);
  for (int i = 1; i <= kMaxFactorial; ++i) f[i] = f[i - 1] * T(i);
  return f;
}

template <class T = Real>
inline T factorial(int n) {
  static constexpr auto table = factorial_table<T>();
  if (n < 0 || n > kMaxFactorial) throw InvalidIndexError("factorial out of range");
  return table[static_cast<std::size_t>(n)];
}

template <class T = Real>
inline T binomial(int n, int r) {
  if (r < 0 || n < 0 || r > n) return T(0);
  T out(1);
  for (int i = 1; i <= r; ++i) out = out * T(n - r + i) / T(i);
  return out;
}

template <class T>
inline T ipow(T x, int e) {
  T out(1);
  for (int i = 0; i < e; ++i) out *= x;
  return out;
}

// x^a y^b / (a! b!)
template <class T>
inline T scaled_monomial(T x, T y, int a, int b) {
  return ipow(x, a) * ipow(y, b) / (factorial<T>(a) * factorial<T>(b));
}

// Taylor kernel multiplying u^{(m,n)}, (m,n) in band1(M1-1), in the
// x-major expansion truncated at total degree M1.
template <class T = Real>
T g_kernel(int M1, int m, int n, T k, T x, T y) {
  if (m < 0 || n < 0 || m + n > M1) throw InvalidIndexError("g_kernel: index outside Lambda");
  T sum(0);
  const T k2 = k * k;
  for (int p = 0; p <= (M1 - m - n) / 2; ++p) {
    const T kp = ipow(k2, p);
    for (int l = p; l <= p + n / 2; ++l) {
      const T sgn = (l % 2 == 0) ? T(1) : T(-1);
      sum += sgn * binomial<T>(l, p) * kp * scaled_monomial(x, y, m + 2 * l, n + 2 * p - 2 * l);
    }
  }
  return sum;
}

// Taylor kernel multiplying f^{(m,n)}, (m,n) in Lambda_{M1-2}.
template <class T = Real>
T h_kernel(int M1, int m, int n, T k, T x, T y) {
  if (m < 0 || n < 0 || m + n > M1 - 2) throw InvalidIndexError("h_kernel: index outside Lambda");
  T sum(0);
  const T k2 = k * k;
  for (int p = 0; p <= (M1 - 2 - m - n) / 2; ++p) {
    const T kp = ipow(k2, p);
    for (int l = 1 + p; l <= 1 + p + n / 2; ++l) {
      const T sgn = ((l - 1) % 2 == 0) ? T(1) : T(-1);
      sum += sgn * binomial<T>(l - 1, p) * kp *
             scaled_monomial(x, y, m + 2 * l, 2 * p + n + 2 - 2 * l);
    }
  }
  return sum;
}

} // namespace helmfd
