#pragma once

#include <helmfd/kernels.hpp>

#include <vector>

namespace helmfd {

enum class Orientation { XMajor, YMajor };

// One term coef * k^k_power * D^{index}.
struct ReductionTerm {
  MultiIndex index;
  Real coef = 0;
  int k_power = 0;

  template <class T>
  T weight(T k) const { return T(coef) * ipow(k, k_power); }
};

// u^{(m,n)} written through band1 derivatives of u and derivatives of f,
// using Delta u + k^2 u = f.
struct ReductionFunctional {
  std::vector<ReductionTerm> u_terms;
  std::vector<ReductionTerm> f_terms;
};

// XMajor reduces the x order to 0 or 1; YMajor does the same in y.
inline ReductionFunctional reduce_derivative(int m, int n, Orientation o = Orientation::XMajor) {
  if (m < 0 || n < 0) throw InvalidIndexError("reduce_derivative: negative index");
  ReductionFunctional out;
  const bool ymaj = (o == Orientation::YMajor);
  const int a = ymaj ? n : m; // reduced direction
  const int b = ymaj ? m : n;
  auto idx = [&](int ra, int rb) { return ymaj ? MultiIndex{rb, ra} : MultiIndex{ra, rb}; };
  const int h = a / 2;
  const int odd = a % 2;
  if (h == 0) {
    out.u_terms.push_back({idx(a, b), 1.0, 0});
    return out;
  }
  const Real sgn = (h % 2 == 0) ? 1.0 : -1.0;
  for (int i = 0; i <= h; ++i)
    out.u_terms.push_back({idx(odd, 2 * h + b - 2 * i), sgn * binomial<Real>(h, i), 2 * i});
  for (int i = 1; i <= h; ++i) {
    const Real s = ((i - 1) % 2 == 0) ? 1.0 : -1.0;
    for (int j = 0; j <= i - 1; ++j)
      out.f_terms.push_back({idx(a - 2 * i, b + 2 * j), s * binomial<Real>(i - 1, j), 2 * (i - j - 1)});
  }
  return out;
}

} // namespace helmfd
