#pragma once

#include <helmfd/kernels.hpp>
#include <helmfd/taylor_engine.hpp>

#include <array>
#include <cmath>
#include <vector>

namespace helmfd {

struct Offset {
  int di = 0;
  int dj = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

// Numeric stencil in grid orientation. The discrete operator is
// h^{-scale_power} * sum_p coeffs[p] * u(i+di_p, j+dj_p).
struct StencilWeights {
  std::vector<Offset> offsets;
  std::vector<Complex> coeffs;
  int scale_power = 2;
  // Corner stencils only: true where the point uses the y-major expansion.
  std::vector<bool> tilde;

  Complex at(Offset o) const {
    for (std::size_t i = 0; i < offsets.size(); ++i)
      if (offsets[i] == o) return coeffs[i];
    return Complex(0);
  }
};

template <class R>
using PolyT = Series<std::complex<R>>;

namespace detail {
template <class R>
PolyT<R> poly(std::initializer_list<std::complex<R>> c) {
  return PolyT<R>(static_cast<int>(c.size()) - 1, std::vector<std::complex<R>>(c));
}
template <class R = Real>
constexpr R p2(int e) { return e >= 0 ? static_cast<R>(1ull << e) : R(1) / static_cast<R>(1ull << -e); }
} // namespace detail

// Interior 9-point stencil classes: corner (1,1), edge (1,0), center.
template <class R = Real>
struct InteriorPolys {
  PolyT<R> c11, c10, c00;
};

// Side stencil classes on the 6-point footprint k in {0,1}, l in {-1,0,1}
// with the boundary at k=0: C_{1,+-1}=c11, C_{0,+-1}=c01, C_{1,0}=c10.
template <class R = Real>
struct SidePolys {
  PolyT<R> c11, c01, c10, c00;
};

// Corner stencil on k,l in {0,1}, boundary lines k=0 and l=0.
template <class R = Real>
struct CornerPolys {
  PolyT<R> c11, c01, c10, c00;
};

// Free-parameter family of sixth-order interior stencils, c[0..10] = c1..c11.
template <class R = Real>
InteriorPolys<R> interior_family(const std::array<R, 11>& c) {
  using detail::poly;
  const R c1 = c[0], c2 = c[1], c3 = c[2], c4 = c[3], c5 = c[4], c6 = c[5], c7 = c[6], c8 = c[7],
             c9 = c[8], c10 = c[9], c11 = c[10];
  const R a1 = -240 * c2 + 15 * c4 - 120 * c6 + 480 * c10 + 120 * c11 + 480 * c9;
  const R a2 = 4 * c1 + 2 * c5 - 8 * c7 - 2 * c8 - 8 * c3;
  InteriorPolys<R> s;
  s.c11 = poly<R>({1, a1, R(1) / 15 + a2, -12 * c2 + c4 - 6 * c6 + 24 * c10 + 6 * c11 + 24 * c9, c1, c2, c3, c9});
  s.c10 = poly<R>({4, 4 * a1, R(1) / 15 + 4 * a2, c4, c5, c6, c7, c10});
  s.c00 = poly<R>({-20, -20 * a1, R(82) / 15 - 20 * a2,
                      -1392 * c2 + 82 * c4 - 696 * c6 + 2784 * c10 + 696 * c11 + 2784 * c9,
                      R(-3) / 10 + 20 * c1 + 8 * c5 - 48 * c7 - 12 * c8 - 48 * c3,
                      92 * c2 - R(9) * c4 / 2 + 44 * c6 - 192 * c10 - 48 * c11 - 192 * c9, c8, c11});
  return s;
}

inline std::array<Real, 11> published_interior_params() {
  using detail::p2;
  return {303 * p2(-18), -3 * p2(-20), 13 * p2(-20), -7 * p2(-16), -3027 * p2(-20), 5 * p2(-20),
          -73 * p2(-20), 4173 * p2(-19), 0, 0, 0};
}

// Reduced-pollution sixth-order interior stencil.
template <class R = Real>
InteriorPolys<R> interior_reduced() {
  using C = std::complex<R>;
  auto q = [](long a, long b) { return C(R(a) / R(b)); };
  auto d = [](long a, int e) { return C(R(a) * detail::p2<R>(e)); };
  InteriorPolys<R> s;
  s.c11 = detail::poly<R>({C(1), d(-195, -17), q(1, 15) + d(-8709, -19), d(-53, -19), d(303, -18), d(-3, -20),
                           d(13, -20)});
  s.c10 = detail::poly<R>({C(4), d(-195, -15), q(1, 15) + d(-8709, -17), d(-7, -16), d(-3027, -20), d(5, -20),
                           d(-73, -20)});
  s.c00 = detail::poly<R>({C(-20), d(975, -15), d(43545, -17) + q(82, 15), d(-1061, -17),
                           -(q(3, 10) + d(3039, -15)), d(7, -14), d(4173, -19)});
  return s;
}

// Free-parameter family of sixth-order impedance side stencils,
// c[0..7] = c1..c8 (real).
inline SidePolys<> impedance_side_family(const std::array<Real, 8>& c) {
  using detail::poly;
  const Real c1 = c[0], c2 = c[1], c3 = c[2], c4 = c[3], c5 = c[4], c6 = c[5], c7 = c[6], c8 = c[7];
  const Complex i = kI;
  // Recurring combinations.
  const Complex A = c1 * i + 2 * c3 * i + c4 * i / 2.0 + c6 * i - c8 / 2 + c2 - c5 - 2 * c7;
  auto B = [&](Real r1, Real r3, Real r6, Real r2) {
    return c8 * i - r2 * c2 * i + r2 * c5 * i + r3 * c7 * i + r1 * c1 + r3 * c3 + c4 + r6 * c6;
  };
  SidePolys<> s;
  s.c11 = poly<Real>({1, -60.0 * (A - 4.0 * i / 225.0), 12.0 * (B(7. / 3, 13. / 3, 7. / 3, 7. / 3) - 4.0 / 135),
                      c2 + c6 * i, c3 + c7 * i});
  s.c01 = poly<Real>({2, -120.0 * (A - 29.0 * i / 1800.0),
                      18.0 * (B(22. / 9, 40. / 9, 22. / 9, 22. / 9) - 11.0 / 324),
                      13.0 * (c1 * i + 20 * c3 * i / 13.0 + 7 * c4 * i / 26.0 + 12 * c6 * i / 13.0 -
                              17.0 * i / 1170.0 - 7 * c8 / 26 + 12 * c2 / 13 - c5 - 20 * c7 / 13),
                      c1 + c5 * i});
  s.c10 = poly<Real>({4, -240.0 * (A - 29.0 * i / 1800.0),
                      36.0 * (B(22. / 9, 40. / 9, 22. / 9, 22. / 9) - 49.0 / 1620),
                      18.0 * (c1 * i + 4 * c3 * i / 3.0 + c4 * i / 6.0 + 8 * c6 * i / 9.0 - i / 90.0 - c8 / 6 +
                              8 * c2 / 9 - c5 - 4 * c7 / 3),
                      c4 + c8 * i});
  s.c00 = poly<Real>({-10, 600.0 * (A - 29.0 * i / 4500.0),
                      84.0 * (B(32. / 21, 74. / 21, 32. / 21, 32. / 21) + 1.0 / 3780),
                      -80.0 * (c1 * i + 2 * c3 * i + c4 * i / 2.0 + 39 * c6 * i / 40.0 - 7.0 * i / 720.0 - c8 / 2 +
                               39 * c2 / 40 - c5 - 2 * c7),
                      -4.0 * (c8 * i - 3 * c2 * i / 2.0 + 2 * c5 * i + 7 * c7 * i / 2.0 + 2 * c1 + 7 * c3 / 2 + c4 +
                              3 * c6 / 2 - 1.0 / 80)});
  return s;
}

inline std::array<Real, 8> published_impedance_side_params() {
  using detail::p2;
  const Real u = p2(-15);
  return {807 * u, 1017 * u, -112 * u, 87 * u, 798 * u, -410 * u, -49 * u, 397 * u};
}

template <class R = Real>
SidePolys<R> impedance_side() {
  using C = std::complex<R>;
  const C i(0, 1);
  auto q = [](long a, long b) { return C(R(a) / R(b)); };
  auto d = [](long re, long im, int e) { return C(R(re), R(im)) * detail::p2<R>(e); };
  const C z(237, 433);
  SidePolys<R> s;
  s.c11 = detail::poly<R>({C(1), R(-120) * (z * detail::p2<R>(-17) - i * q(2, 225)),
                           d(99 * 16, -979, -13) - q(48, 135), d(1017, -410, -15), -d(112, 49, -15)});
  s.c01 = detail::poly<R>({C(2), -(R(15) * z * detail::p2<R>(-13) - i * q(29, 15)),
                           d(3 * 1679, -3205, -14) - q(11, 18), d(2841, 7271, -16) - i * q(17, 90), d(807, 798, -15)});
  s.c10 = detail::poly<R>({C(4), -(R(15) * z * detail::p2<R>(-12) - i * q(58, 15)),
                           d(3 * 1679, -3205, -13) - q(49, 45), d(3 * 631, 5539, -15) - i * q(1, 5), d(87, 397, -15)});
  s.c00 = detail::poly<R>({C(-10), R(75) * z * detail::p2<R>(-13) - i * q(58, 15),
                           d(3 * 2081, -2297, -13) + q(1, 45), -(d(3723 * 2, 5 * 907 * 4, -15) - i * q(7, 9)),
                           -(d(347, 148, -12) - q(1, 20))});
  return s;
}

template <class R = Real>
SidePolys<R> neumann_side() {
  using C = std::complex<R>;
  auto q = [](long a, long b) { return C(R(a) / R(b)); };
  auto d = [](long a, int e) { return C(R(a) * detail::p2<R>(e)); };
  SidePolys<R> s;
  s.c11 = detail::poly<R>({C(1), C(0), d(163, -14) + q(1, 15), C(0), d(99, -15)});
  s.c01 = detail::poly<R>({C(2), C(0), d(163, -13) + q(1, 30), C(0), d(-35, -16)});
  s.c10 = detail::poly<R>({C(4), C(0), d(163, -12) + q(1, 15), C(0), d(-35, -15)});
  s.c00 = detail::poly<R>({C(-10), C(0), R(-5) * (d(163, -13) - q(41, 75)), C(0), d(425, -14) - q(3, 20)});
  return s;
}

// Impedance on X=0, Neumann on Y=0.
template <class R = Real>
CornerPolys<R> corner_impedance_neumann() {
  using C = std::complex<R>;
  const C i(0, 1);
  auto q = [](long a, long b) { return C(R(a) / R(b)); };
  auto d = [](long re, long im, int e) { return C(R(re), R(im)) * detail::p2<R>(e); };
  const C z(112, 219);
  CornerPolys<R> s;
  s.c11 = detail::poly<R>({C(1), -(R(15) * z * detail::p2<R>(-13) - i * q(16, 15)), d(961, -419, -12) - q(16, 45),
                           d(721, 282, -15), -d(181, 51, -15)});
  s.c01 = detail::poly<R>({C(2), -(R(15) * z * detail::p2<R>(-12) - i * q(29, 15)),
                           d(3187, -5 * 67 * 4, -13) - q(11, 18), d(1059, 4899, -15) - i * q(17, 90),
                           d(507, 606, -15)});
  s.c10 = detail::poly<R>({C(2), -(R(15) * z * detail::p2<R>(-12) - i * q(29, 15)),
                           d(3187, -5 * 67 * 4, -13) - q(49, 90), d(611, 3 * 1341, -15) - i * q(1, 10),
                           d(-208, 105, -15)});
  s.c00 = detail::poly<R>({C(-5), R(75) * z * detail::p2<R>(-13) - i * q(29, 15), d(1559, -1522, -13) + q(1, 90),
                           -(d(3759, 4239 * 2, -15) - i * q(7, 18)), -(d(775, 324, -15) - q(1, 40))});
  return s;
}

// Impedance on both X=0 and Y=0 (symmetric, c01 == c10).
template <class R = Real>
CornerPolys<R> corner_impedance_impedance() {
  using C = std::complex<R>;
  const C i(0, 1);
  auto q = [](long a, long b) { return C(R(a) / R(b)); };
  auto p = [](int e) { return detail::p2<R>(e); };
  CornerPolys<R> s;
  s.c11 = detail::poly<R>(
      {C(1), -(C(3 * 293 * p(-13)) - q(5, 47) * i * R(16381) * p(-11) - q(2, 47) * i * q(3467, 315)),
       -(i * R(5339) * p(-15) / R(5) + q(111547, 141) * p(-11) + q(100, 1269)), -C(3, 898) * p(-14),
       -C(1220, 1281) * p(-15) / R(20)});
  s.c10 = detail::poly<R>(
      {C(2), -(C(3 * 293 * p(-12)) - q(5, 47) * i * R(16381) * p(-10) - q(2, 47) * i * q(3973, 315)),
       -(i * R(1823) * p(-14) / R(5) + q(15601, 141) * p(-8) + q(10979, 88830)),
       C(25 * p(-13)) - q(1, 47) * i * q(3089, 3) * p(-8) - q(1, 47) * i * q(2581, 1890),
       i * R(903) * p(-15) / R(5) + q(36461, 47) * p(-15) - q(79, 29610)});
  s.c01 = s.c10;
  s.c00 = detail::poly<R>(
      {C(-5), q(4, 47) * i * q(16501, 315) - q(25, 47) * i * R(16381) * p(-11) + C(15 * 293 * p(-13)),
       -(i * R(92849) * p(-15) / R(5) + q(1113127, 141) * p(-11) - q(23, 10) * q(3151, 8883)),
       -(q(1, 47) * i * q(16691, 945) - q(5, 47) * i * q(165463, 6) * p(-12) + C(5 * 539 * p(-14))),
       i * R(28811) * p(-17) / R(5) + q(1342939, 141) * p(-15) - q(2321, 40 * 8883)});
  return s;
}

} // namespace helmfd
