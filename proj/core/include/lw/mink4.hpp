#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "lw/jet.hpp"

namespace lw {

// Vector in R^{1,3} (or its complexification) with components x0..x3.
template <class T>
struct MinkVec4 {
  std::array<T, 4> x{};

  T& operator[](std::size_t i) { return x[i]; }
  const T& operator[](std::size_t i) const { return x[i]; }

  MinkVec4& operator+=(const MinkVec4& o) {
    for (std::size_t i = 0; i < 4; ++i) x[i] += o.x[i];
    return *this;
  }
  MinkVec4& operator-=(const MinkVec4& o) {
    for (std::size_t i = 0; i < 4; ++i) x[i] -= o.x[i];
    return *this;
  }
  friend MinkVec4 operator+(MinkVec4 a, const MinkVec4& b) { return a += b; }
  friend MinkVec4 operator-(MinkVec4 a, const MinkVec4& b) { return a -= b; }
  friend MinkVec4 operator-(const MinkVec4& a) {
    MinkVec4 r;
    for (std::size_t i = 0; i < 4; ++i) r.x[i] = -a.x[i];
    return r;
  }
  template <class S>
  friend MinkVec4 operator*(const S& s, const MinkVec4& a) {
    MinkVec4 r;
    for (std::size_t i = 0; i < 4; ++i) r.x[i] = s * a.x[i];
    return r;
  }
  template <class S>
  friend MinkVec4 operator*(const MinkVec4& a, const S& s) {
    MinkVec4 r;
    for (std::size_t i = 0; i < 4; ++i) r.x[i] = a.x[i] * s;
    return r;
  }
  template <class S>
  friend MinkVec4 operator/(const MinkVec4& a, const S& s) {
    MinkVec4 r;
    for (std::size_t i = 0; i < 4; ++i) r.x[i] = a.x[i] / s;
    return r;
  }
};

using Vec4r = MinkVec4<double>;
using Vec4c = MinkVec4<Complex>;

// Complex-bilinear (never conjugating) form of signature (-,+,+,+).
template <class T>
T inner(const MinkVec4<T>& u, const MinkVec4<T>& v) {
  return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3];
}

inline Complex inner(const Vec4c& u, const Vec4r& v) {
  return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3];
}

inline Vec4c to_complex(const Vec4r& v) { return Vec4c{{v[0], v[1], v[2], v[3]}}; }
inline Vec4r real_part(const Vec4c& v) {
  return Vec4r{{v[0].real(), v[1].real(), v[2].real(), v[3].real()}};
}
inline Vec4r imag_part(const Vec4c& v) {
  return Vec4r{{v[0].imag(), v[1].imag(), v[2].imag(), v[3].imag()}};
}
inline Vec4c conj(const Vec4c& v) {
  return Vec4c{{std::conj(v[0]), std::conj(v[1]), std::conj(v[2]), std::conj(v[3])}};
}

inline double max_abs(const Vec4r& v) {
  return std::max(std::max(std::abs(v[0]), std::abs(v[1])), std::max(std::abs(v[2]), std::abs(v[3])));
}
inline double max_abs(const Vec4c& v) {
  return std::max(std::max(std::abs(v[0]), std::abs(v[1])), std::max(std::abs(v[2]), std::abs(v[3])));
}

// <v,v> = 0 within tol and v0 > 0.
bool is_future_lightlike(const Vec4r& v, double tol = 1e-12);

// The vector X with <X, z> = -det[z, u, v, w] for every z.
Vec4r cross3(const Vec4r& u, const Vec4r& v, const Vec4r& w);

// W(a,b) = (a+b, 1+ab, i(1-ab), a-b). Templated so jets flow through it.
template <class S>
MinkVec4<S> w_vector(const S& a, const S& b) {
  const S ab = a * b;
  return MinkVec4<S>{{a + b, 1.0 + ab, kI * (1.0 - ab), a - b}};
}

// L0(b) = (1+b conj b, b + conj b, -i(b - conj b), 1 - b conj b).
template <class S>
MinkVec4<S> l0_vector(const S& b) {
  using std::conj;
  const S bc = conj(b);
  const S n = b * bc;
  return MinkVec4<S>{{1.0 + n, b + bc, -kI * (b - bc), 1.0 - n}};
}

// L3(a) = L(a) = (1+a conj a, a + conj a, -i(a - conj a), -1 + a conj a).
template <class S>
MinkVec4<S> l3_vector(const S& a) {
  using std::conj;
  const S ac = conj(a);
  const S n = a * ac;
  return MinkVec4<S>{{1.0 + n, a + ac, -kI * (a - ac), n - 1.0}};
}

struct LightPair {
  Vec4r l0;
  Vec4r l3;
};

LightPair light_vectors(Complex a, Complex b);

struct NullFrameData {
  Complex a;
  Complex b;
  Complex mu;
};

// Splits a null complex vector as Z = mu W(a,b). Throws DegenerateFrame when
// Z1 - i Z2 vanishes (relative to |Z|) or the preconditions fail.
NullFrameData decompose(const Vec4c& z, double eps = 1e-12);

}  // namespace lw
