#include "lw/jet.hpp"

#include <cmath>
#include <limits>

#include "lw/errors.hpp"

namespace lw {

Complex checked_log(Complex z) {
  const double mag = std::abs(z);
  if (mag < kDomainEps) {
    throw Error(Errc::Domain, "log argument at the puncture 0");
  }
  if (z.real() < 0.0 && std::abs(z.imag()) <= kDomainEps * std::max(1.0, mag)) {
    throw Error(Errc::Domain, "log argument on the branch cut (-inf, 0]");
  }
  return std::log(z);
}

namespace {

// Chain rule for a holomorphic function phi with phi(a.v)=d0, phi'=d1, phi''=d2.
Jet compose(const Jet& a, Complex d0, Complex d1, Complex d2) {
  Jet r;
  r.v = d0;
  r.w = d1 * a.w;
  r.b = d1 * a.b;
  r.ww = d2 * a.w * a.w + d1 * a.ww;
  r.wb = d2 * a.w * a.b + d1 * a.wb;
  r.bb = d2 * a.b * a.b + d1 * a.bb;
  return r;
}

}  // namespace

Jet& Jet::operator+=(const Jet& o) {
  v += o.v;
  w += o.w;
  b += o.b;
  ww += o.ww;
  wb += o.wb;
  bb += o.bb;
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  v -= o.v;
  w -= o.w;
  b -= o.b;
  ww -= o.ww;
  wb -= o.wb;
  bb -= o.bb;
  return *this;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }
Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }

Jet operator*(const Jet& f, const Jet& g) {
  Jet r;
  r.v = f.v * g.v;
  r.w = f.w * g.v + f.v * g.w;
  r.b = f.b * g.v + f.v * g.b;
  r.ww = f.ww * g.v + 2.0 * f.w * g.w + f.v * g.ww;
  r.wb = f.wb * g.v + f.w * g.b + f.b * g.w + f.v * g.wb;
  r.bb = f.bb * g.v + 2.0 * f.b * g.b + f.v * g.bb;
  return r;
}

Jet operator/(const Jet& f, const Jet& g) { return f * inv(g); }

Jet operator-(const Jet& a) { return Jet{-a.v, -a.w, -a.b, -a.ww, -a.wb, -a.bb}; }

Jet operator+(const Jet& a, Complex c) {
  Jet r = a;
  r.v += c;
  return r;
}
Jet operator+(Complex c, const Jet& a) { return a + c; }
Jet operator-(const Jet& a, Complex c) { return a + (-c); }
Jet operator-(Complex c, const Jet& a) { return (-a) + c; }
Jet operator*(const Jet& a, Complex c) {
  return Jet{a.v * c, a.w * c, a.b * c, a.ww * c, a.wb * c, a.bb * c};
}
Jet operator*(Complex c, const Jet& a) { return a * c; }
Jet operator/(const Jet& a, Complex c) { return a * (1.0 / c); }
Jet operator/(Complex c, const Jet& a) { return c * inv(a); }

Jet conj(const Jet& a) {
  return Jet{std::conj(a.v),  std::conj(a.b),  std::conj(a.w),
             std::conj(a.bb), std::conj(a.wb), std::conj(a.ww)};
}

Jet exp(const Jet& a) {
  const Complex e = std::exp(a.v);
  return compose(a, e, e, e);
}

Jet log(const Jet& a) {
  const Complex l = checked_log(a.v);
  const Complex r = 1.0 / a.v;
  return compose(a, l, r, -r * r);
}

Jet sqrt(const Jet& a) {
  const Complex s = std::sqrt(a.v);
  return compose(a, s, 0.5 / s, -0.25 / (s * a.v));
}

Jet pow(const Jet& a, int n) {
  if (n == 0) return Jet::constant(1.0);
  if (n == 1) return a;
  const Complex p2 = std::pow(a.v, n - 2);
  const Complex p1 = p2 * a.v;
  const double dn = n;
  return compose(a, p1 * a.v, dn * p1, dn * (dn - 1.0) * p2);
}

Jet inv(const Jet& a) {
  const Complex r = 1.0 / a.v;
  return compose(a, r, -r * r, 2.0 * r * r * r);
}

Jet real(const Jet& a) { return 0.5 * (a + conj(a)); }

Jet norm(const Jet& a) { return a * conj(a); }

Jet shift_w(const Jet& a) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const Complex u{nan, nan};
  return Jet{a.w, a.ww, a.wb, u, u, u};
}

Jet shift_wbar(const Jet& a) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const Complex u{nan, nan};
  return Jet{a.b, a.wb, a.bb, u, u, u};
}

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

bool is_finite(const Jet& j) { return is_finite(j.v) && is_finite(j.w) && is_finite(j.b); }

}  // namespace lw
