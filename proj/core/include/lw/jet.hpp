#pragma once

#include <complex>

namespace lw {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

// Margin used for punctures and for the principal log cut (-inf, 0].
inline constexpr double kDomainEps = 1e-6;

// Principal logarithm that refuses arguments on or within kDomainEps of the cut.
Complex checked_log(Complex z);

// Second-order Wirtinger jet of a function of (w, conj(w)).
// Members are the value and the derivatives d/dw, d/dwbar, d2/dw2, d2/dw dwbar, d2/dwbar2.
struct Jet {
  Complex v{}, w{}, b{}, ww{}, wb{}, bb{};

  static Jet constant(Complex c) { return Jet{c}; }
  static Jet variable(Complex z) {
    Jet j{z};
    j.w = 1.0;
    return j;
  }
  static Jet conj_variable(Complex z) {
    Jet j{std::conj(z)};
    j.b = 1.0;
    return j;
  }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator-(const Jet& a);

Jet operator+(const Jet& a, Complex c);
Jet operator+(Complex c, const Jet& a);
Jet operator-(const Jet& a, Complex c);
Jet operator-(Complex c, const Jet& a);
Jet operator*(const Jet& a, Complex c);
Jet operator*(Complex c, const Jet& a);
Jet operator/(const Jet& a, Complex c);
Jet operator/(Complex c, const Jet& a);

Jet conj(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, int n);
Jet inv(const Jet& a);

// Real part as a jet of a real-valued function; |a|^2 likewise.
Jet real(const Jet& a);
Jet norm(const Jet& a);

// Jet of d/dw (resp. d/dwbar) of the underlying function. Third-order data
// is unknown, so the second-order slots of the result are NaN.
Jet shift_w(const Jet& a);
Jet shift_wbar(const Jet& a);

bool is_finite(Complex z);
bool is_finite(const Jet& j);

}  // namespace lw
