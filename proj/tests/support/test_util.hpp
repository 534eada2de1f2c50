#pragma once

#include <cmath>
#include <functional>

#include "doctest.h"
#include "lw/errors.hpp"
#include "lw/jet.hpp"
#include "lw/mink4.hpp"

namespace testutil {

// Runs f and returns the code of the library error it raised.
template <class F>
lw::Errc error_code(F&& f) {
  try {
    f();
  } catch (const lw::Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return lw::Errc::Config;
}

// Closed-form catenoid cousin in H^3:
// h = (cosh u cosh v, sinh v cos v, sinh v sin v, sinh u cosh v).
inline lw::MinkVec4<lw::Jet> catenoid_cousin(lw::Complex w) {
  using lw::Jet;
  const lw::Complex i(0.0, 1.0);
  const Jet z = Jet::variable(w), zb = Jet::conj_variable(w);
  const Jet u = 0.5 * (z + zb), v = (z - zb) / (2.0 * i);
  const auto ch = [](const Jet& x) { return 0.5 * (exp(x) + exp(-x)); };
  const auto sh = [](const Jet& x) { return 0.5 * (exp(x) - exp(-x)); };
  const auto cs = [&](const Jet& x) { return 0.5 * (exp(i * x) + exp(-i * x)); };
  const auto sn = [&](const Jet& x) { return (exp(i * x) - exp(-i * x)) / (2.0 * i); };
  return lw::MinkVec4<Jet>{{ch(u) * ch(v), sh(v) * cs(v), sh(v) * sn(v), sh(u) * ch(v)}};
}

inline double catenoid_K(double v) { return -1.0 / std::pow(std::cosh(v), 4); }

}  // namespace testutil
