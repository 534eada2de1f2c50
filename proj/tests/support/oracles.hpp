#pragma once

// Independent reference computations used to check library results. None of
// these call into the code under test beyond plain value evaluation.

#include <functional>

#include "lw/mink4.hpp"

namespace oracle {

using lw::Complex;
using ScalarFn = std::function<Complex(Complex)>;

// Central finite differences of the u and v partials.
Complex d_u(const ScalarFn& f, Complex w, double h);
Complex d_v(const ScalarFn& f, Complex w, double h);
// Wirtinger derivatives (f_u -/+ i f_v) / 2 from central differences.
Complex d_w(const ScalarFn& f, Complex w, double h = 1e-5);
Complex d_wbar(const ScalarFn& f, Complex w, double h = 1e-5);
// (f_uu + f_vv) / 4 from the 5-point stencil.
Complex d_wwbar(const ScalarFn& f, Complex w, double h = 1e-4);

// Composite Simpson rule for the complex line integral of f along [a,b].
Complex simpson(const ScalarFn& f, Complex a, Complex b, int panels = 2000);

// Determinant of a 4x4 matrix given by rows, by Laplace expansion.
double det4(const lw::Vec4r& r0, const lw::Vec4r& r1, const lw::Vec4r& r2, const lw::Vec4r& r3);

double rel_err(Complex got, Complex want);

}  // namespace oracle
