#pragma once

#include <vector>

#include "lw/domain.hpp"
#include "lw/field.hpp"
#include "lw/mink4.hpp"
#include "lw/surface.hpp"

namespace lw {

// lambda L3(x) or rho L0(x) with a positive scale and x holomorphic or
// anti-holomorphic.
struct ConeImmersion {
  enum class Kind { L3, L0 };
  Kind kind = Kind::L3;
  Field scale;
  Field x;
};

SurfaceFn cone_surface(const ConeImmersion& c);

struct FrameFields {
  Field a, b, mu;
};

// The four cases of the cone extraction. Throws CaseViolation when x is
// neither holomorphic nor anti-holomorphic, when the relevant derivative of x
// vanishes, or when the scale derivative vanishes in the holomorphic case.
FrameFields cone_extract(const ConeImmersion& c);

struct ScaleSolution {
  Field scale;
  bool closed_form = true;  // false when the exp(2 Re int psi) fallback was used
  double residual = 0.0;    // max |d/dw ln scale - psi| over the sample points
  double imag = 0.0;        // max |Im scale| relative to |scale|
};

// Real solution lambda of d/dw ln lambda = conj(a)_w b / (1 - conj(a) b) for
// anti-holomorphic a, b. Uses h / (conj(a)_w (1 - a conj b)) when that is real
// and solves the equation, otherwise integrates. Throws NotSolvable when the
// compatibility condition fails at the sample points.
ScaleSolution solve_lambda_scale(const Field& a, const Field& b, const Domain& domain, const std::vector<Complex>& points,
                         double h = 1.0);
// The symmetric equation for rho: d/dw ln rho = a conj(b)_w / (1 - a conj b).
ScaleSolution solve_rho_scale(const Field& a, const Field& b, const Domain& domain, const std::vector<Complex>& points,
                           double h = 1.0);

struct MoebiusVector {
  Vec4r v{};
  Complex V0() const { return v[0] + v[3]; }
  Complex V3() const { return -v[0] + v[3]; }
  Complex Z() const { return {v[1], v[2]}; }
};

// M_v(p) = (V0 p - Z) / (V3 + conj(Z) p). Throws PoleContact.
Complex moebius_apply(const MoebiusVector& v, Complex p);
Field moebius_apply(const MoebiusVector& v, const Field& p);

// max |a - M_v(b)| over the points.
double hyperplane_test(const Field& a, const Field& b, const MoebiusVector& v, const std::vector<Complex>& points);
double hyperplane_test(const std::vector<Complex>& a, const std::vector<Complex>& b,
                       const std::vector<std::uint8_t>& mask, const MoebiusVector& v);

// Real solution for the data a = M_v(b):
// k (V3^2 + V3 (Z conj b + conj Z b) + |Z b|^2) / (V3 + Z conj b + conj Z b - V0 |b|^2).
Field moebius_lambda(const MoebiusVector& v, const Field& b, double k = 1.0);

enum class UmbilicKind { Sphere, Hyperbolic };
const char* umbilic_kind_name(UmbilicKind k);

struct UmbilicalData {
  Field a, b;
  Field lambda, rho;  // rho normalised so that lambda rho |1 - a conj b|^2 = 1
  double k = 0.0;     // mu(f) = k mu(g)
  Vec4r n{};          // f - k g
};

struct UmbilicalResult {
  UmbilicKind kind = UmbilicKind::Sphere;
  double radius = 0.0;
  Vec4r v{};  // unit normal n / sqrt|<n,n>|
  UmbilicalData data;
  double scale_spread = 0.0;    // relative spread of lambda rho |1 - a conj b|^2 before normalising
  double k_spread = 0.0;        // max |mu(f)/mu(g) - k|
  double normal_residual = 0.0;  // max |f_w - k g_w|
  double hyperplane = 0.0;      // max |a - M_v(b)|
  double tolerance = 0.0;
};

// Classifies totally umbilical data (a, b non-constant anti-holomorphic).
// Throws NotUmbilicalData or DegenerateNormal.
UmbilicalResult umbilical_classify(const Field& a, const Field& b, const Domain& domain, const RectGrid& grid);

// G(r, w) = p1 + f(w) + r g(w) with f = lambda L3(a), g = rho L0(b).
SurfaceGrid umbilical_family(const UmbilicalData& d, double r, const RectGrid& grid, const Domain& domain,
                             const Vec4r& p1 = {});

}  // namespace lw
