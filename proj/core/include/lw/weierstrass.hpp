#pragma once

#include <array>
#include <optional>
#include <vector>

#include "lw/domain.hpp"
#include "lw/field.hpp"
#include "lw/mink4.hpp"
#include "lw/oneform.hpp"
#include "lw/surface.hpp"
#include "lw/tolerance.hpp"

namespace lw {

// Nodes of the grid that are admissible for the domain.
std::vector<Complex> sample_points(const Domain& domain, const RectGrid& grid);

// Right-hand side of the equation for d/dwbar Log mu.
Field mu_equation_rhs(const Field& a, const Field& b);

enum class MuStrategy { Auto, BothHolomorphic, BothAntiHolomorphic, Numeric };
const char* mu_strategy_name(MuStrategy s);

struct MuOptions {
  MuStrategy strategy = MuStrategy::Auto;
  double h = 1.0;            // real constant for the anti-holomorphic closed form
  Complex w0{0.0, 0.0};      // gauge point for the numeric solve (mu(w0) = 1)
  RectGrid grid{};           // sample grid; used by the numeric solve and the residual
};

struct MuSolution {
  Field mu;
  MuStrategy strategy = MuStrategy::Auto;  // the strategy actually used
  double residual = 0.0;                   // max |dbar Log mu - rhs|
  double residual_core = 0.0;              // numeric solve only: away from the edges
};

// Throws DegenerateFrame when a conj(b) is within eps of 1 at a sample.
MuSolution solve_mu(const Field& a, const Field& b, const Domain& domain, const MuOptions& opts);

struct Compatibility {
  double res1 = 0.0;
  double res11 = 0.0;
};
Compatibility compatibility_residual(const Field& a, const Field& b, const Field& mu,
                                     const std::vector<Complex>& points);

// mu W(a,b) as a vector 1-form.
FormField weierstrass_form(const Field& a, const Field& b, const Field& mu);

struct BuildOptions {
  Vec4r p0{};
  Complex w0{0.0, 0.0};
  QuadOptions quad{};
};

// f(w) = p0 + 2 Re int_{w0}^{w} mu W(a,b) dxi at every admissible node; the
// jets f_w, f_ww, f_wwbar come from mu W(a,b) directly.
SurfaceGrid build_surface(const Field& a, const Field& b, const Field& mu, const Domain& domain,
                          const RectGrid& grid, const BuildOptions& opts = {});

// Per-node frame data recovered from the jets of a grid.
struct AbmuGrid {
  RectGrid grid;
  std::vector<Complex> a, b, mu;
  std::vector<Complex> a_w, a_wb, b_w, b_wb;
  std::vector<std::uint8_t> mask;  // 1 where |f1_w - i f2_w| < eps or the node is masked
  double roundtrip = 0.0;          // max |mu W(a,b) - f_w| over unmasked nodes
  Tier tier = Tier::Analytic;
  std::size_t unmasked() const;
};

// Computes FD jets when the grid has none. Throws AllDegenerate.
AbmuGrid extract_abmu(SurfaceGrid& grid, double eps = 1e-8);

struct AbmuExpr {
  Expr a, b, mu;
};
// Symbolic extraction from component expressions of f.
AbmuExpr extract_abmu(const std::array<Expr, 4>& f);

struct SecondFormData {
  Complex alpha_ww, beta_ww;  // coefficients of [f_ww]^perp on L0(b), L3(a)
  Complex alpha, beta;        // coefficients of f_wwbar on L0(b), L3(a)
};

struct FundamentalForms {
  std::vector<double> first;  // g11 = 4|mu|^2 (1 - a conj b)(1 - b conj a)
  std::vector<SecondFormData> second;
  std::vector<std::uint8_t> umbilic;
  double umbilic_tol = 0.0;
};
// Throws DegenerateFrame when some unmasked node has a conj(b) = 1.
FundamentalForms fundamental_forms(const AbmuGrid& d, double f_norm = 0.0);

struct MuRatio {
  bool real_constant = false;
  double value = 0.0;        // the constant when real_constant
  double dbar_residual = 0.0;
};
// h = mu1/mu2 must be holomorphic; with non-holomorphic data it must also be a
// real constant. Throws RatioNotHolomorphic otherwise.
MuRatio mu_ratio_test(const Field& mu1, const Field& mu2, bool a_or_b_nonholo, const std::vector<Complex>& points);

}  // namespace lw
