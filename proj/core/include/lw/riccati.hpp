#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lw/domain.hpp"
#include "lw/field.hpp"
#include "lw/holo.hpp"
#include "lw/surface.hpp"
#include "lw/verify.hpp"
#include "lw/weierstrass.hpp"

namespace lw {

// phi_w = P (phi - a)^2 with holomorphic a, P; or, when Q and R are set, the
// general form psi_w = P psi^2 + Q psi + R.
struct RiccatiProblem {
  Expr a;
  Expr P;
  std::optional<Expr> Q, R;
  Domain domain;
  std::optional<std::pair<Expr, Expr>> seeds;  // holomorphic solutions x, y

  bool general() const { return Q.has_value() && R.has_value(); }
  // Coefficients of the general form; for the (a, P) form Q = -2aP, R = a^2 P.
  std::array<Expr, 3> pqr() const;
  // Throws HypothesisViolation unless a, P (and Q, R) are holomorphic and P
  // does not vanish at the points.
  void validate(const std::vector<Complex>& points) const;

  static RiccatiProblem from_json(const std::string& text);
  std::string to_json() const;
};

// Linking equation between a and b, or the reduced form b_wwbar + 2 conj(a) b_w b_wbar / (1 - b conj a)
// when a is holomorphic. Throws HypothesisViolation when a_w or b_w vanishes
// on more than 10% of the samples (b_w only in the reduced form).
struct LinkingResult {
  double residual = 0.0;
  bool reduced = false;
};
LinkingResult linking_residual(const Field& a, const Field& b, const std::vector<Complex>& points);
// Grid variant: first derivatives from the frame data, second derivatives of
// b by finite differences; boundary and masked nodes are skipped.
LinkingResult linking_residual(const AbmuGrid& d, bool reduced);

struct RiccatiResidual {
  double residual = 0.0;  // max |phi_w - rhs| / (1 + |phi_w|)
  Holomorphy holomorphy = Holomorphy::Neither;
};
// Throws PoleContact when phi = a (within eps) at a sample in the (a, P) form.
RiccatiResidual riccati_residual(const Field& phi, const RiccatiProblem& prob, const std::vector<Complex>& points);

struct Family {
  Field s;    // k theta exp(int_{w0}^{w} P (x - y))
  Field psi;  // (x - y s) / (1 - s); evaluation throws FamilyPole where s = 1
};
Family solution_family(const Field& x, const Field& y, const RiccatiProblem& prob, Complex k, const Field& theta,
                       Complex w0);

struct FamilySamples {
  GridField psi;
  std::vector<std::uint8_t> mask;  // nodes at (or too close to) s = 1, or outside the domain
  double residual = 0.0;           // Riccati residual over unmasked nodes
};
FamilySamples sample_family(const Family& fam, const RiccatiProblem& prob, const RectGrid& grid);

struct Weights {
  Field lambda, rho;
  double a_residual = 0.0;  // max |a(f) - a|, |a(g) - a|
  double r_spread = 0.0;    // max |lambda rho |x - y|^2 - 1| after rescaling
  double r_dw = 0.0;        // max |d/dw ln(lambda rho |x - y|^2)|
};
// lambda = lambda0 exp(2 Re int P (a - x)), rho likewise with y; rho0 is
// rescaled so that lambda rho |x - y|^2 = 1.
Weights pair_weights(const Field& x, const Field& y, const RiccatiProblem& prob, double lambda0, double rho0,
                        Complex w0, const std::vector<Complex>& points);

struct BryantPair {
  Field x, y, lambda, rho;
};

struct BryantSurface {
  SurfaceGrid h;
  VerificationReport report;
};
// h = (lambda L(x) + rho L(y)) / 2 with L = L3.
SurfaceFn bryant_surface(const BryantPair& pair);
BryantSurface bryant_from_pair(const BryantPair& pair, const Domain& domain, const RectGrid& grid);

// P X_ww - P_w X_w - a_w P^2 X = 0, normalised to X_ww + p X_w + q X = 0.
struct LinearReduction {
  Expr p, q;
  Expr c2, c1, c0;  // P, -P_w, -a_w P^2
  enum class Kind { General, ConstantCoefficient, Euler };
  Kind kind = Kind::General;
  std::optional<std::pair<Expr, Expr>> basis;  // independent holomorphic solutions when found
};
LinearReduction linear_reduction(const RiccatiProblem& prob, const std::vector<Complex>& points);

// phi = a - X_w / (X P); throws ZeroSolution when X vanishes at every sample.
Field riccati_from_linear(const Field& X, const RiccatiProblem& prob, const std::vector<Complex>& points);
// The inverse for holomorphic phi: X = X0 exp(-int_{w0}^{w} P (phi - a)).
Field linear_from_riccati(const Field& phi, const RiccatiProblem& prob, Complex w0, Complex X0);
// X = c1 y1 + c2 y2 with anti-holomorphic c1, c2.
Field general_solution(const std::pair<Expr, Expr>& basis, const Field& c1, const Field& c2);
// Holomorphic Riccati solutions obtained from the basis of the linear equation.
std::optional<std::pair<Expr, Expr>> auto_seeds(const RiccatiProblem& prob, const std::vector<Complex>& points);

struct ReconstructOptions {
  std::optional<RiccatiProblem> problem;  // a, P and/or seeds for the data
  std::optional<std::pair<int, int>> base_node;  // defaults to the central node
};

struct Reconstruction {
  SurfaceGrid h;
  Vec4r v{};
  double congruence = 0.0;  // max |F - h - v|
  VerificationReport report;
};
// Rebuilds the Bryant surface sharing (a, b, mu) with F. Throws NotLightlikeH
// or NoSeedSolutions.
Reconstruction reconstruct_bryant(SurfaceGrid& F, const ReconstructOptions& opts = {});

}  // namespace lw
