#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "lw/domain.hpp"
#include "lw/errors.hpp"
#include "lw/field.hpp"
#include "lw/grid_field.hpp"
#include "lw/mink4.hpp"

namespace lw {

struct Segment {
  Complex from;
  Complex to;
};

struct PathSpec {
  std::vector<Segment> segments;
  int order = 8;
};

struct QuadOptions {
  double rel_tol = 1e-12;
  int max_bisections = 20;
};

// Nodes and weights of the n-point Gauss-Legendre rule on [-1,1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

// Candidate paths from w0 to w in the order they are tried: horizontal-then-
// vertical, direct, vertical-then-horizontal, then 3-segment detours. Only
// candidates keeping the domain's clearance are returned.
std::vector<PathSpec> candidate_paths(Complex w0, Complex w, const Domain& domain);
PathSpec default_path(Complex w0, Complex w, const Domain& domain);

inline double magnitude(Complex z) { return std::abs(z); }
inline double magnitude(const Vec4c& z) { return max_abs(z); }

// Adaptive composite Gauss-Legendre integral of f(xi) dxi along a path.
template <class V, class F>
V line_integral(F&& f, const PathSpec& path, const QuadOptions& opts = {}) {
  const GaussRule& rule = gauss_legendre(path.order);
  double fmax = 0.0;
  auto rule_on = [&](Complex a, Complex b) {
    const Complex half = 0.5 * (b - a), mid = 0.5 * (a + b);
    V acc{};
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const V fx = f(mid + half * rule.nodes[k]);
      fmax = std::max(fmax, magnitude(fx));
      acc = acc + fx * (rule.weights[k] * half);
    }
    return acc;
  };
  std::function<V(Complex, Complex, const V&, int, double)> adapt = [&](Complex a, Complex b, const V& whole,
                                                                        int depth, double floor_scale) -> V {
    const Complex m = 0.5 * (a + b);
    const V left = rule_on(a, m);
    const V right = rule_on(m, b);
    const V refined = left + right;
    const double err = magnitude(refined - whole);
    const double tol = std::max(opts.rel_tol * magnitude(refined), 1e-15 * floor_scale * std::abs(b - a));
    if (err <= tol) return refined;
    if (depth >= opts.max_bisections) {
      throw Error(Errc::QuadratureFailure, "segment estimate did not stabilise");
    }
    return adapt(a, m, left, depth + 1, floor_scale) + adapt(m, b, right, depth + 1, floor_scale);
  };
  V total{};
  for (const Segment& s : path.segments) {
    if (s.from == s.to) continue;
    fmax = 0.0;
    const V whole = rule_on(s.from, s.to);
    total = total + adapt(s.from, s.to, whole, 0, std::max(fmax, 1e-300));
  }
  return total;
}

// Integrates along the first candidate path on which f evaluates without a
// DomainError; rethrows the last error when every candidate fails.
template <class V, class F>
V integrate_from(F&& f, Complex w0, Complex w, const Domain& domain, const QuadOptions& opts = {}) {
  const auto paths = candidate_paths(w0, w, domain);
  if (paths.empty()) throw Error(Errc::Domain, "no admissible path to the target point");
  for (std::size_t k = 0; k < paths.size(); ++k) {
    try {
      return line_integral<V>(f, paths[k], opts);
    } catch (const Error& e) {
      if (e.code() != Errc::Domain || k + 1 == paths.size()) throw;
    }
  }
  return V{};
}

// A 1-form phi dw with up to four complex components.
struct FormField {
  std::array<Field, 4> components{};
  int dim = 1;

  static FormField scalar(Field f) {
    FormField out;
    out.components[0] = std::move(f);
    return out;
  }
  static FormField vector(std::array<Field, 4> f) { return FormField{std::move(f), 4}; }
  Vec4c value(Complex w) const;
};

Vec4r integrate_2re(const FormField& phi, const PathSpec& path, const QuadOptions& opts = {});
Complex integrate(const Field& f, const PathSpec& path, const QuadOptions& opts = {});

struct PeriodResidual {
  double dbar_imag = 0.0;  // max |Im d/dwbar phi| over sample points, componentwise
  double loop = 0.0;       // max |closed-rectangle integral of Re(phi dw)|
  double value() const { return std::max(dbar_imag, loop); }
};

PeriodResidual period_residual(const FormField& phi, const Domain& domain, int n_samples,
                               std::uint64_t seed = 0x10095);

// Primitive fields used by the constructions (q, psi evaluated along paths from w0):
//   exp_primitive:     exp(int q)            for holomorphic q
//   exp_2re_primitive: exp(2 Re int psi)     for psi with real d/dwbar psi
Field exp_primitive(const Field& q, Complex w0, const Domain& domain);
Field exp_2re_primitive(const Field& psi, Complex w0, const Domain& domain);

struct DbarSolution {
  GridField G;
  double residual = 0.0;       // max |dbar G - F| over interior nodes (central differences)
  double residual_core = 0.0;  // same over nodes at least 1/8 of the extent away from the edge
};

// Finds G with d/dwbar G = F on the grid and G(gauge_point) = gauge_value.
DbarSolution solve_dbar(const GridField& F, Complex gauge_point, Complex gauge_value);

// Central-difference d/dwbar of grid samples at interior node (i,j).
Complex discrete_dbar(const GridField& g, int i, int j);

}  // namespace lw
