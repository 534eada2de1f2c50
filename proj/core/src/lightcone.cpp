#include "lw/lightcone.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "lw/errors.hpp"
#include "lw/oneform.hpp"
#include "lw/tolerance.hpp"
#include "lw/weierstrass.hpp"

namespace lw {

namespace {

// Deterministic probe points; evaluation failures are skipped.
double probe_max(const Field& f, const std::vector<Complex>& points) {
  if (f.is_symbolic() && f.expr()->is_zero()) return 0.0;
  std::vector<Complex> pts = points;
  if (pts.empty()) {
    const ProbeRegion r;
    for (int j = 0; j < 5; ++j)
      for (int i = 0; i < 5; ++i) pts.emplace_back(r.u0 + (r.u1 - r.u0) * i / 4.0, r.v0 + (r.v1 - r.v0) * j / 4.0);
  }
  double m = 0.0;
  for (Complex w : pts) {
    try {
      m = std::max(m, std::abs(f.value(w)));
    } catch (const Error&) {
    }
  }
  return m;
}

bool vanishes(const Field& f, const std::vector<Complex>& points = {}) { return probe_max(f, points) <= 1e-12; }

Complex pick_base(const Domain& domain, const std::vector<Complex>& points) {
  const Complex c = domain.rect.center();
  if (domain.admissible(c)) return c;
  if (points.empty()) throw Error(Errc::Domain, "no admissible base point");
  return points.front();
}

// Relative mismatch of the two sides of the compatibility condition.
double compatibility_gap(const Field& a, const Field& b, const std::vector<Complex>& points) {
  double gap = 0.0;
  for (Complex w : points) {
    const Jet ja = a.jet(w), jb = b.jet(w);
    const Complex d1 = 1.0 - ja.v * std::conj(jb.v), d2 = 1.0 - jb.v * std::conj(ja.v);
    const Complex lhs = jb.b * std::conj(ja.b) / (d2 * d2);
    const Complex rhs = ja.b * std::conj(jb.b) / (d1 * d1);
    gap = std::max(gap, std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs)));
  }
  return gap;
}

struct Check {
  double residual = 0.0;
  double imag = 0.0;
  bool positive = true;
  bool negative = true;
};

Check check_scale(const Field& s, const Field& psi, const std::vector<Complex>& points) {
  Check c;
  for (Complex w : points) {
    const Jet j = s.jet(w);
    const Complex p = psi.value(w);
    c.residual = std::max(c.residual, std::abs(j.w / j.v - p) / (1.0 + std::abs(p)));
    c.imag = std::max(c.imag, std::abs(j.v.imag()) / std::abs(j.v));
    c.positive = c.positive && j.v.real() > 0.0;
    c.negative = c.negative && j.v.real() < 0.0;
  }
  return c;
}

ScaleSolution solve_scale(const Field& closed, const Field& psi, const Field& a, const Field& b,
                          const Domain& domain, const std::vector<Complex>& points) {
  if (points.empty()) throw Error(Errc::Domain, "no admissible sample points");
  const double gap = compatibility_gap(a, b, points);
  if (gap > kTolIntegrated) {
    throw Error(Errc::NotSolvable, fmt::format("compatibility condition fails (relative gap {:.3e})", gap));
  }
  ScaleSolution out;
  bool closed_ok = false;
  try {
    const Check c = check_scale(closed, psi, points);
    if (c.residual <= kTolIntegrated && c.imag <= kTolIntegrated && (c.positive || c.negative)) {
      out.scale = c.positive ? closed : -closed;
      out.residual = c.residual;
      out.imag = c.imag;
      closed_ok = true;
    }
  } catch (const Error&) {
    // a vanishing denominator somewhere; fall through to integration
  }
  if (!closed_ok) {
    out.closed_form = false;
    out.scale = exp_2re_primitive(psi, pick_base(domain, points), domain);
    const Check c = check_scale(out.scale, psi, points);
    out.residual = c.residual;
    out.imag = c.imag;
  }
  return out;
}

}  // namespace

SurfaceFn cone_surface(const ConeImmersion& c) {
  return [c](Complex w) {
    const Jet s = c.scale.jet(w);
    const Jet x = c.x.jet(w);
    return s * (c.kind == ConeImmersion::Kind::L3 ? l3_vector(x) : l0_vector(x));
  };
}

FrameFields cone_extract(const ConeImmersion& c) {
  const Holomorphy hx = classify(c.x);
  if (hx == Holomorphy::Neither) {
    throw Error(Errc::CaseViolation, "x must be holomorphic or anti-holomorphic");
  }
  const Field& s = c.scale;
  const Field x = c.x, xb = conj(c.x);
  const Field s_w = derive_w(s);
  const Field one(1.0);
  const bool l3 = c.kind == ConeImmersion::Kind::L3;
  if (hx == Holomorphy::Holomorphic) {
    if (vanishes(derive_w(x))) throw Error(Errc::CaseViolation, "x_w vanishes");
    if (vanishes(s_w)) throw Error(Errc::CaseViolation, "the scale derivative vanishes in the holomorphic case");
    const Field other = x + s * derive_w(x) / s_w;
    const Field mu = xb * s_w;
    return l3 ? FrameFields{other, one / xb, mu} : FrameFields{one / xb, other, mu};
  }
  if (vanishes(derive_w(xb))) throw Error(Errc::CaseViolation, "conj(x)_w vanishes");
  const Field sxb_w = derive_w(s * xb);
  const Field other = s_w / sxb_w;
  return l3 ? FrameFields{x, other, sxb_w} : FrameFields{other, x, sxb_w};
}

ScaleSolution solve_lambda_scale(const Field& a, const Field& b, const Domain& domain, const std::vector<Complex>& points,
                         double h) {
  const Field one(1.0);
  const Field ca_w = derive_w(conj(a));
  const Field psi = ca_w * b / (one - conj(a) * b);
  const Field closed = Field(h) / (ca_w * (one - a * conj(b)));
  return solve_scale(closed, psi, a, b, domain, points);
}

ScaleSolution solve_rho_scale(const Field& a, const Field& b, const Domain& domain, const std::vector<Complex>& points,
                           double h) {
  const Field one(1.0);
  const Field cb_w = derive_w(conj(b));
  const Field psi = a * cb_w / (one - a * conj(b));
  const Field closed = Field(h) / (cb_w * (one - b * conj(a)));
  return solve_scale(closed, psi, a, b, domain, points);
}

Complex moebius_apply(const MoebiusVector& v, Complex p) {
  const Complex den = v.V3() + std::conj(v.Z()) * p;
  if (std::abs(den) < kDomainEps) {
    throw Error(Errc::PoleContact, fmt::format("V3 + conj(Z) p vanishes at p = {}{:+}i", p.real(), p.imag()));
  }
  return (v.V0() * p - v.Z()) / den;
}

Field moebius_apply(const MoebiusVector& v, const Field& p) {
  return (Field(v.V0()) * p - Field(v.Z())) / (Field(v.V3()) + Field(std::conj(v.Z())) * p);
}

double hyperplane_test(const Field& a, const Field& b, const MoebiusVector& v, const std::vector<Complex>& points) {
  double r = 0.0;
  for (Complex w : points) r = std::max(r, std::abs(a.value(w) - moebius_apply(v, b.value(w))));
  return r;
}

double hyperplane_test(const std::vector<Complex>& a, const std::vector<Complex>& b,
                       const std::vector<std::uint8_t>& mask, const MoebiusVector& v) {
  double r = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!mask.empty() && mask[k]) continue;
    r = std::max(r, std::abs(a[k] - moebius_apply(v, b[k])));
  }
  return r;
}

Field moebius_lambda(const MoebiusVector& v, const Field& b, double k) {
  const Field V0(v.V0()), V3(v.V3()), Z(v.Z()), Zb(std::conj(v.Z()));
  const Field bb = conj(b);
  const Field num = V3 * V3 + V3 * (Z * bb + Zb * b) + Z * Zb * b * bb;
  const Field den = V3 + Z * bb + Zb * b - V0 * b * bb;
  return Field(k) * num / den;
}

const char* umbilic_kind_name(UmbilicKind k) { return k == UmbilicKind::Sphere ? "sphere" : "hyperbolic"; }

UmbilicalResult umbilical_classify(const Field& a, const Field& b, const Domain& domain, const RectGrid& grid) {
  const auto points = sample_points(domain, grid);
  if (points.empty()) throw Error(Errc::Domain, "no admissible sample points");
  for (const Field* f : {&a, &b}) {
    if (classify(*f) != Holomorphy::AntiHolomorphic || vanishes(derive_wbar(*f), points)) {
      throw Error(Errc::NotUmbilicalData, "a and b must be non-constant anti-holomorphic maps");
    }
  }
  UmbilicalResult out;
  ScaleSolution lam, rho;
  try {
    lam = solve_lambda_scale(a, b, domain, points);
    rho = solve_rho_scale(a, b, domain, points);
  } catch (const Error& e) {
    if (e.code() == Errc::NotSolvable) throw Error(Errc::NotUmbilicalData, e.what());
    throw;
  }
  Tier tier = (lam.closed_form && rho.closed_form) ? Tier::Analytic : Tier::Integrated;
  out.tolerance = tolerance_for(tier);
  const double tol = std::max(out.tolerance, kTolIntegrated);

  // lambda rho (1 - a conj b)(1 - b conj a) is constant; normalise it to 1.
  std::vector<double> prod;
  for (Complex w : points) {
    const Complex av = a.value(w), bv = b.value(w);
    prod.push_back(lam.scale.value(w).real() * rho.scale.value(w).real() * std::norm(1.0 - av * std::conj(bv)));
  }
  const double c0 = prod[prod.size() / 2];
  for (double p : prod) out.scale_spread = std::max(out.scale_spread, std::abs(p - c0) / std::abs(c0));

  UmbilicalData& d = out.data;
  d.a = a;
  d.b = b;
  d.lambda = lam.scale;
  d.rho = rho.scale / Field(c0);

  const FrameFields ff = cone_extract({ConeImmersion::Kind::L3, d.lambda, a});
  const FrameFields fg = cone_extract({ConeImmersion::Kind::L0, d.rho, b});
  std::vector<Complex> ratios;
  for (Complex w : points) ratios.push_back(ff.mu.value(w) / fg.mu.value(w));
  std::vector<double> re;
  for (Complex r : ratios) re.push_back(r.real());
  std::nth_element(re.begin(), re.begin() + static_cast<std::ptrdiff_t>(re.size() / 2), re.end());
  d.k = re[re.size() / 2];
  for (Complex r : ratios) out.k_spread = std::max(out.k_spread, std::abs(r - d.k));
  if (out.k_spread > tol * (1.0 + std::abs(d.k))) {
    throw Error(Errc::NotUmbilicalData, fmt::format("mu(f)/mu(g) is not constant (spread {:.3e})", out.k_spread));
  }

  const SurfaceFn f = cone_surface({ConeImmersion::Kind::L3, d.lambda, a});
  const SurfaceFn g = cone_surface({ConeImmersion::Kind::L0, d.rho, b});
  const Complex base = pick_base(domain, points);
  {
    const auto fj = f(base), gj = g(base);
    for (int c = 0; c < 4; ++c) d.n[c] = (fj[c].v - d.k * gj[c].v).real();
  }
  for (Complex w : points) {
    const auto fj = f(w), gj = g(w);
    for (int c = 0; c < 4; ++c) {
      out.normal_residual = std::max(out.normal_residual, std::abs(fj[c].w - d.k * gj[c].w));
    }
  }
  const double nn = inner(d.n, d.n);
  if (std::abs(nn) <= tol * (1.0 + max_abs(d.n) * max_abs(d.n))) {
    throw Error(Errc::DegenerateNormal, "the constant normal f - k g is lightlike");
  }
  out.kind = nn < 0.0 ? UmbilicKind::Sphere : UmbilicKind::Hyperbolic;
  out.v = (1.0 / std::sqrt(std::abs(nn))) * d.n;
  out.radius = std::abs(2.0 * d.k) / std::sqrt(std::abs(nn));
  out.hyperplane = hyperplane_test(a, b, MoebiusVector{out.v}, points);
  return out;
}

SurfaceGrid umbilical_family(const UmbilicalData& d, double r, const RectGrid& grid, const Domain& domain,
                             const Vec4r& p1) {
  const SurfaceFn f = cone_surface({ConeImmersion::Kind::L3, d.lambda, d.a});
  const SurfaceFn g = cone_surface({ConeImmersion::Kind::L0, d.rho, d.b});
  const SurfaceFn G = [f, g, r, p1](Complex w) {
    auto out = f(w);
    const auto gw = g(w);
    for (int c = 0; c < 4; ++c) out[c] = out[c] + r * gw[c] + Complex(p1[c]);
    return out;
  };
  const bool exact = d.lambda.is_symbolic() && d.rho.is_symbolic();
  return sample_surface(G, grid, exact ? Provenance::Analytic : Provenance::Integrated, &domain);
}

}  // namespace lw
