#include "lwtool/catalog.hpp"

#include <cmath>
#include <functional>
#include <map>

#include <fmt/format.h>

#include "lw/errors.hpp"
#include "lw/lightcone.hpp"
#include "lw/riccati.hpp"
#include "lw/weierstrass.hpp"

namespace lwtool {

using lw::Complex;
using lw::Expr;
using lw::Field;
using lw::Tier;

namespace {

const Complex kI{0.0, 1.0};

lw::Domain make_domain(lw::Rect r, bool avoid_cut = false, std::vector<Complex> punctures = {}) {
  lw::Domain d;
  d.rect = r;
  d.avoid_cut = avoid_cut;
  d.punctures = std::move(punctures);
  return d;
}

lw::RectGrid make_grid(const lw::Domain& d, int n) { return {d.rect, n, n}; }

// Adds the entry recording the largest componentwise distance to a closed form.
void add_closed_form(ExampleResult& r, const std::function<lw::Vec4r(Complex)>& exact, double tol) {
  lw::Stat s;
  for (std::size_t k = 0; k < r.grid.size(); ++k) {
    if (r.grid.masked(k)) continue;
    const auto e = exact(r.grid.grid.node(k));
    s.push(lw::max_abs(r.grid.f[k] - e));
  }
  r.report.add("closed_form_deviation", s, Tier::Custom, 0.0, tol);
}

// Shared pipeline for a Riccati problem with holomorphic seeds: seed residuals,
// weights from quadrature, the family member for (k, theta), and the surface
// h = (lambda L(x) + rho L(y)) / 2.
ExampleResult riccati_example(const lw::RiccatiProblem& prob, const Expr& x, const Expr& y, Complex k,
                              const Expr& theta, const Expr& phi_closed, int n) {
  const lw::RectGrid grid = make_grid(prob.domain, n);
  const auto pts = lw::sample_points(prob.domain, grid);
  prob.validate(pts);
  const Field fx(x), fy(y);
  const Complex w0 = 1.0;

  const auto wts = lw::pair_weights(fx, fy, prob, 1.0, 1.0, w0, pts);
  ExampleResult r;
  auto out = lw::bryant_from_pair({fx, fy, wts.lambda, wts.rho}, prob.domain, grid);
  r.grid = std::move(out.h);
  r.report = std::move(out.report);
  r.projection = Projection::PoincareBall;

  const double sx = lw::riccati_residual(fx, prob, pts).residual;
  const double sy = lw::riccati_residual(fy, prob, pts).residual;
  r.report.add("seed_riccati_residual", std::max(sx, sy), std::max(sx, sy), Tier::Analytic);
  r.report.add("weights_a_mismatch", wts.a_residual, wts.a_residual, Tier::Integrated);
  r.report.add("weights_product_spread", wts.r_spread, wts.r_spread, Tier::Integrated);
  r.report.add("weights_product_dw", wts.r_dw, wts.r_dw, Tier::Integrated);

  const auto fam = lw::solution_family(fx, fy, prob, k, Field(theta), w0);
  const auto samples = lw::sample_family(fam, prob, grid);
  const Field phi(phi_closed);
  lw::Stat gap;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (samples.mask[i]) continue;
    gap.push(std::abs(samples.psi.values[i] - phi.value(grid.node(i))));
  }
  r.report.add("family_riccati_residual", samples.residual, samples.residual, Tier::Integrated);
  r.report.add("family_closed_form_deviation", gap, Tier::Integrated);
  const auto phi_res = lw::riccati_residual(phi, prob, pts);
  r.report.add("phi_riccati_residual", phi_res.residual, phi_res.residual, Tier::Custom, 0.0, 1e-8);
  r.report.add("phi_is_holomorphic", phi_res.holomorphy == lw::Holomorphy::Neither ? 0.0 : 1.0, 0.0, Tier::Custom,
               0.0, 0.0);

  r.details["a"] = prob.a.to_string();
  r.details["P"] = prob.P.to_string();
  r.details["x"] = x.to_string();
  r.details["y"] = y.to_string();
  r.details["k"] = {k.real(), k.imag()};
  r.details["theta"] = theta.to_string();
  return r;
}

ExampleResult ex63(int n) {
  const Expr W = Expr::w(), WB = Expr::conj_w();
  lw::RiccatiProblem p;
  p.a = Expr(2.0 / 3.0) * W;
  p.P = Expr(3.0) / (W * W);
  // Contains the node w = 1 and stays inside |w|^6 < 2, where phi has its poles.
  p.domain = make_domain({0.6, 1.0, -0.2, 0.2}, false, {0.0});
  const Expr n3 = pow(W * WB, 3);
  const Expr phi = W * (n3 - Expr(8.0)) / (Expr(3.0) * (n3 - Expr(2.0)));
  auto r = riccati_example(p, W / Expr(3.0), Expr(4.0 / 3.0) * W, 2.0, Expr(1.0) / pow(WB, 3), phi, n ? n : 21);
  add_closed_form(
      r,
      [](Complex w) {
        const double r2 = std::norm(w), r4 = r2 * r2, r6 = r4 * r2, r8 = r4 * r4, s = 0.5 / r4;
        return lw::Vec4r{{s * (1.0 + 16.0 / 9.0 * r2 + r6 + r8 / 9.0), s * 2.0 / 3.0 * w.real() * (r6 + 4.0),
                          s * 2.0 / 3.0 * w.imag() * (r6 + 4.0), s * (-1.0 + 16.0 / 9.0 * r2 - r6 + r8 / 9.0)}};
      },
      1e-8);
  return r;
}

ExampleResult ex62(int n) {
  const Expr W = Expr::w(), WB = Expr::conj_w();
  lw::RiccatiProblem p;
  p.a = Expr(0.5) + log(W);
  p.P = Expr(4.0) / W;
  // Right of the branch cut and inside the unit circle, where phi has its poles.
  // Closer to the origin rho = |w|^-4 grows and round-off in g11 exceeds the analytic tier.
  p.domain = make_domain({0.5, 0.9, -0.4, 0.4}, true);
  const Expr n4 = pow(W * WB, 4);
  const Expr phi = ((n4 - Expr(1.0)) * log(W) - Expr(1.0)) / (n4 - Expr(1.0));
  auto r = riccati_example(p, log(W), Expr(1.0) + log(W), 1.0, Expr(1.0) / pow(WB, 4), phi, n ? n : 21);
  add_closed_form(
      r,
      [](Complex w) {
        const Complex L = std::log(w);
        const double r8 = std::pow(std::norm(w), 4), m = std::norm(L), s = 0.5 / std::pow(std::norm(w), 2);
        return lw::Vec4r{{s * (2.0 + 2.0 * L.real() + m * (r8 + 1.0) + r8), s * (2.0 * L.real() * (r8 + 1.0) + 2.0),
                          s * 2.0 * L.imag() * (r8 + 1.0), s * (2.0 * L.real() + m * (r8 + 1.0) - r8)}};
      },
      1e-8);
  return r;
}

ExampleResult catenoid_cousin(int n) {
  const Expr W = Expr::w(), WB = Expr::conj_w();
  const Expr u = Expr(0.5) * (W + WB), v = Expr(-0.5 * kI) * (W - WB);
  lw::RiccatiProblem p;
  p.a = Expr(kI) * exp(W);
  p.P = Expr(0.5 * kI) * exp(-W);
  p.domain = make_domain({-1.0, 1.0, -1.0, 1.0});
  const lw::RectGrid grid = make_grid(p.domain, n ? n : 101);
  const auto pts = lw::sample_points(p.domain, grid);
  const auto seeds = lw::auto_seeds(p, pts);
  if (!seeds) throw lw::Error(lw::Errc::NoSeedSolutions, "catenoid cousin data lost its constant-coefficient form");
  // Order the seeds as x = e^w, y = -e^w.
  const bool swap = std::abs(lw::eval(seeds->first, 0.0) - 1.0) > 1e-12;
  const Expr x = swap ? seeds->second : seeds->first, y = swap ? seeds->first : seeds->second;
  const Expr lambda = Expr(0.5) * exp(v - u), rho = Expr(0.5) * exp(-u - v);

  ExampleResult r;
  auto out = lw::bryant_from_pair({Field(x), Field(y), Field(lambda), Field(rho)}, p.domain, grid);
  r.grid = std::move(out.h);
  r.report = std::move(out.report);
  r.projection = Projection::PoincareBall;

  const double seed_res =
      std::max(lw::riccati_residual(Field(x), p, pts).residual, lw::riccati_residual(Field(y), p, pts).residual);
  r.report.add("seed_riccati_residual", seed_res, seed_res, Tier::Analytic);

  // The weights from quadrature agree with the closed forms on a coarse subgrid.
  const lw::RectGrid coarse = make_grid(p.domain, 5);
  const auto cpts = lw::sample_points(p.domain, coarse);
  const auto wts = lw::pair_weights(Field(x), Field(y), p, 0.5, 0.5, 0.0, cpts);
  lw::Stat wgap;
  for (Complex w : cpts) {
    wgap.push(std::abs(wts.lambda.value(w) - lw::eval(lambda, w)));
    wgap.push(std::abs(wts.rho.value(w) - lw::eval(rho, w)));
  }
  r.report.add("weights_closed_form_deviation", wgap, Tier::Integrated);

  lw::Stat g11_err, k_err;
  const auto g11 = lw::metric_g11(r.grid);
  const auto K = lw::gauss_curvature(r.grid);
  double k_origin = std::nan("");
  for (std::size_t k = 0; k < r.grid.size(); ++k) {
    const Complex w = grid.node(k);
    if (r.grid.masked(k)) continue;
    g11_err.push(std::abs(g11[k] - std::pow(std::cosh(w.imag()), 2)));
    if (std::isfinite(K[k])) k_err.push(std::abs(K[k] + 1.0 / std::pow(std::cosh(w.imag()), 4)));
    if (std::abs(w) < 1e-12) k_origin = K[k];
  }
  r.report.add("metric_g11_deviation", g11_err, Tier::Custom, 0.0, 1e-6);
  r.report.add("gauss_curvature_deviation", k_err, Tier::Custom, 0.0, 1e-4);
  r.report.add_info("gauss_curvature_at_origin", k_origin, k_origin);
  const auto H = lw::mean_curvature(r.grid);
  r.report.add("mean_curvature_inverse_norm", 1.0 / H.norm_min, 1.0 / H.norm_min, Tier::Custom, 0.0, 10.0);
  add_closed_form(
      r,
      [](Complex w) {
        const double a = w.real(), b = w.imag();
        return lw::Vec4r{{std::cosh(a) * std::cosh(b), std::sinh(b) * std::cos(b), std::sinh(b) * std::sin(b),
                          std::sinh(a) * std::cosh(b)}};
      },
      1e-10);
  r.details["a"] = p.a.to_string();
  r.details["P"] = p.P.to_string();
  r.details["x"] = x.to_string();
  r.details["y"] = y.to_string();
  r.details["gauss_curvature_at_origin"] = k_origin;
  return r;
}

ExampleResult plane(int n) {
  const lw::Domain d = make_domain({0.0, 1.0, 0.0, 1.0});
  const lw::RectGrid grid = make_grid(d, n ? n : 11);
  ExampleResult r;
  r.grid = lw::build_surface(Field(0.0), Field(0.0), Field(1.0), d, grid);
  r.report = lw::verify_surface(r.grid);
  const auto ab = lw::extract_abmu(r.grid);
  lw::Stat gap;
  for (std::size_t k = 0; k < ab.a.size(); ++k) {
    if (ab.mask[k]) continue;
    gap.push(std::max({std::abs(ab.a[k]), std::abs(ab.b[k]), std::abs(ab.mu[k] - 1.0)}));
  }
  r.report.add("abmu_roundtrip", gap, Tier::Custom, 0.0, 1e-8);
  const auto H = lw::mean_curvature(r.grid);
  r.report.add("mean_curvature_norm", H.norm_max, H.norm_max, lw::jet_tier(r.grid), r.grid.position_norm());
  r.details["a"] = "0";
  r.details["b"] = "0";
  r.details["mu"] = "1";
  return r;
}

ExampleResult umbilic(const Expr& a, const Expr& b, lw::Rect rect, int n) {
  const lw::Domain d = make_domain(rect);
  const lw::RectGrid grid = make_grid(d, n ? n : 21);
  const auto cls = lw::umbilical_classify(Field(a), Field(b), d, grid);
  ExampleResult r;
  r.grid = lw::umbilical_family(cls.data, 0.0, grid, d);
  r.report = lw::verify_surface(r.grid);
  r.report.add("umbilic_normal_residual", cls.normal_residual, cls.normal_residual, Tier::Custom, 0.0, 1e-8);
  r.report.add("umbilic_hyperplane_residual", cls.hyperplane, cls.hyperplane, Tier::Custom, 0.0, 1e-8);
  r.report.add("umbilic_ratio_spread", cls.k_spread, cls.k_spread, Tier::Custom, 0.0, cls.tolerance);
  const auto hp = lw::quadric_membership(r.grid, {lw::QuadricKind::Hyperplane, 1.0, cls.v});
  r.report.add("hyperplane_membership", hp.residual, lw::jet_tier(r.grid), r.grid.position_norm());
  r.details["a"] = a.to_string();
  r.details["b"] = b.to_string();
  r.details["classification"] = lw::umbilic_kind_name(cls.kind);
  r.details["radius"] = cls.radius;
  r.details["k"] = cls.data.k;
  r.details["normal"] = {cls.v[0], cls.v[1], cls.v[2], cls.v[3]};
  return r;
}

}  // namespace

const std::vector<std::string>& example_keys() {
  static const std::vector<std::string> keys = {"catenoid-cousin", "ex62", "ex63", "plane", "umbilic-hyperbolic",
                                                "umbilic-sphere"};
  return keys;
}

ExampleResult run_example(const std::string& key, int res) {
  const Expr WB = Expr::conj_w();
  if (key == "ex62") return ex62(res);
  if (key == "ex63") return ex63(res);
  if (key == "catenoid-cousin") return catenoid_cousin(res);
  if (key == "plane") return plane(res);
  if (key == "umbilic-sphere") return umbilic(WB, -WB, {-0.5, 0.5, -0.5, 0.5}, res);
  if (key == "umbilic-hyperbolic") return umbilic(WB, WB, {0.1, 0.45, 0.1, 0.45}, res);
  std::string known;
  for (const auto& k : example_keys()) known += (known.empty() ? "" : ", ") + k;
  throw lw::Error(lw::Errc::Config, fmt::format("unknown example '{}' (known: {})", key, known));
}

}  // namespace lwtool
