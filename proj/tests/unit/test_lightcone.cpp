#include <cmath>

#include "doctest.h"
#include "lw/lightcone.hpp"
#include "lw/verify.hpp"
#include "lw/weierstrass.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using lw::Complex;
using lw::ConeImmersion;
using lw::Expr;
using lw::Field;
using testutil::error_code;

namespace {

const Expr W = Expr::w();
const Expr WB = Expr::conj_w();
const Complex I(0.0, 1.0);

lw::Domain rect(double u0, double u1, double v0, double v1) {
  lw::Domain d;
  d.rect = {u0, u1, v0, v1};
  return d;
}

// Cone point written out by hand: s * (1+|x|^2, 2Re x, 2Im x, +-(|x|^2 - 1)).
std::array<Complex, 4> cone_point(ConeImmersion::Kind kind, double s, Complex x) {
  const double n = std::norm(x);
  const double last = kind == ConeImmersion::Kind::L3 ? n - 1.0 : 1.0 - n;
  return {s * (1.0 + n), s * 2.0 * x.real(), s * 2.0 * x.imag(), s * last};
}

// max over components of |mu W(a,b) - f_w|, with f_w from finite differences.
double frame_mismatch(const ConeImmersion& c, const lw::FrameFields& ff, Complex w) {
  const auto W4 = lw::w_vector(ff.a.value(w), ff.b.value(w));
  const Complex mu = ff.mu.value(w);
  double err = 0.0;
  for (int k = 0; k < 4; ++k) {
    const auto comp = [&](Complex z) { return cone_point(c.kind, c.scale.value(z).real(), c.x.value(z))[k]; };
    err = std::max(err, std::abs(mu * W4[k] - oracle::d_w(comp, w)));
  }
  return err;
}

}  // namespace

TEST_CASE("cone_extract: worked examples") {
  const Field lam = exp(W + WB);  // e^{2u}
  const auto h = lw::cone_extract({ConeImmersion::Kind::L3, lam, W});
  const Complex w(0.7, 0.3);
  CHECK(std::abs(h.a.value(w) - (w + 1.0)) < 1e-12);
  CHECK(std::abs(h.b.value(w) - 1.0 / std::conj(w)) < 1e-12);

  const auto a = lw::cone_extract({ConeImmersion::Kind::L3, Field(1.0), WB});
  CHECK(std::abs(a.a.value(w) - std::conj(w)) < 1e-14);
  CHECK(std::abs(a.b.value(w)) < 1e-14);

  CHECK(error_code([&] { lw::cone_extract({ConeImmersion::Kind::L3, Field(1.0), W + WB}); }) ==
        lw::Errc::CaseViolation);
  CHECK(error_code([&] { lw::cone_extract({ConeImmersion::Kind::L3, Field(2.0), W}); }) == lw::Errc::CaseViolation);
}

TEST_CASE("cone_extract: all four cases reproduce f_w") {
  const Field lam = exp(W + WB) * (1.0 + W * WB);
  const std::vector<ConeImmersion> cases = {
      {ConeImmersion::Kind::L3, lam, W * W},
      {ConeImmersion::Kind::L3, lam, WB + 0.5},
      {ConeImmersion::Kind::L0, lam, W * W},
      {ConeImmersion::Kind::L0, lam, WB + 0.5},
  };
  for (const auto& c : cases) {
    const auto ff = lw::cone_extract(c);
    for (Complex w : {Complex(0.6, 0.2), Complex(0.9, -0.4)}) CHECK(frame_mismatch(c, ff, w) < 1e-7);
  }
}

TEST_CASE("solve_lambda_scale: closed form and the compatibility gate") {
  const auto d = rect(0.1, 0.5, -0.3, 0.3);
  const auto pts = lw::sample_points(d, {d.rect, 9, 9});
  const auto s = lw::solve_lambda_scale(WB, 2.0 * WB, d, pts);
  CHECK(s.closed_form);
  CHECK(s.residual <= 1e-10);
  const Complex w(0.3, 0.1);
  CHECK(s.scale.value(w).real() == doctest::Approx(1.0 / (1.0 - 2.0 * std::norm(w))));

  // Independent check of d/dw ln lambda against the right-hand side.
  const auto lnl = [&](Complex z) { return std::log(s.scale.value(z)); };
  const Complex rhs = 1.0 * 2.0 * std::conj(w) / (1.0 - w * 2.0 * std::conj(w));
  CHECK(std::abs(oracle::d_w(lnl, w) - rhs) < 1e-8);

  const auto r = lw::solve_rho_scale(WB, 2.0 * WB, d, pts);
  CHECK(r.residual <= 1e-10);

  CHECK(error_code([&] { lw::solve_lambda_scale(WB, I * WB, d, pts); }) == lw::Errc::NotSolvable);
}

TEST_CASE("Moebius map and its real solution") {
  const lw::MoebiusVector e0{lw::Vec4r{{1, 0, 0, 0}}}, e1{lw::Vec4r{{0, 1, 0, 0}}}, e3{lw::Vec4r{{0, 0, 0, 1}}};
  const Complex p(0.3, -1.2);
  CHECK(std::abs(lw::moebius_apply(e0, p) + p) < 1e-15);
  CHECK(std::abs(lw::moebius_apply(e3, p) - p) < 1e-15);
  CHECK(error_code([&] { lw::moebius_apply(e1, Complex(0.0)); }) == lw::Errc::PoleContact);

  const auto d = rect(0.2, 0.8, -0.3, 0.3);
  const auto pts = lw::sample_points(d, {d.rect, 7, 7});
  CHECK(lw::hyperplane_test(-WB, WB, e0, pts) == 0.0);
  CHECK(lw::hyperplane_test(WB, WB, e3, pts) == 0.0);
  CHECK(lw::hyperplane_test(W, W * W, e0, pts) > 0.1);

  const Field lam = lw::moebius_lambda(e1, WB, 1.0);
  CHECK(std::abs(lam.value(1.0) - 0.5) < 1e-15);

  // lambda solves its equation with a = M_v(b).
  const Field a = lw::moebius_apply(e1, Field(WB));
  const Complex w(0.5, 0.2);
  const auto lnl = [&](Complex z) { return std::log(lam.value(z)); };
  const Complex ca_w = oracle::d_w([&](Complex z) { return std::conj(a.value(z)); }, w);
  const Complex rhs = std::conj(w) * ca_w / (1.0 - std::conj(w) * std::conj(a.value(w)));
  CHECK(std::abs(oracle::d_w(lnl, w) - rhs) < 1e-7);

  // The solver reaches the same solution up to a positive constant.
  const auto s = lw::solve_lambda_scale(a, WB, d, pts);
  CHECK(s.residual <= 1e-8);
  const double c0 = s.scale.value(pts[0]).real() / lam.value(pts[0]).real();
  for (Complex z : pts) CHECK(s.scale.value(z).real() / lam.value(z).real() == doctest::Approx(c0).epsilon(1e-8));
}

TEST_CASE("umbilical classification") {
  const auto d = rect(0.1, 0.6, 0.1, 0.6);
  const lw::RectGrid G{d.rect, 11, 11};

  const auto s = lw::umbilical_classify(WB, -WB, d, G);
  CHECK(s.kind == lw::UmbilicKind::Sphere);
  CHECK(s.data.k == doctest::Approx(-1.0));
  CHECK(s.radius == doctest::Approx(1.0));
  CHECK(std::abs(std::abs(s.v[0]) - 1.0) < 1e-10);
  CHECK(s.hyperplane <= 1e-8);
  CHECK(s.normal_residual <= 1e-10);

  const auto h = lw::umbilical_classify(WB, WB, d, G);
  CHECK(h.kind == lw::UmbilicKind::Hyperbolic);
  CHECK(std::abs(std::abs(h.v[3]) - 1.0) < 1e-10);
  CHECK(h.hyperplane <= 1e-8);

  CHECK(error_code([&] { lw::umbilical_classify(WB, Field(0.5), d, G); }) == lw::Errc::NotUmbilicalData);
  CHECK(error_code([&] { lw::umbilical_classify(WB, I * WB, d, G); }) == lw::Errc::NotUmbilicalData);
}

TEST_CASE("umbilical family") {
  const auto d = rect(0.1, 0.45, 0.1, 0.45);
  const lw::RectGrid G{d.rect, 11, 11};
  const auto s = lw::umbilical_classify(WB, 2.0 * WB, d, G);

  auto g0 = lw::umbilical_family(s.data, 0.0, G, d);
  const auto cone = lw::quadric_membership(g0, {lw::QuadricKind::Cone, 1.0, {}});
  CHECK(cone.residual.max <= 1e-9);
  CHECK(cone.future_pointing);

  auto g1 = lw::umbilical_family(s.data, 1.0, G, d);
  double err = 0.0;
  for (std::size_t k = 0; k < g1.size(); ++k) {
    const Complex w = G.node(k);
    const Complex a = std::conj(w), b = 2.0 * std::conj(w);
    const double expect = -4.0 * s.data.rho.value(w).real() * s.data.lambda.value(w).real() *
                          std::norm(1.0 - a * std::conj(b));
    err = std::max(err, std::abs(lw::inner(g1.f[k], g1.f[k]) - expect));
  }
  CHECK(err <= 1e-8);

  const auto forms = lw::fundamental_forms(lw::extract_abmu(g1));
  for (std::size_t k = 0; k < g1.size(); ++k) CHECK(forms.umbilic[k] == 1);

  // The cone immersion returns the data it was built from.
  const auto abmu = lw::extract_abmu(g0);
  double back = 0.0;
  for (std::size_t k = 0; k < g0.size(); ++k) {
    const Complex w = G.node(k);
    back = std::max({back, std::abs(abmu.a[k] - std::conj(w)), std::abs(abmu.b[k] - 2.0 * std::conj(w))});
  }
  CHECK(back <= 1e-8);

  // The sphere slice has non-lightlike mean curvature.
  const auto sp = lw::umbilical_classify(WB, -WB, d, G);
  auto sphere = lw::umbilical_family(sp.data, 0.0, G, d);
  CHECK(lw::mean_curvature(sphere).lightlike.mean() > 1e-3);
}

TEST_CASE("flat cone surface with lightlike mean curvature") {
  const ConeImmersion c{ConeImmersion::Kind::L3, exp(W + WB), W};
  const lw::RectGrid G{{-0.5, 0.5, -0.5, 0.5}, 41, 41};
  auto g = lw::sample_surface(lw::cone_surface(c), G, lw::Provenance::Analytic);
  const auto K = lw::gauss_curvature(g);
  double kmax = 0.0;
  for (double k : K)
    if (std::isfinite(k)) kmax = std::max(kmax, std::abs(k));
  CHECK(kmax <= 1e-4);
  const auto H = lw::mean_curvature(g);
  CHECK(H.lightlike.max <= 1e-10);
  CHECK(H.norm_max > 0.1);
  const auto q = lw::quadric_membership(g, {lw::QuadricKind::Cone, 1.0, {}});
  CHECK(q.future_pointing);
}
