#include <cmath>

#include "doctest.h"
#include "lw/surface.hpp"
#include "lw/verify.hpp"
#include "lw/weierstrass.hpp"
#include "test_util.hpp"

using lw::Complex;
using lw::Expr;
using lw::Field;
using testutil::error_code;

namespace {

const Expr W = Expr::w();
const Expr WB = Expr::conj_w();

lw::Domain rect(double u0, double u1, double v0, double v1) {
  lw::Domain d;
  d.rect = {u0, u1, v0, v1};
  return d;
}

lw::MuOptions on_grid(const lw::Domain& d, int n, lw::MuStrategy s = lw::MuStrategy::Auto) {
  lw::MuOptions o;
  o.strategy = s;
  o.grid = {d.rect, n, n};
  o.w0 = d.rect.center();
  return o;
}

}  // namespace

TEST_CASE("solve_mu closed forms") {
  const auto d = rect(0.1, 0.5, -0.3, 0.3);
  const auto holo = lw::solve_mu(W, W * W, d, on_grid(d, 9));
  CHECK(holo.strategy == lw::MuStrategy::BothHolomorphic);
  CHECK(holo.mu.value({0.3, 0.1}) == Complex(1.0));
  CHECK(holo.residual == 0.0);

  const auto anti = lw::solve_mu(WB, 2.0 * WB, d, on_grid(d, 9));
  CHECK(anti.strategy == lw::MuStrategy::BothAntiHolomorphic);
  CHECK(anti.residual < 1e-10);
  const Complex w(0.3, 0.2);
  const double expect = 1.0 / std::pow(1.0 - 2.0 * std::norm(w), 2);
  CHECK(std::abs(anti.mu.value(w) - expect) < 1e-12);
}

TEST_CASE("solve_mu numeric converges at second order") {
  const auto d = rect(0.2, 0.6, -0.2, 0.2);
  double prev = 0.0;
  for (int n : {17, 33, 65}) {
    const auto s = lw::solve_mu(W, WB, d, on_grid(d, n));
    CHECK(s.strategy == lw::MuStrategy::Numeric);
    if (prev > 0.0) CHECK(std::log2(prev / s.residual_core) >= 1.8);
    prev = s.residual_core;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("solve_mu rejects a degenerate frame") {
  const auto d = rect(0.5, 1.5, -0.5, 0.5);
  CHECK(error_code([&] { lw::solve_mu(WB, WB, d, on_grid(d, 11)); }) == lw::Errc::DegenerateFrame);
}

TEST_CASE("compatibility residual") {
  const auto d = rect(0.1, 0.5, -0.3, 0.3);
  const auto pts = lw::sample_points(d, {d.rect, 9, 9});
  const auto h = lw::compatibility_residual(W, W * W, Field(1.0), pts);
  CHECK(h.res1 == 0.0);
  CHECK(h.res11 == 0.0);

  const auto mu = lw::solve_mu(WB, 2.0 * WB, d, on_grid(d, 9)).mu;
  const auto a = lw::compatibility_residual(WB, 2.0 * WB, mu, pts);
  CHECK(a.res1 <= 1e-10);
  CHECK(a.res11 <= 1e-10);

  const Complex i(0.0, 1.0);
  const auto at_one = lw::compatibility_residual(WB, i * WB, Field(1.0), {Complex(1.0, 0.0)});
  CHECK(at_one.res11 < 1e-14);  // the two sides happen to agree at w = 1
  const auto bad = lw::compatibility_residual(WB, i * WB, Field(1.0), pts);
  CHECK(bad.res11 > 0.1);
}

TEST_CASE("build_surface: plane") {
  const auto d = rect(-1, 1, -1, 1);
  auto g = lw::build_surface(Field(0.0), Field(0.0), Field(1.0), d, {d.rect, 9, 9});
  CHECK(g.masked_count() == 0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Complex w = g.grid.node(k);
    CHECK(std::abs(g.f[k][0]) < 1e-14);
    CHECK(g.f[k][1] == doctest::Approx(2.0 * w.real()));
    CHECK(g.f[k][2] == doctest::Approx(-2.0 * w.imag()));
    CHECK(std::abs(g.f[k][3]) < 1e-14);
  }
  const auto abmu = lw::extract_abmu(g);
  CHECK(std::abs(abmu.a[40]) == 0.0);
  CHECK(std::abs(abmu.b[40]) == 0.0);
  CHECK(abmu.mu[40] == Complex(1.0));
  const auto forms = lw::fundamental_forms(abmu);
  CHECK(forms.first[40] == doctest::Approx(4.0));
  CHECK(std::abs(forms.second[40].alpha_ww) == 0.0);
  CHECK(forms.umbilic[40] == 1);
}

TEST_CASE("build_surface: base point and anti-holomorphic data") {
  const auto d = rect(0.1, 0.5, -0.3, 0.3);
  const lw::RectGrid G{d.rect, 9, 9};
  const Field a = WB, b = 2.0 * WB;
  const auto mu = lw::solve_mu(a, b, d, on_grid(d, 9)).mu;
  lw::BuildOptions opts;
  opts.p0 = lw::Vec4r{{1, 2, 3, 4}};
  opts.w0 = G.node(4, 4);
  auto g = lw::build_surface(a, b, mu, d, G, opts);
  CHECK(g.provenance == lw::Provenance::Integrated);
  CHECK(g.jets == lw::JetSource::Exact);
  for (int c = 0; c < 4; ++c) CHECK(g.f[G.index(4, 4)][c] == opts.p0[c]);

  const auto report = lw::verify_surface(g);
  CHECK(report.find("null_residual")->max <= 1e-10);
  CHECK(report.find("conformal_factor_nonpositive")->max == 0.0);

  const auto d2 = lw::extract_abmu(g);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Complex w = G.node(k);
    err = std::max({err, std::abs(d2.a[k] - a.value(w)), std::abs(d2.b[k] - b.value(w)), std::abs(d2.mu[k] - mu.value(w))});
  }
  CHECK(err <= 1e-8);
  const auto forms = lw::fundamental_forms(d2);
  for (auto u : forms.umbilic) CHECK(u == 1);

  // f_wwbar from the frame formula against second differences of f, which
  // converge at second order.
  const auto fd_error = [&](int n) {
    const lw::RectGrid fine{d.rect, n, n};
    auto exact = lw::build_surface(a, b, mu, d, fine);
    auto fd = exact;
    fd.jets = lw::JetSource::None;
    lw::compute_fd_jets(fd);
    double diff = 0.0, scale = 0.0;
    for (std::size_t k : lw::interior_nodes(exact)) {
      diff = std::max(diff, lw::max_abs(fd.fwwb[k] - exact.fwwb[k]));
      scale = std::max(scale, lw::max_abs(exact.fwwb[k]));
    }
    return diff / scale;
  };
  const double e1 = fd_error(17), e2 = fd_error(33);
  CHECK(e2 < 1e-3);
  CHECK(std::log2(e1 / e2) >= 1.8);
}

TEST_CASE("a = -b gives a surface in a spacelike hyperplane") {
  const auto d = rect(-0.5, 0.5, -0.5, 0.5);
  const lw::RectGrid G{d.rect, 11, 11};
  const auto mu = lw::solve_mu(WB, -WB, d, on_grid(d, 11)).mu;
  auto g = lw::build_surface(WB, -WB, mu, d, G);
  double spread = 0.0;
  for (const auto& f : g.f) spread = std::max(spread, std::abs(f[0] - g.f[0][0]));
  CHECK(spread < 1e-12);
  const auto q = lw::quadric_membership(g, {lw::QuadricKind::Hyperplane, 1.0, lw::Vec4r{{1, 0, 0, 0}}});
  CHECK(q.residual.max <= 1e-9);
}

TEST_CASE("extract_abmu: symbolic cone and finite-difference catenoid cousin") {
  const Expr x = WB, xb = W;
  const Complex i(0.0, 1.0);
  const auto s = lw::extract_abmu({1.0 + x * xb, x + xb, -i * (x - xb), -1.0 + x * xb});
  const Complex w(0.4, -0.7);
  CHECK(std::abs(lw::eval(s.a, w) - std::conj(w)) < 1e-14);

  const lw::RectGrid G{{0.0, 0.01, 0.0, 0.01}, 11, 11};
  auto g = lw::sample_surface(testutil::catenoid_cousin, G, lw::Provenance::Analytic);
  g.jets = lw::JetSource::None;
  g.provenance = lw::Provenance::Imported;
  const auto d = lw::extract_abmu(g);
  double err = 0.0;
  for (int j = 1; j < 10; ++j)
    for (int k = 1; k < 10; ++k) {
      const std::size_t n = G.index(k, j);
      err = std::max(err, std::abs(d.a[n] - i * std::exp(G.node(k, j))));
    }
  CHECK(err < 1e-6);

  auto exact = lw::sample_surface(testutil::catenoid_cousin, {{-0.5, 0.5, -0.5, 0.5}, 11, 11}, lw::Provenance::Analytic);
  const auto forms = lw::fundamental_forms(lw::extract_abmu(exact));
  for (std::size_t k = 0; k < exact.size(); ++k)
    CHECK(forms.first[k] == doctest::Approx(std::pow(std::cosh(exact.grid.node(k).imag()), 2)));
  CHECK(forms.umbilic[60] == 0);
}

TEST_CASE("extract_abmu: every node degenerate") {
  lw::SurfaceGrid g;
  g.grid = {{0, 1, 0, 1}, 3, 3};
  g.f.assign(9, lw::Vec4r{});
  g.fw.assign(9, lw::Vec4c{{1, 0, 0, 1}});
  g.fww = g.fwwb = std::vector<lw::Vec4c>(9);
  g.jets = lw::JetSource::Exact;
  g.mask.assign(9, 0);
  CHECK(error_code([&] { lw::extract_abmu(g); }) == lw::Errc::AllDegenerate);
}

TEST_CASE("mu_ratio_test") {
  const auto d = rect(0.1, 0.5, -0.3, 0.3);
  const auto pts = lw::sample_points(d, {d.rect, 7, 7});
  const auto holo = lw::mu_ratio_test(W, Field(1.0), false, pts);
  CHECK_FALSE(holo.real_constant);

  const Expr a = WB, b = 2.0 * WB;
  const Expr norm = 1.0 / ((1.0 - conj(a) * b) * (1.0 - a * conj(b)));
  const auto real = lw::mu_ratio_test(3.0 * norm, norm, true, pts);
  CHECK(real.real_constant);
  CHECK(real.value == doctest::Approx(3.0));

  const Complex i(0.0, 1.0);
  CHECK(error_code([&] { lw::mu_ratio_test(i * norm, norm, true, pts); }) == lw::Errc::RatioNotHolomorphic);
  CHECK(error_code([&] { lw::mu_ratio_test(WB, Field(1.0), false, pts); }) == lw::Errc::RatioNotHolomorphic);
}
