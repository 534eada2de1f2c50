#include <cmath>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "lw/surface.hpp"
#include "lw/verify.hpp"
#include "test_util.hpp"

using lw::Complex;
using lw::Jet;
using lw::MinkVec4;
using testutil::error_code;

namespace {

lw::RectGrid grid_on(double u0, double u1, double v0, double v1, int n) { return {{u0, u1, v0, v1}, n, n}; }

MinkVec4<Jet> plane(Complex w) {
  const Jet z = Jet::variable(w), zb = Jet::conj_variable(w);
  const Jet u = 0.5 * (z + zb), v = (z - zb) / Complex(0.0, 2.0);
  return MinkVec4<Jet>{{Jet::constant(0.0), 2.0 * u, -2.0 * v, Jet::constant(0.0)}};
}

MinkVec4<Jet> shifted_catenoid(Complex w) {
  auto h = testutil::catenoid_cousin(w);
  for (int c = 0; c < 4; ++c) h[c] = h[c] + Complex(c + 1.0);
  return h;
}

double max_K_error(int n) {
  auto g = lw::sample_surface(testutil::catenoid_cousin, grid_on(-0.5, 0.5, -0.5, 0.5, n), lw::Provenance::Analytic);
  const auto K = lw::gauss_curvature(g);
  double err = 0.0;
  for (std::size_t k = 0; k < K.size(); ++k) {
    if (!std::isfinite(K[k])) continue;
    err = std::max(err, std::abs(K[k] - testutil::catenoid_K(g.grid.node(k).imag())));
  }
  return err;
}

}  // namespace

TEST_CASE("metric report on the plane") {
  auto g = lw::sample_surface(plane, grid_on(-1, 1, -1, 1, 9), lw::Provenance::Analytic);
  const auto entries = lw::metric_report(g);
  lw::VerificationReport r;
  r.append(entries);
  CHECK(r.find("null_residual")->max == 0.0);
  CHECK(r.find("conformal_factor_min")->max == doctest::Approx(4.0));
  CHECK_FALSE(r.find("conformal_factor_min")->tolerance.has_value());
  CHECK(r.all_pass());
  const auto H = lw::mean_curvature(g);
  CHECK(H.norm_max == 0.0);
  const auto K = lw::gauss_curvature(g);
  CHECK(std::abs(K[g.grid.index(4, 4)]) < 1e-12);
}

TEST_CASE("catenoid cousin: metric, mean curvature, curvature") {
  auto g = lw::sample_surface(testutil::catenoid_cousin, grid_on(-0.5, 0.5, -0.5, 0.5, 101), lw::Provenance::Analytic);
  double g11_err = 0.0;
  const auto g11 = lw::metric_g11(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    g11_err = std::max(g11_err, std::abs(g11[k] - std::pow(std::cosh(g.grid.node(k).imag()), 2)));
  }
  CHECK(g11_err < 1e-6);

  const auto H = lw::mean_curvature(g);
  CHECK(H.lightlike.max <= 1e-6);
  CHECK(H.norm_max > 0.1);
  CHECK(H.orthogonality.max < 1e-10);

  const auto K = lw::gauss_curvature(g);
  CHECK(K[g.grid.index(50, 50)] == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(max_K_error(101) < 1e-4);

  const auto q = lw::quadric_membership(g, {lw::QuadricKind::H3, 1.0, {}});
  CHECK(q.residual.max < 1e-12);
}

TEST_CASE("curvature converges at second order") {
  const double e1 = max_K_error(21), e2 = max_K_error(41), e3 = max_K_error(81);
  CHECK(std::log2(e1 / e2) >= 1.8);
  CHECK(std::log2(e2 / e3) >= 1.8);
}

TEST_CASE("imported grid round-trips through CSV and verifies at FD tier") {
  auto g = lw::sample_surface(testutil::catenoid_cousin, grid_on(-0.5, 0.5, -0.5, 0.5, 41), lw::Provenance::Analytic);
  std::stringstream csv;
  lw::write_csv(g, csv);
  auto imported = lw::read_csv(csv);
  CHECK(imported.provenance == lw::Provenance::Imported);
  CHECK(imported.jets == lw::JetSource::None);
  const auto report = lw::verify_surface(imported);
  CHECK(imported.jets == lw::JetSource::FiniteDifference);
  CHECK(report.all_pass());
  CHECK(report.find("null_residual")->tier == lw::Tier::FiniteDifference);
  CHECK(report.mask.evaluated == 39u * 39u);

  const auto j = nlohmann::json::parse(report.to_json());
  CHECK(j["pass"] == true);
  CHECK(j["entries"][0]["name"] == "null_residual");
  CHECK(j["entries"][1]["tolerance"].is_null());
  CHECK(report.table().find("PASS") != std::string::npos);
}

TEST_CASE("non-conformal grid") {
  auto g = lw::sample_surface(
      [](Complex w) {
        const Jet z = Jet::variable(w), zb = Jet::conj_variable(w);
        const Jet u = 0.5 * (z + zb), v = (z - zb) / Complex(0.0, 2.0);
        return MinkVec4<Jet>{{Jet::constant(0.0), u, v, u * u}};
      },
      grid_on(-1, 1, -1, 1, 9), lw::Provenance::Analytic);
  lw::VerificationReport r;
  r.append(lw::metric_report(g));
  CHECK_FALSE(r.find("isotropy_residual")->pass);
  CHECK_FALSE(r.all_pass());
  CHECK(error_code([&] { lw::gauss_curvature(g); }) == lw::Errc::NonConformalGrid);
}

TEST_CASE("quadric membership: cone and hyperplane") {
  const auto cone = [](Complex w) {
    const Jet x = Jet::conj_variable(w);
    const Jet xb = Jet::variable(w);
    return MinkVec4<Jet>{{1.0 + x * xb, x + xb, Complex(0.0, -1.0) * (x - xb), -1.0 + x * xb}};
  };
  auto g = lw::sample_surface(cone, grid_on(0.2, 1, -0.5, 0.5, 9), lw::Provenance::Analytic);
  const auto q = lw::quadric_membership(g, {lw::QuadricKind::Cone, 1.0, {}});
  CHECK(q.residual.max < 1e-14);
  CHECK(q.future_pointing);

  auto p = lw::sample_surface(plane, grid_on(-1, 1, -1, 1, 9), lw::Provenance::Analytic);
  const auto h = lw::quadric_membership(p, {lw::QuadricKind::Hyperplane, 1.0, lw::Vec4r{{1, 0, 0, 0}}});
  CHECK(h.residual.max == 0.0);
  const auto h1 = lw::quadric_membership(p, {lw::QuadricKind::Hyperplane, 1.0, lw::Vec4r{{0, 1, 0, 0}}});
  CHECK(h1.residual.max == doctest::Approx(1.0));
}

TEST_CASE("congruence residual") {
  const auto G = grid_on(-0.5, 0.5, -0.5, 0.5, 11);
  auto a = lw::sample_surface(shifted_catenoid, G, lw::Provenance::Analytic);
  auto b = lw::sample_surface(testutil::catenoid_cousin, G, lw::Provenance::Analytic);
  const auto c = lw::congruence_residual(a, b);
  for (int k = 0; k < 4; ++k) CHECK(c.v[k] == doctest::Approx(k + 1.0));
  CHECK(c.residual < 1e-14);

  auto twice = b;
  for (auto& x : twice.f) x = 2.0 * x;
  CHECK(lw::congruence_residual(twice, b).residual > 0.1);

  auto coarse = lw::sample_surface(testutil::catenoid_cousin, grid_on(-0.5, 0.5, -0.5, 0.5, 9), lw::Provenance::Analytic);
  CHECK(error_code([&] { lw::congruence_residual(coarse, b); }) == lw::Errc::GridMismatch);
}

TEST_CASE("tolerance tier override") {
  lw::Tier t = lw::Tier::Analytic;
  CHECK(lw::tolerance_for(t, 3.0) == lw::kTolAnalytic);
  t = lw::Tier::FiniteDifference;
  CHECK(lw::tolerance_for(t, 3.0) == doctest::Approx(4e-5));
  CHECK(lw::tier_from_name("integrated") == lw::Tier::Integrated);
  CHECK_FALSE(lw::tier_from_name("bogus").has_value());
}
