#include "lw/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "json.hpp"
#include "lw/errors.hpp"

namespace lw {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

ReportEntry& VerificationReport::add(const std::string& name, const Stat& s, Tier tier, double f_norm,
                                     double custom_tol) {
  return add(name, s.max, s.mean(), tier, f_norm, custom_tol);
}

ReportEntry& VerificationReport::add(const std::string& name, double max, double mean, Tier tier, double f_norm,
                                     double custom_tol) {
  ReportEntry e;
  e.name = name;
  e.max = max;
  e.mean = mean;
  e.tier = tier;
  const double tol = tolerance_for(e.tier, f_norm, custom_tol);
  e.tolerance = tol;
  e.pass = std::isfinite(max) && max <= tol;
  entries.push_back(e);
  return entries.back();
}

ReportEntry& VerificationReport::add_info(const std::string& name, double max, double mean) {
  ReportEntry e;
  e.name = name;
  e.max = max;
  e.mean = mean;
  entries.push_back(e);
  return entries.back();
}

void VerificationReport::append(const std::vector<ReportEntry>& more) {
  entries.insert(entries.end(), more.begin(), more.end());
}

bool VerificationReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const ReportEntry& e) { return e.pass; });
}

const ReportEntry* VerificationReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

namespace {

nlohmann::ordered_json number_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace

std::string VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["provenance"] = provenance;
  j["mask"] = {{"total", mask.total}, {"masked", mask.masked}, {"evaluated", mask.evaluated}};
  j["pass"] = all_pass();
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json item;
    item["name"] = e.name;
    item["max"] = number_or_null(e.max);
    item["mean"] = number_or_null(e.mean);
    item["tolerance"] = e.tolerance ? number_or_null(*e.tolerance) : nlohmann::ordered_json(nullptr);
    item["tier"] = e.tolerance ? nlohmann::ordered_json(tier_name(e.tier)) : nlohmann::ordered_json(nullptr);
    item["pass"] = e.pass;
    list.push_back(item);
  }
  j["entries"] = list;
  return j.dump(2) + "\n";
}

std::string VerificationReport::table() const {
  std::size_t width = 4;
  for (const auto& e : entries) width = std::max(width, e.name.size());
  std::string out = fmt::format("{:<{}}  {:>12}  {:>12}  {:>10}  {:<10}  {}\n", "name", width, "max", "mean",
                                "tolerance", "tier", "status");
  for (const auto& e : entries) {
    const std::string tol = e.tolerance ? fmt::format("{:.3g}", *e.tolerance) : "-";
    const std::string status = !e.tolerance ? "info" : (e.pass ? "PASS" : "FAIL");
    out += fmt::format("{:<{}}  {:>12.4e}  {:>12.4e}  {:>10}  {:<10}  {}\n", e.name, width, e.max, e.mean, tol,
                       e.tolerance ? tier_name(e.tier) : "-", status);
  }
  out += fmt::format("nodes: {} total, {} masked, {} evaluated; provenance {}\n", mask.total, mask.masked,
                     mask.evaluated, provenance);
  return out;
}

std::vector<std::size_t> interior_nodes(const SurfaceGrid& g) {
  std::vector<std::size_t> out;
  const bool have_jets = g.fw.size() == g.size();
  for (int j = 1; j < g.grid.nv - 1; ++j) {
    for (int i = 1; i < g.grid.nu - 1; ++i) {
      const std::size_t k = g.grid.index(i, j);
      if (g.masked(k)) continue;
      if (have_jets && !std::isfinite(max_abs(g.fw[k]))) continue;
      out.push_back(k);
    }
  }
  return out;
}

void ensure_jets(SurfaceGrid& g) {
  if (g.jets == JetSource::None) compute_fd_jets(g);
}

Tier jet_tier(const SurfaceGrid& g) {
  return g.jets == JetSource::Exact ? Tier::Analytic : Tier::FiniteDifference;
}

Tier position_tier(const SurfaceGrid& g) {
  switch (g.provenance) {
    case Provenance::Analytic: return Tier::Analytic;
    case Provenance::Integrated: return Tier::Integrated;
    case Provenance::Imported: return Tier::FiniteDifference;
  }
  return Tier::FiniteDifference;
}

std::vector<double> metric_g11(const SurfaceGrid& g) {
  std::vector<double> out(g.size(), kNaN);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.masked(k)) continue;
    out[k] = 2.0 * inner(g.fw[k], conj(g.fw[k])).real();
  }
  return out;
}

namespace {

struct Partials {
  Vec4r fu, fv;
};

Partials partials(const Vec4c& fw) { return {2.0 * real_part(fw), -2.0 * imag_part(fw)}; }

}  // namespace

std::vector<ReportEntry> metric_report(const SurfaceGrid& g) {
  Stat null, iso, nonpos;
  double gmin = std::numeric_limits<double>::infinity();
  Stat gstat;
  for (std::size_t k : interior_nodes(g)) {
    null.push(std::abs(inner(g.fw[k], g.fw[k])));
    const auto [fu, fv] = partials(g.fw[k]);
    const double g11 = inner(fu, fu), g22 = inner(fv, fv), g12 = inner(fu, fv);
    iso.push(std::abs(g11 - g22) + std::abs(g12));
    const double conformal = 2.0 * inner(g.fw[k], conj(g.fw[k])).real();
    gmin = std::min(gmin, conformal);
    gstat.push(conformal);
    nonpos.push(conformal > 0.0 ? 0.0 : 1.0);
  }
  VerificationReport r;
  const Tier t = jet_tier(g);
  const double fn = g.position_norm();
  r.add("null_residual", null, t, fn);
  r.add_info("conformal_factor_min", gmin, gstat.mean());
  r.add("conformal_factor_nonpositive", nonpos, Tier::Custom, 0.0, 0.0);
  r.add("isotropy_residual", iso, t, fn);
  return r.entries;
}

MeanCurvature mean_curvature(const SurfaceGrid& g) {
  MeanCurvature m;
  m.H.assign(g.size(), Vec4r{{kNaN, kNaN, kNaN, kNaN}});
  m.norm_min = std::numeric_limits<double>::infinity();
  for (std::size_t k : interior_nodes(g)) {
    const double g11 = 2.0 * inner(g.fw[k], conj(g.fw[k])).real();
    const Vec4r H = (2.0 / g11) * real_part(g.fwwb[k]);
    m.H[k] = H;
    m.lightlike.push(std::abs(inner(H, H)));
    const auto [fu, fv] = partials(g.fw[k]);
    m.orthogonality.push(std::max(std::abs(inner(H, fu)), std::abs(inner(H, fv))));
    m.norm_max = std::max(m.norm_max, max_abs(H));
    m.norm_min = std::min(m.norm_min, max_abs(H));
  }
  if (m.lightlike.n == 0) m.norm_min = 0.0;
  return m;
}

std::vector<double> gauss_curvature(const SurfaceGrid& g) {
  const auto g11 = metric_g11(g);
  for (const auto& e : metric_report(g)) {
    if (e.name == "isotropy_residual" && !e.pass) {
      throw Error(Errc::NonConformalGrid, fmt::format("isotropy residual {:.3e} exceeds {:.3e}", e.max, *e.tolerance));
    }
  }
  const RectGrid& G = g.grid;
  std::vector<double> K(g.size(), kNaN);
  const double hu = G.hu(), hv = G.hv();
  for (int j = 1; j < G.nv - 1; ++j) {
    for (int i = 1; i < G.nu - 1; ++i) {
      const double c = g11[G.index(i, j)];
      const double e = g11[G.index(i + 1, j)], w = g11[G.index(i - 1, j)];
      const double n = g11[G.index(i, j + 1)], s = g11[G.index(i, j - 1)];
      if (!(c > 0 && e > 0 && w > 0 && n > 0 && s > 0)) continue;
      const double lap = (std::log(e) - 2.0 * std::log(c) + std::log(w)) / (hu * hu) +
                         (std::log(n) - 2.0 * std::log(c) + std::log(s)) / (hv * hv);
      K[G.index(i, j)] = -lap / (2.0 * c);
    }
  }
  return K;
}

QuadricResult quadric_membership(const SurfaceGrid& g, const Quadric& q) {
  QuadricResult r;
  for (std::size_t k : interior_nodes(g)) {
    const Vec4r& f = g.f[k];
    switch (q.kind) {
      case QuadricKind::Cone:
        r.residual.push(std::abs(inner(f, f)));
        r.future_pointing = r.future_pointing && f[0] > 0.0;
        break;
      case QuadricKind::H3: r.residual.push(std::abs(inner(f, f) + q.c * q.c)); break;
      case QuadricKind::Hyperplane: r.residual.push(std::abs(inner(g.fw[k], q.v))); break;
    }
  }
  return r;
}

Congruence congruence_residual(const SurfaceGrid& a, const SurfaceGrid& b) {
  if (a.grid.nu != b.grid.nu || a.grid.nv != b.grid.nv) throw Error(Errc::GridMismatch, "resolutions differ");
  const auto same = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)); };
  if (!same(a.grid.rect.u0, b.grid.rect.u0) || !same(a.grid.rect.u1, b.grid.rect.u1) ||
      !same(a.grid.rect.v0, b.grid.rect.v0) || !same(a.grid.rect.v1, b.grid.rect.v1)) {
    throw Error(Errc::GridMismatch, "domains differ");
  }
  Congruence c;
  std::size_t n = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a.masked(k) || b.masked(k)) continue;
    c.v += a.f[k] - b.f[k];
    ++n;
  }
  if (n == 0) throw Error(Errc::GridMismatch, "no common unmasked nodes");
  c.v = c.v / static_cast<double>(n);
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a.masked(k) || b.masked(k)) continue;
    c.residual = std::max(c.residual, max_abs(a.f[k] - b.f[k] - c.v));
  }
  return c;
}

VerificationReport verify_surface(SurfaceGrid& g) {
  ensure_jets(g);
  VerificationReport r;
  r.provenance = provenance_name(g.provenance);
  const auto nodes = interior_nodes(g);
  r.mask = MaskStats{g.size(), g.masked_count(), nodes.size()};
  r.append(metric_report(g));
  const MeanCurvature H = mean_curvature(g);
  r.add("mean_curvature_orthogonality", H.orthogonality, jet_tier(g), g.position_norm());
  r.add_info("mean_curvature_lightlike", H.lightlike.max, H.lightlike.mean());
  r.add_info("mean_curvature_norm_max", H.norm_max, H.norm_max);
  r.add_info("mean_curvature_norm_min", H.norm_min, H.norm_min);
  try {
    const auto K = gauss_curvature(g);
    Stat ks;
    double kmin = std::numeric_limits<double>::infinity(), kmax = -kmin;
    for (double k : K) {
      if (!std::isfinite(k)) continue;
      ks.push(std::abs(k));
      kmin = std::min(kmin, k);
      kmax = std::max(kmax, k);
    }
    r.add_info("gauss_curvature_min", kmin, ks.mean());
    r.add_info("gauss_curvature_max", kmax, ks.mean());
  } catch (const Error&) {
    r.add_info("gauss_curvature_min", kNaN, kNaN);
  }
  return r;
}

}  // namespace lw
