#include "lw/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "lw/errors.hpp"
#include "lw/verify.hpp"

namespace lw {

std::vector<Complex> sample_points(const Domain& domain, const RectGrid& grid) {
  std::vector<Complex> out;
  out.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Complex w = grid.node(k);
    if (domain.admissible(w)) out.push_back(w);
  }
  return out;
}

Field mu_equation_rhs(const Field& a, const Field& b) {
  const Field one(1.0);
  return conj(b) * derive_wbar(a) / (one - a * conj(b)) + conj(a) * derive_wbar(b) / (one - b * conj(a));
}

const char* mu_strategy_name(MuStrategy s) {
  switch (s) {
    case MuStrategy::Auto: return "auto";
    case MuStrategy::BothHolomorphic: return "holomorphic";
    case MuStrategy::BothAntiHolomorphic: return "anti-holomorphic";
    case MuStrategy::Numeric: return "numeric";
  }
  return "?";
}

namespace {

void check_frame(const Field& a, const Field& b, const std::vector<Complex>& points) {
  for (Complex w : points) {
    const Complex d = 1.0 - a.value(w) * std::conj(b.value(w));
    if (std::abs(d) < kDomainEps) {
      throw Error(Errc::DegenerateFrame, fmt::format("a conj(b) = 1 near w = {}{:+}i", w.real(), w.imag()));
    }
  }
}

MuStrategy resolve(MuStrategy s, const Field& a, const Field& b) {
  if (s != MuStrategy::Auto) return s;
  const Holomorphy ha = classify(a), hb = classify(b);
  if (ha == Holomorphy::Holomorphic && hb == Holomorphy::Holomorphic) return MuStrategy::BothHolomorphic;
  if (ha == Holomorphy::AntiHolomorphic && hb == Holomorphy::AntiHolomorphic) return MuStrategy::BothAntiHolomorphic;
  return MuStrategy::Numeric;
}

}  // namespace

MuSolution solve_mu(const Field& a, const Field& b, const Domain& domain, const MuOptions& opts) {
  const auto points = sample_points(domain, opts.grid);
  check_frame(a, b, points);
  MuSolution out;
  out.strategy = resolve(opts.strategy, a, b);
  const Field rhs = mu_equation_rhs(a, b);
  const Field one(1.0);

  switch (out.strategy) {
    case MuStrategy::BothHolomorphic: out.mu = one; break;
    case MuStrategy::BothAntiHolomorphic:
      out.mu = Field(opts.h) / ((one - conj(a) * b) * (one - a * conj(b)));
      break;
    case MuStrategy::Numeric: {
      // The gauge point falls back to the grid center when it lies outside.
      const Complex gauge = opts.grid.rect.contains(opts.w0) ? opts.w0 : opts.grid.rect.center();
      const DbarSolution sol = solve_dbar(sample(rhs, opts.grid), gauge, 0.0);
      out.mu = exp(as_field(sol.G));
      out.residual = sol.residual;
      out.residual_core = sol.residual_core;
      return out;
    }
    case MuStrategy::Auto: break;
  }
  for (Complex w : points) {
    const Jet m = out.mu.jet(w);
    out.residual = std::max(out.residual, std::abs(m.b / m.v - rhs.value(w)));
  }
  out.residual_core = out.residual;
  return out;
}

Compatibility compatibility_residual(const Field& a, const Field& b, const Field& mu,
                                     const std::vector<Complex>& points) {
  check_frame(a, b, points);
  Compatibility c;
  for (Complex w : points) {
    const Jet ja = a.jet(w), jb = b.jet(w);
    const Complex m = mu.value(w);
    const Complex av = ja.v, bv = jb.v;
    // Wirtinger derivatives of the conjugates: (conj a)_w = conj(a_wbar).
    const Complex ca_w = std::conj(ja.b), cb_w = std::conj(jb.b);
    const Complex d1 = 1.0 - av * std::conj(bv), d2 = 1.0 - bv * std::conj(av);
    const double e1 = std::abs(m * ja.b / d1 - std::conj(m) * ca_w / d2);
    const double e2 = std::abs(m * jb.b / d2 - std::conj(m) * cb_w / d1);
    c.res1 = std::max({c.res1, e1, e2});
    c.res11 = std::max(c.res11, std::abs(jb.b * ca_w / (d2 * d2) - ja.b * cb_w / (d1 * d1)));
  }
  return c;
}

FormField weierstrass_form(const Field& a, const Field& b, const Field& mu) {
  const Field one(1.0), ab = a * b;
  return FormField::vector({mu * (a + b), mu * (one + ab), Field(kI) * mu * (one - ab), mu * (a - b)});
}

namespace {

template <class Body>
void parallel_rows(int rows, Body&& body) {
  const int workers = std::max(1, std::min<int>(rows, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers == 1) {
    for (int j = 0; j < rows; ++j) body(j);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (int j = t; j < rows; j += workers) body(j);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

SurfaceGrid build_surface(const Field& a, const Field& b, const Field& mu, const Domain& domain,
                          const RectGrid& grid, const BuildOptions& opts) {
  const FormField phi = weierstrass_form(a, b, mu);
  SurfaceGrid g;
  g.grid = grid;
  g.provenance = Provenance::Integrated;
  const std::size_t n = grid.size();
  g.f.assign(n, Vec4r{});
  g.fw.assign(n, Vec4c{});
  g.fww.assign(n, Vec4c{});
  g.fwwb.assign(n, Vec4c{});
  g.mask.assign(n, 0);

  bool exact = true;
  for (const Field& c : phi.components) exact = exact && c.is_symbolic();
  g.jets = exact ? JetSource::Exact : JetSource::FiniteDifference;

  const auto integrand = [&](Complex xi) { return phi.value(xi); };
  parallel_rows(grid.nv, [&](int j) {
    for (int i = 0; i < grid.nu; ++i) {
      const std::size_t k = grid.index(i, j);
      const Complex w = grid.node(i, j);
      if (!domain.admissible(w)) {
        g.mask[k] = 1;
        continue;
      }
      try {
        const Vec4c I = integrate_from<Vec4c>(integrand, opts.w0, w, domain, opts.quad);
        g.f[k] = opts.p0 + 2.0 * real_part(I);
        for (int c = 0; c < 4; ++c) {
          const Jet z = phi.components[static_cast<std::size_t>(c)].jet(w);
          g.fw[k][c] = z.v;
          g.fww[k][c] = z.w;
          g.fwwb[k][c] = z.b;
        }
      } catch (const Error&) {
        g.mask[k] = 1;
      }
    }
  });
  return g;
}

std::size_t AbmuGrid::unmasked() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{0}));
}

AbmuGrid extract_abmu(SurfaceGrid& g, double eps) {
  ensure_jets(g);
  const std::size_t n = g.size();
  AbmuGrid d;
  d.grid = g.grid;
  d.tier = jet_tier(g);
  for (auto* v : {&d.a, &d.b, &d.mu, &d.a_w, &d.a_wb, &d.b_w, &d.b_wb}) v->assign(n, Complex{});
  d.mask.assign(n, 1);

  double scale = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!g.masked(k) && std::isfinite(max_abs(g.fw[k]))) scale = std::max(scale, max_abs(g.fw[k]));
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (g.masked(k)) continue;
    const Vec4c& Z = g.fw[k];
    const Complex D = Z[1] - kI * Z[2];
    if (!(std::abs(D) >= eps * scale)) continue;
    d.mask[k] = 0;
    const Complex N0 = Z[0] + Z[3], N3 = Z[0] - Z[3];
    d.a[k] = N0 / D;
    d.b[k] = N3 / D;
    d.mu[k] = 0.5 * D;
    const Vec4c& Zw = g.fww[k];
    const Vec4c& Zb = g.fwwb[k];
    const Complex Dw = Zw[1] - kI * Zw[2], Db = Zb[1] - kI * Zb[2];
    d.a_w[k] = ((Zw[0] + Zw[3]) - d.a[k] * Dw) / D;
    d.b_w[k] = ((Zw[0] - Zw[3]) - d.b[k] * Dw) / D;
    d.a_wb[k] = ((Zb[0] + Zb[3]) - d.a[k] * Db) / D;
    d.b_wb[k] = ((Zb[0] - Zb[3]) - d.b[k] * Db) / D;
    d.roundtrip = std::max(d.roundtrip, max_abs(d.mu[k] * w_vector(d.a[k], d.b[k]) - Z));
  }
  if (d.unmasked() == 0) throw Error(Errc::AllDegenerate, "f1_w - i f2_w vanishes at every node");
  return d;
}

AbmuExpr extract_abmu(const std::array<Expr, 4>& f) {
  std::array<Expr, 4> fw;
  for (std::size_t c = 0; c < 4; ++c) fw[c] = derive_w(f[c]);
  const Expr D = fw[1] - Expr(kI) * fw[2];
  return {(fw[0] + fw[3]) / D, (fw[0] - fw[3]) / D, D / Expr(2.0)};
}

FundamentalForms fundamental_forms(const AbmuGrid& d, double f_norm) {
  FundamentalForms out;
  const std::size_t n = d.a.size();
  out.first.assign(n, std::nan(""));
  out.second.assign(n, SecondFormData{});
  out.umbilic.assign(n, 0);
  Tier tier = d.tier;
  out.umbilic_tol = tolerance_for(tier, f_norm);
  for (std::size_t k = 0; k < n; ++k) {
    if (d.mask[k]) continue;
    const Complex a = d.a[k], b = d.b[k], mu = d.mu[k];
    const Complex d1 = 1.0 - a * std::conj(b), d2 = 1.0 - b * std::conj(a);
    if (std::abs(d1) < kDomainEps) throw Error(Errc::DegenerateFrame, "a conj(b) = 1 at a grid node");
    out.first[k] = 4.0 * std::norm(mu) * (d1 * d2).real();
    out.second[k] = {mu * d.a_w[k] / d1, mu * d.b_w[k] / d2, mu * d.a_wb[k] / d1, mu * d.b_wb[k] / d2};
    out.umbilic[k] = std::abs(d.a_w[k]) < out.umbilic_tol && std::abs(d.b_w[k]) < out.umbilic_tol;
  }
  return out;
}

MuRatio mu_ratio_test(const Field& mu1, const Field& mu2, bool a_or_b_nonholo, const std::vector<Complex>& points) {
  const Field h = mu1 / mu2;
  Tier tier = (mu1.is_symbolic() && mu2.is_symbolic()) ? Tier::Analytic : Tier::FiniteDifference;
  MuRatio out;
  std::vector<Complex> values;
  double scale = 0.0;
  for (Complex w : points) {
    const Jet j = h.jet(w);
    values.push_back(j.v);
    scale = std::max(scale, std::abs(j.v));
    out.dbar_residual = std::max(out.dbar_residual, std::abs(j.b));
  }
  if (values.empty()) throw Error(Errc::Domain, "no admissible sample points");
  const double tol = tolerance_for(tier, scale);
  const double rel = tier == Tier::FiniteDifference ? tol : tol * (1.0 + scale);
  if (out.dbar_residual > rel) {
    throw Error(Errc::RatioNotHolomorphic, fmt::format("d/dwbar of the ratio reaches {:.3e}", out.dbar_residual));
  }
  if (!a_or_b_nonholo) return out;

  Complex mean{};
  for (Complex v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double spread = 0.0;
  for (Complex v : values) spread = std::max(spread, std::abs(v - mean));
  if (spread > rel || std::abs(mean.imag()) > rel) {
    throw Error(Errc::RatioNotHolomorphic,
                fmt::format("ratio is not a real constant (spread {:.3e}, imaginary part {:.3e})", spread,
                            mean.imag()));
  }
  out.real_constant = true;
  out.value = mean.real();
  return out;
}

}  // namespace lw
