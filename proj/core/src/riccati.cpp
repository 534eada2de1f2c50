#include "lw/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "json.hpp"
#include "lw/errors.hpp"
#include "lw/oneform.hpp"

namespace lw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const Complex kCNaN{kNaN, kNaN};

bool small(Complex z, double scale = 1.0) { return std::abs(z) <= 1e-10 * (1.0 + scale); }

double safe_max(double a, double b) { return std::isnan(b) ? a : std::max(a, b); }

Expr field_expr(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw Error(Errc::Parse, fmt::format("missing string field '{}'", key));
  return parse(j[key].get<std::string>());
}

}  // namespace

// ---------------------------------------------------------------------------
// Problem definition

std::array<Expr, 3> RiccatiProblem::pqr() const {
  if (general()) return {P, *Q, *R};
  return {P, Expr(-2.0) * a * P, a * a * P};
}

void RiccatiProblem::validate(const std::vector<Complex>& points) const {
  const auto require_holo = [](const Expr& e, const char* name) {
    if (classify(e) != Holomorphy::Holomorphic) {
      throw Error(Errc::HypothesisViolation, fmt::format("{} must be holomorphic", name));
    }
  };
  require_holo(P, "P");
  if (general()) {
    require_holo(*Q, "Q");
    require_holo(*R, "R");
  } else {
    require_holo(a, "a");
  }
  for (Complex w : points) {
    if (std::abs(eval(P, w)) < kDomainEps) {
      throw Error(Errc::HypothesisViolation, fmt::format("P vanishes near w = {}{:+}i", w.real(), w.imag()));
    }
  }
}

RiccatiProblem RiccatiProblem::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::Parse, e.what(), e.byte);
  }
  if (!j.is_object()) throw Error(Errc::Parse, "problem must be a JSON object");
  RiccatiProblem p;
  p.P = field_expr(j, "P");
  if (j.contains("Q") || j.contains("R")) {
    p.Q = field_expr(j, "Q");
    p.R = field_expr(j, "R");
  }
  if (j.contains("a")) {
    p.a = field_expr(j, "a");
  } else if (!p.general()) {
    throw Error(Errc::Parse, "missing string field 'a'");
  }
  if (j.contains("domain")) {
    const auto& d = j["domain"];
    try {
      p.domain.rect = {d.at("u0").get<double>(), d.at("u1").get<double>(), d.at("v0").get<double>(),
                       d.at("v1").get<double>()};
      p.domain.avoid_cut = d.value("avoid_cut", false);
      p.domain.eps = d.value("eps", kDomainEps);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::Parse, fmt::format("bad domain: {}", e.what()));
    }
    if (!(p.domain.rect.u0 < p.domain.rect.u1 && p.domain.rect.v0 < p.domain.rect.v1)) {
      throw Error(Errc::Parse, "domain must satisfy u0 < u1 and v0 < v1");
    }
  }
  if (j.contains("punctures")) {
    for (const auto& q : j["punctures"]) {
      if (q.is_number()) {
        p.domain.punctures.emplace_back(q.get<double>(), 0.0);
      } else if (q.is_array() && q.size() == 2) {
        p.domain.punctures.emplace_back(q[0].get<double>(), q[1].get<double>());
      } else {
        throw Error(Errc::Parse, "punctures must be numbers or [re, im] pairs");
      }
    }
  }
  if (j.contains("seeds")) p.seeds = std::make_pair(field_expr(j["seeds"], "x"), field_expr(j["seeds"], "y"));
  return p;
}

std::string RiccatiProblem::to_json() const {
  nlohmann::ordered_json j;
  j["a"] = a.to_string();
  j["P"] = P.to_string();
  if (general()) {
    j["Q"] = Q->to_string();
    j["R"] = R->to_string();
  }
  j["domain"] = {{"u0", domain.rect.u0}, {"u1", domain.rect.u1}, {"v0", domain.rect.v0}, {"v1", domain.rect.v1},
                 {"avoid_cut", domain.avoid_cut}};
  auto pts = nlohmann::ordered_json::array();
  for (Complex z : domain.punctures) pts.push_back({z.real(), z.imag()});
  j["punctures"] = pts;
  if (seeds) j["seeds"] = {{"x", seeds->first.to_string()}, {"y", seeds->second.to_string()}};
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Linking equation and Riccati residuals

namespace {

Complex reduced_linking(Complex a, Complex b, Complex b_w, Complex b_wb, Complex b_wwb) {
  return b_wwb + 2.0 * std::conj(a) * b_w * b_wb / (1.0 - b * std::conj(a));
}

Complex full_linking(Complex a, Complex a_w, Complex a_wb, Complex a_wwb, Complex b, Complex b_w, Complex b_wb,
                     Complex b_wwb) {
  return a_wwb / a_w + 2.0 * std::conj(b) * a_wb / (1.0 - a * std::conj(b)) - b_wwb / b_w -
         2.0 * std::conj(a) * b_wb / (1.0 - b * std::conj(a));
}

void check_hypothesis(std::size_t vanish_a, std::size_t vanish_b, std::size_t total, bool reduced) {
  const auto too_many = [&](std::size_t n) { return 10 * n > total; };
  if (too_many(vanish_b)) throw Error(Errc::HypothesisViolation, "b_w vanishes on more than 10% of the samples");
  if (!reduced && too_many(vanish_a)) {
    throw Error(Errc::HypothesisViolation, "a_w vanishes on more than 10% of the samples");
  }
}

}  // namespace

LinkingResult linking_residual(const Field& a, const Field& b, const std::vector<Complex>& points) {
  if (points.empty()) throw Error(Errc::Domain, "no admissible sample points");
  LinkingResult out;
  out.reduced = classify(a) == Holomorphy::Holomorphic;
  std::size_t va = 0, vb = 0;
  std::vector<std::pair<Jet, Jet>> jets;
  for (Complex w : points) {
    jets.emplace_back(a.jet(w), b.jet(w));
    va += small(jets.back().first.w, std::abs(jets.back().first.v));
    vb += small(jets.back().second.w, std::abs(jets.back().second.v));
  }
  check_hypothesis(va, vb, points.size(), out.reduced);
  for (const auto& [ja, jb] : jets) {
    if (small(ja.w, std::abs(ja.v)) && !out.reduced) continue;
    if (small(jb.w, std::abs(jb.v))) continue;
    const Complex r = out.reduced ? reduced_linking(ja.v, jb.v, jb.w, jb.b, jb.wb)
                                  : full_linking(ja.v, ja.w, ja.b, ja.wb, jb.v, jb.w, jb.b, jb.wb);
    out.residual = safe_max(out.residual, std::abs(r));
  }
  return out;
}

LinkingResult linking_residual(const AbmuGrid& d, bool reduced) {
  const RectGrid& G = d.grid;
  LinkingResult out;
  out.reduced = reduced;
  const auto b_wwb = fd_dw(d.b_wb, G);
  const auto a_wwb = reduced ? std::vector<Complex>() : fd_dw(d.a_wb, G);
  double bmax = 0.0, amax = 0.0;
  for (std::size_t k = 0; k < d.a.size(); ++k) {
    if (d.mask[k]) continue;
    bmax = std::max(bmax, std::abs(d.b_w[k]));
    amax = std::max(amax, std::abs(d.a_w[k]));
  }
  // A node is used when no masked node lies within the 5-point stencils.
  const auto clean = [&](int i, int j) {
    for (int dj = -2; dj <= 2; ++dj)
      for (int di = -2; di <= 2; ++di) {
        const int ii = std::clamp(i + di, 0, G.nu - 1), jj = std::clamp(j + dj, 0, G.nv - 1);
        if (d.mask[G.index(ii, jj)]) return false;
      }
    return true;
  };
  std::size_t total = 0, va = 0, vb = 0;
  std::vector<std::size_t> used;
  for (int j = 1; j < G.nv - 1; ++j) {
    for (int i = 1; i < G.nu - 1; ++i) {
      const std::size_t k = G.index(i, j);
      if (!clean(i, j)) continue;
      ++total;
      const bool zb = std::abs(d.b_w[k]) <= 1e-8 * (1.0 + bmax);
      const bool za = std::abs(d.a_w[k]) <= 1e-8 * (1.0 + amax);
      vb += zb;
      va += za;
      if (!zb && (reduced || !za)) used.push_back(k);
    }
  }
  if (total == 0) throw Error(Errc::AllDegenerate, "no interior node with a clean stencil");
  check_hypothesis(va, vb, total, reduced);
  for (std::size_t k : used) {
    const Complex r = reduced ? reduced_linking(d.a[k], d.b[k], d.b_w[k], d.b_wb[k], b_wwb[k])
                              : full_linking(d.a[k], d.a_w[k], d.a_wb[k], a_wwb[k], d.b[k], d.b_w[k], d.b_wb[k],
                                             b_wwb[k]);
    out.residual = safe_max(out.residual, std::abs(r));
  }
  return out;
}

RiccatiResidual riccati_residual(const Field& phi, const RiccatiProblem& prob, const std::vector<Complex>& points) {
  RiccatiResidual out;
  const auto c = prob.pqr();
  for (Complex w : points) {
    const Jet j = phi.jet(w);
    Complex rhs;
    if (prob.general()) {
      rhs = eval(c[0], w) * j.v * j.v + eval(c[1], w) * j.v + eval(c[2], w);
    } else {
      const Complex gap = j.v - eval(prob.a, w);
      if (std::abs(gap) < kDomainEps) {
        throw Error(Errc::PoleContact, fmt::format("phi = a at w = {}{:+}i", w.real(), w.imag()));
      }
      rhs = eval(prob.P, w) * gap * gap;
    }
    out.residual = std::max(out.residual, std::abs(j.w - rhs) / (1.0 + std::abs(j.w)));
  }
  out.holomorphy = classify(phi);
  return out;
}

// ---------------------------------------------------------------------------
// Solution families and weights

Family solution_family(const Field& x, const Field& y, const RiccatiProblem& prob, Complex k, const Field& theta,
                       Complex w0) {
  Family fam;
  const Field kt = Field(k) * theta;  // k and theta act only through their product
  fam.s = kt * exp_primitive(Field(prob.P) * (x - y), w0, prob.domain);
  const Field one(1.0);
  const Field raw = (x - y * fam.s) / (one - fam.s);
  const Field s = fam.s;
  const auto pole = [s](Complex w) {
    const Complex sv = s.value(w);
    if (std::abs(1.0 - sv) < kDomainEps) {
      throw Error(Errc::FamilyPole, fmt::format("s = 1 at w = {}{:+}i", w.real(), w.imag()));
    }
  };
  fam.psi = Field(
      [raw, pole](Complex w) {
        pole(w);
        return raw.jet(w);
      },
      raw.order(),
      [raw, pole](Complex w) {
        pole(w);
        return raw.value(w);
      });
  return fam;
}

FamilySamples sample_family(const Family& fam, const RiccatiProblem& prob, const RectGrid& grid) {
  FamilySamples out;
  out.psi.grid = grid;
  out.psi.values.assign(grid.size(), kCNaN);
  out.mask.assign(grid.size(), 1);
  const auto c = prob.pqr();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Complex w = grid.node(k);
    if (!prob.domain.admissible(w)) continue;
    try {
      const Jet j = fam.psi.jet(w);
      const Complex rhs = eval(c[0], w) * j.v * j.v + eval(c[1], w) * j.v + eval(c[2], w);
      const double r = std::abs(j.w - rhs) / (1.0 + std::abs(j.w));
      if (!std::isfinite(r)) continue;
      out.psi.values[k] = j.v;
      out.mask[k] = 0;
      out.residual = std::max(out.residual, r);
    } catch (const Error& e) {
      if (e.code() != Errc::FamilyPole && e.code() != Errc::Domain) throw;
    }
  }
  return out;
}

Weights pair_weights(const Field& x, const Field& y, const RiccatiProblem& prob, double lambda0, double rho0,
                        Complex w0, const std::vector<Complex>& points) {
  const Field a(prob.a), P(prob.P);
  Weights out;
  out.lambda = Field(lambda0) * exp_2re_primitive(P * (a - x), w0, prob.domain);
  const Field rho = Field(rho0) * exp_2re_primitive(P * (a - y), w0, prob.domain);
  const Complex d0 = x.value(w0) - y.value(w0);
  const double r0 = out.lambda.value(w0).real() * rho.value(w0).real() * std::norm(d0);
  out.rho = rho / Field(r0);
  for (Complex w : points) {
    const Jet l = out.lambda.jet(w), r = out.rho.jet(w), jx = x.jet(w), jy = y.jet(w);
    const Complex av = a.value(w);
    out.a_residual = std::max({out.a_residual, std::abs(jx.v + l.v * jx.w / l.w - av),
                               std::abs(jy.v + r.v * jy.w / r.w - av)});
    const double prod = l.v.real() * r.v.real() * std::norm(jx.v - jy.v);
    out.r_spread = std::max(out.r_spread, std::abs(prod - 1.0));
    out.r_dw = std::max(out.r_dw, std::abs(l.w / l.v + r.w / r.v + (jx.w - jy.w) / (jx.v - jy.v)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bryant surfaces

SurfaceFn bryant_surface(const BryantPair& pair) {
  return [pair](Complex w) {
    const Jet l = pair.lambda.jet(w), r = pair.rho.jet(w);
    const auto f = l3_vector(pair.x.jet(w)), g = l3_vector(pair.y.jet(w));
    MinkVec4<Jet> h;
    for (int c = 0; c < 4; ++c) h[c] = 0.5 * (l * f[c] + r * g[c]);
    return h;
  };
}

BryantSurface bryant_from_pair(const BryantPair& pair, const Domain& domain, const RectGrid& grid) {
  const bool exact = pair.x.is_symbolic() && pair.y.is_symbolic() && pair.lambda.is_symbolic() &&
                     pair.rho.is_symbolic();
  BryantSurface out;
  out.h = sample_surface(bryant_surface(pair), grid, exact ? Provenance::Analytic : Provenance::Integrated, &domain);
  SurfaceGrid& h = out.h;
  VerificationReport& r = out.report;
  r.provenance = provenance_name(h.provenance);
  const auto nodes = interior_nodes(h);
  r.mask = {h.size(), h.masked_count(), nodes.size()};
  const double fn = h.position_norm();

  const auto h3 = quadric_membership(h, {QuadricKind::H3, 1.0, {}});
  r.add("h3_residual", h3.residual, position_tier(h), fn);
  r.append(metric_report(h));
  const auto H = mean_curvature(h);
  r.add("mean_curvature_lightlike", H.lightlike, jet_tier(h), fn);
  r.add_info("mean_curvature_norm_max", H.norm_max, H.norm_max);

  // A valid pair has a(f) = a(g) and lambda rho |x - y|^2 = 1.
  Stat a_gap, prod;
  for (std::size_t k : nodes) {
    const Complex w = grid.node(k);
    const Jet l = pair.lambda.jet(w), rj = pair.rho.jet(w), x = pair.x.jet(w), y = pair.y.jet(w);
    const Complex af = x.v + l.v * x.w / l.w, ag = y.v + rj.v * y.w / rj.w;
    a_gap.push(std::abs(af - ag));
    prod.push(std::abs(l.v.real() * rj.v.real() * std::norm(x.v - y.v) - 1.0));
  }
  const Tier t = exact ? Tier::Analytic : Tier::Integrated;
  r.add("pair_a_mismatch", a_gap, t);
  r.add("pair_scale_product", prod, t);
  return out;
}

// ---------------------------------------------------------------------------
// Linear reduction

namespace {

bool constant_on(const Expr& e, const std::vector<Complex>& points, Complex* value) {
  const Expr d = derive_w(e);
  Complex v0{};
  bool first = true;
  for (Complex w : points) {
    Complex v, dv;
    try {
      v = eval(e, w);
      dv = eval(d, w);
    } catch (const Error&) {
      continue;
    }
    if (!small(dv, std::abs(v))) return false;
    if (first) v0 = v;
    first = false;
  }
  if (first) return false;
  *value = v0;
  return true;
}

std::pair<Complex, Complex> quadratic_roots(Complex b, Complex c) {
  const Complex s = std::sqrt(b * b - 4.0 * c);
  return {0.5 * (-b + s), 0.5 * (-b - s)};
}

Complex clean(Complex z) {
  const auto snap = [](double x) {
    const double r = std::round(x);
    return std::abs(x - r) < 1e-12 ? r : x;
  };
  return {snap(z.real()), snap(z.imag())};
}

Expr power_of_w(Complex m) {
  const Expr W = Expr::w();
  if (m.imag() == 0.0 && m.real() == std::round(m.real()) && std::abs(m.real()) < 64) {
    return pow(W, static_cast<int>(m.real()));
  }
  return exp(Expr(m) * log(W));
}

}  // namespace

LinearReduction linear_reduction(const RiccatiProblem& prob, const std::vector<Complex>& points) {
  if (prob.general()) throw Error(Errc::HypothesisViolation, "the linear reduction needs the (a, P) form");
  for (Complex w : points) {
    if (std::abs(eval(prob.P, w)) < kDomainEps) throw Error(Errc::HypothesisViolation, "P vanishes on the domain");
  }
  LinearReduction out;
  const Expr P = prob.P, Pw = derive_w(prob.P), aw = derive_w(prob.a);
  out.c2 = P;
  out.c1 = -Pw;
  out.c0 = -(aw * P * P);
  out.p = -(Pw / P);
  out.q = -(aw * P);

  const Expr W = Expr::w();
  Complex p0, q0;
  if (constant_on(out.p, points, &p0) && constant_on(out.q, points, &q0)) {
    out.kind = LinearReduction::Kind::ConstantCoefficient;
    const auto [r1, r2] = quadratic_roots(clean(p0), clean(q0));
    const Complex c1 = clean(r1), c2 = clean(r2);
    if (std::abs(c1 - c2) < 1e-12) {
      out.basis = std::make_pair(exp(Expr(c1) * W), W * exp(Expr(c1) * W));
    } else {
      out.basis = std::make_pair(exp(Expr(c1) * W), exp(Expr(c2) * W));
    }
    return out;
  }
  if (constant_on(W * out.p, points, &p0) && constant_on(W * W * out.q, points, &q0)) {
    out.kind = LinearReduction::Kind::Euler;
    // w^m solves it when m (m - 1) + alpha m + beta = 0.
    const auto [m1, m2] = quadratic_roots(clean(p0) - 1.0, clean(q0));
    const Complex c1 = clean(m1), c2 = clean(m2);
    if (std::abs(c1 - c2) < 1e-12) {
      out.basis = std::make_pair(power_of_w(c1), power_of_w(c1) * log(W));
    } else {
      out.basis = std::make_pair(power_of_w(c1), power_of_w(c2));
    }
  }
  return out;
}

Field riccati_from_linear(const Field& X, const RiccatiProblem& prob, const std::vector<Complex>& points) {
  bool all_zero = !points.empty();
  for (Complex w : points) {
    try {
      all_zero = all_zero && std::abs(X.value(w)) < 1e-14;
    } catch (const Error&) {
    }
  }
  if (all_zero) throw Error(Errc::ZeroSolution, "X vanishes on the sample set");
  return Field(prob.a) - derive_w(X) / (X * Field(prob.P));
}

Field linear_from_riccati(const Field& phi, const RiccatiProblem& prob, Complex w0, Complex X0) {
  return Field(X0) * exp_primitive(-(Field(prob.P) * (phi - Field(prob.a))), w0, prob.domain);
}

Field general_solution(const std::pair<Expr, Expr>& basis, const Field& c1, const Field& c2) {
  return c1 * Field(basis.first) + c2 * Field(basis.second);
}

std::optional<std::pair<Expr, Expr>> auto_seeds(const RiccatiProblem& prob, const std::vector<Complex>& points) {
  const LinearReduction lr = linear_reduction(prob, points);
  if (!lr.basis) return std::nullopt;
  const auto seed = [&](const Expr& y) { return prob.a - derive_w(y) / (y * prob.P); };
  return std::make_pair(seed(lr.basis->first), seed(lr.basis->second));
}

// ---------------------------------------------------------------------------
// Reconstruction

Reconstruction reconstruct_bryant(SurfaceGrid& F, const ReconstructOptions& opts) {
  const AbmuGrid d = extract_abmu(F);
  const RectGrid& G = F.grid;
  const double fn = F.position_norm();
  Tier jt = d.tier;
  const double jet_tol = tolerance_for(jt, fn);

  // a(F) holomorphic and b(F) neither holomorphic nor anti-holomorphic.
  double a_wb = 0.0, a_w = 0.0, b_wb = 0.0;
  for (std::size_t k = 0; k < d.a.size(); ++k) {
    if (d.mask[k]) continue;
    a_wb = std::max(a_wb, std::abs(d.a_wb[k]));
    a_w = std::max(a_w, std::abs(d.a_w[k]));
    b_wb = std::max(b_wb, std::abs(d.b_wb[k]));
  }
  if (a_wb > jet_tol * (1.0 + a_w)) {
    throw Error(Errc::NotLightlikeH, fmt::format("a(F) is not holomorphic (|a_wbar| up to {:.3e})", a_wb));
  }
  if (b_wb <= jet_tol) throw Error(Errc::NotLightlikeH, "b(F) is holomorphic");
  LinkingResult link;
  try {
    link = linking_residual(d, true);
  } catch (const Error& e) {
    if (e.code() == Errc::HypothesisViolation) throw Error(Errc::NotLightlikeH, e.what());
    throw;
  }
  Tier fd = Tier::FiniteDifference;
  const double link_tol = tolerance_for(fd, fn);
  if (!(link.residual <= link_tol)) {
    throw Error(Errc::NotLightlikeH, fmt::format("linking residual {:.3e} exceeds {:.3e}", link.residual, link_tol));
  }

  std::vector<Complex> points;
  for (std::size_t k = 0; k < d.a.size(); ++k)
    if (!d.mask[k]) points.push_back(G.node(k));
  std::optional<std::pair<Expr, Expr>> seeds;
  if (opts.problem) {
    seeds = opts.problem->seeds ? opts.problem->seeds : auto_seeds(*opts.problem, points);
  }
  if (!seeds) throw Error(Errc::NoSeedSolutions, "no holomorphic Riccati solutions supplied or derivable");
  const Field x(seeds->first), y(seeds->second);

  Reconstruction out;
  VerificationReport& rep = out.report;
  rep.add("linking_residual", link.residual, link.residual, Tier::FiniteDifference, fn);

  SurfaceGrid& h = out.h;
  h.grid = G;
  h.provenance = F.provenance;
  const std::size_t n = G.size();
  h.f.assign(n, Vec4r{{kNaN, kNaN, kNaN, kNaN}});
  h.mask.assign(n, 1);
  std::vector<Vec4c> hw(n, Vec4c{{kCNaN, kCNaN, kCNaN, kCNaN}});

  Stat seed_res, z_imag, roundtrip;
  double z_min = std::numeric_limits<double>::infinity();
  std::size_t z_bad = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (d.mask[k]) continue;
    const Complex w = G.node(k);
    Jet xj, yj;
    try {
      xj = x.jet(w);
      yj = y.jet(w);
    } catch (const Error&) {
      continue;
    }
    // Seeds must solve the Riccati equation for the extracted a and P.
    const Complex P = -std::conj(d.b_wb[k]) / std::pow(1.0 - d.a[k] * std::conj(d.b[k]), 2);
    for (const Jet& s : {xj, yj}) {
      const Complex rhs = P * (s.v - d.a[k]) * (s.v - d.a[k]);
      seed_res.push(std::abs(s.w - rhs) / (1.0 + std::abs(s.w)));
    }
    const Jet aj{d.a[k], d.a_w[k], d.a_wb[k], kCNaN, kCNaN, kCNaN};
    const Jet bj{d.b[k], d.b_w[k], d.b_wb[k], kCNaN, kCNaN, kCNaN};
    const Jet phi = inv(conj(bj));
    const Jet z = -((phi - xj) / (phi - yj)) * ((conj(xj) - conj(aj)) / (conj(yj) - conj(aj)));
    const double zi = std::abs(z.v.imag()) / std::abs(z.v);
    if (!(z.v.real() > 0.0) || !(zi <= 1e-6)) {
      ++z_bad;
      continue;
    }
    z_imag.push(zi);
    z_min = std::min(z_min, z.v.real());
    const Jet d2 = (xj - yj) * conj(xj - yj);
    const Jet lambda = inv(sqrt(d2 * z));
    const Jet rho = sqrt(z / d2);
    const auto lx = l3_vector(xj), ly = l3_vector(yj);
    for (int c = 0; c < 4; ++c) {
      const Jet hc = 0.5 * (lambda * lx[c] + rho * ly[c]);
      h.f[k][c] = hc.v.real();
      hw[k][c] = hc.w;
    }
    h.mask[k] = 0;
    const Complex D = hw[k][1] - kI * hw[k][2];
    const Complex ah = (hw[k][0] + hw[k][3]) / D, bh = (hw[k][0] - hw[k][3]) / D, muh = 0.5 * D;
    roundtrip.push(std::max({std::abs(ah - d.a[k]) / (1.0 + std::abs(d.a[k])),
                             std::abs(bh - d.b[k]) / (1.0 + std::abs(d.b[k])),
                             std::abs(muh - d.mu[k]) / (1.0 + std::abs(d.mu[k]))}));
  }
  if (h.masked_count() == n) throw Error(Errc::AllDegenerate, "z is not positive at any node");

  compute_fd_jets(h);
  h.fw = hw;

  // Translation vector at the base node.
  std::size_t base = G.index(opts.base_node ? opts.base_node->first : G.nu / 2,
                             opts.base_node ? opts.base_node->second : G.nv / 2);
  if (h.masked(base)) {
    for (std::size_t k = 0; k < n; ++k)
      if (!h.masked(k) && !F.masked(k)) {
        base = k;
        break;
      }
  }
  out.v = F.f[base] - h.f[base];
  for (std::size_t k = 0; k < n; ++k) {
    if (h.masked(k) || F.masked(k)) continue;
    out.congruence = std::max(out.congruence, max_abs(F.f[k] - h.f[k] - out.v));
  }

  const auto h3 = quadric_membership(h, {QuadricKind::H3, 1.0, {}});
  rep.provenance = provenance_name(h.provenance);
  rep.mask = {n, h.masked_count(), interior_nodes(h).size()};
  rep.add("seed_riccati_residual", seed_res, jt, fn);
  rep.add_info("z_imaginary_part", z_imag.max, z_imag.mean());
  rep.add_info("z_min", z_min, z_min);
  rep.add("z_nonpositive_nodes", static_cast<double>(z_bad), static_cast<double>(z_bad), Tier::Custom, 0.0, 0.0);
  rep.add("abmu_roundtrip", roundtrip, Tier::Custom, 0.0, 1e-6);
  rep.add("h3_residual", h3.residual, jt, fn);
  rep.add("congruence_residual", out.congruence, out.congruence, Tier::Custom, 0.0, 1e-6);
  return out;
}

}  // namespace lw
