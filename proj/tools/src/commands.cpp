#include "lwtool/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "lw/errors.hpp"
#include "lw/riccati.hpp"
#include "lw/weierstrass.hpp"
#include "lwtool/catalog.hpp"
#include "lwtool/export.hpp"

namespace lwtool {

namespace fs = std::filesystem;
using lw::Complex;
using lw::Field;

namespace {

// Problems with the job or its input data map to 1; anything that goes wrong
// while checking the geometry maps to 2.
int exit_code_for(lw::Errc c) {
  switch (c) {
    case lw::Errc::Config:
    case lw::Errc::Parse:
    case lw::Errc::Syntax:
    case lw::Errc::UnknownIdentifier:
    case lw::Errc::Domain:
    case lw::Errc::HypothesisViolation:
    case lw::Errc::DegenerateFrame:
    case lw::Errc::CaseViolation:
    case lw::Errc::NotUmbilicalData:
    case lw::Errc::NoSeedSolutions:
      return kConfigError;
    default:
      return kVerificationFailure;
  }
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw lw::Error(lw::Errc::Config, fmt::format("cannot write '{}'", p.string()));
  return f;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw lw::Error(lw::Errc::Config, fmt::format("cannot read '{}'", path));
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path out_dir(const JobConfig& cfg, const std::string& fallback) {
  const fs::path dir = cfg.out.empty() ? fs::path(fallback) : fs::path(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw lw::Error(lw::Errc::Config, fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
  return dir;
}

// surface.csv, surface.json, report.json and mesh.obj under `dir`.
int write_artifacts(const fs::path& dir, const std::string& command, const lw::SurfaceGrid& g,
                    const lw::VerificationReport& report, const nlohmann::ordered_json& details, Projection proj,
                    std::ostream& out) {
  {
    auto f = open_out(dir / "surface.csv");
    lw::write_csv(g, f);
  }
  open_out(dir / "surface.json") << lw::sidecar_json(g);
  nlohmann::ordered_json doc;
  doc["command"] = command;
  doc["pass"] = report.all_pass();
  doc["details"] = details;
  doc["report"] = nlohmann::ordered_json::parse(report.to_json());
  open_out(dir / "report.json") << doc.dump(2) << "\n";
  {
    auto f = open_out(dir / "mesh.obj");
    export_obj(g, proj, f);
  }
  out << report.table();
  out << fmt::format("{}: {} (artifacts in {})\n", command, report.all_pass() ? "PASS" : "FAIL", dir.string());
  return report.all_pass() ? kPass : kVerificationFailure;
}

lw::Domain domain_of(const JobConfig& cfg) {
  if (!cfg.domain) throw lw::Error(lw::Errc::Config, "--domain is required");
  lw::Domain d;
  d.rect = *cfg.domain;
  d.punctures = cfg.punctures;
  d.avoid_cut = cfg.avoid_cut;
  return d;
}

lw::RectGrid grid_of(const JobConfig& cfg, const lw::Rect& r, int fallback) {
  const int nu = cfg.nu ? cfg.nu : fallback, nv = cfg.nv ? cfg.nv : fallback;
  if (nu < 3 || nv < 3) throw lw::Error(lw::Errc::Config, "resolution must be at least 3x3");
  return {r, nu, nv};
}

void apply_tier(const JobConfig& cfg) {
  if (cfg.tier.empty()) return;
  if (!lw::tier_from_name(cfg.tier)) {
    throw lw::Error(lw::Errc::Config, fmt::format("unknown tolerance tier '{}' (analytic, integrated, fd)", cfg.tier));
  }
  ::setenv("LW_TOL_TIER", cfg.tier.c_str(), 1);
}

}  // namespace

int cmd_build(const JobConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.a.empty() || cfg.b.empty()) throw lw::Error(lw::Errc::Config, "--a and --b are required");
  const lw::Domain d = domain_of(cfg);
  const lw::RectGrid grid = grid_of(cfg, d.rect, 33);
  const Field a(lw::parse(cfg.a)), b(lw::parse(cfg.b));
  const Complex w0 = cfg.w0.value_or(d.rect.center());
  nlohmann::ordered_json details{{"a", cfg.a}, {"b", cfg.b}, {"mu", cfg.mu}};
  Field mu;
  double mu_residual = 0.0;
  if (cfg.mu == "auto") {
    lw::MuOptions mo;
    mo.w0 = w0;
    mo.grid = grid;
    const auto sol = lw::solve_mu(a, b, d, mo);
    mu = sol.mu;
    mu_residual = sol.strategy == lw::MuStrategy::Numeric ? sol.residual_core : sol.residual;
    details["mu_strategy"] = lw::mu_strategy_name(sol.strategy);
  } else {
    mu = Field(lw::parse(cfg.mu));
  }
  const auto pts = lw::sample_points(d, grid);
  const auto comp = lw::compatibility_residual(a, b, mu, pts);

  lw::BuildOptions bo;
  bo.w0 = w0;
  lw::SurfaceGrid g = lw::build_surface(a, b, mu, d, grid, bo);
  lw::VerificationReport rep = lw::verify_surface(g);
  const double fn = g.position_norm();
  const lw::Tier mu_tier = mu.is_symbolic() ? lw::Tier::Analytic : lw::Tier::FiniteDifference;
  if (cfg.mu == "auto") rep.add("mu_equation_residual", mu_residual, mu_residual, mu_tier, fn);
  rep.add("compatibility_residual", std::max(comp.res1, comp.res11), std::max(comp.res1, comp.res11), mu_tier, fn);

  const auto ab = lw::extract_abmu(g);
  lw::Stat gap;
  for (std::size_t k = 0; k < ab.a.size(); ++k) {
    if (ab.mask[k]) continue;
    const Complex w = grid.node(k);
    gap.push(std::max({std::abs(ab.a[k] - a.value(w)), std::abs(ab.b[k] - b.value(w)),
                       std::abs(ab.mu[k] - mu.value(w))}));
  }
  rep.add("abmu_roundtrip", gap, lw::jet_tier(g), fn);
  return write_artifacts(out_dir(cfg, "build"), "build", g, rep, details, Projection::DropX0, out);
}

int cmd_riccati(const JobConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.problem.empty()) throw lw::Error(lw::Errc::Config, "--problem is required");
  lw::RiccatiProblem prob = lw::RiccatiProblem::from_json(read_file(cfg.problem));
  if (prob.general()) throw lw::Error(lw::Errc::Config, "surface assembly needs the (a, P) form of the problem");
  if (cfg.domain) prob.domain.rect = *cfg.domain;
  const lw::RectGrid grid = grid_of(cfg, prob.domain.rect, 21);
  const auto pts = lw::sample_points(prob.domain, grid);
  prob.validate(pts);
  const auto seeds = prob.seeds ? prob.seeds : lw::auto_seeds(prob, pts);
  if (!seeds) throw lw::Error(lw::Errc::NoSeedSolutions, "supply seeds {x, y}: the linear equation has no known basis");
  const Field x(seeds->first), y(seeds->second);
  const Complex w0 = cfg.w0.value_or(prob.domain.rect.center());

  const auto wts = lw::pair_weights(x, y, prob, 1.0, 1.0, w0, pts);
  auto bry = lw::bryant_from_pair({x, y, wts.lambda, wts.rho}, prob.domain, grid);
  lw::VerificationReport& rep = bry.report;
  const double sr = std::max(lw::riccati_residual(x, prob, pts).residual, lw::riccati_residual(y, prob, pts).residual);
  rep.add("seed_riccati_residual", sr, sr, lw::Tier::Analytic);
  rep.add("weights_a_mismatch", wts.a_residual, wts.a_residual, lw::Tier::Integrated);
  rep.add("weights_product_spread", wts.r_spread, wts.r_spread, lw::Tier::Integrated);

  nlohmann::ordered_json details{{"a", prob.a.to_string()},     {"P", prob.P.to_string()},
                                 {"x", seeds->first.to_string()}, {"y", seeds->second.to_string()},
                                 {"w0", {w0.real(), w0.imag()}}};
  if (cfg.k) {
    const Field theta = cfg.theta.empty() ? Field(1.0) : Field(lw::parse(cfg.theta));
    const auto fam = lw::solution_family(x, y, prob, *cfg.k, theta, w0);
    const auto s = lw::sample_family(fam, prob, grid);
    std::size_t masked = 0;
    for (auto m : s.mask) masked += m;
    rep.add("family_riccati_residual", s.residual, s.residual, lw::Tier::Integrated);
    details["family"] = {{"k", {cfg.k->real(), cfg.k->imag()}}, {"theta", cfg.theta.empty() ? "1" : cfg.theta},
                         {"masked_nodes", masked}};
  }
  return write_artifacts(out_dir(cfg, "riccati"), "riccati", bry.h, rep, details, Projection::PoincareBall, out);
}

int cmd_example(const JobConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.key.empty()) throw lw::Error(lw::Errc::Config, "an example key is required");
  if (cfg.nu != cfg.nv) throw lw::Error(lw::Errc::Config, "examples use square grids");
  ExampleResult r = run_example(cfg.key, cfg.nu);
  nlohmann::ordered_json details{{"key", cfg.key}};
  for (auto& [k, v] : r.details.items()) details[k] = v;
  return write_artifacts(out_dir(cfg, cfg.key), "example", r.grid, r.report, details, r.projection, out);
}

int cmd_verify(const JobConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.input.empty()) throw lw::Error(lw::Errc::Config, "an input CSV is required");
  std::ifstream in(cfg.input, std::ios::binary);
  if (!in) throw lw::Error(lw::Errc::Config, fmt::format("cannot read '{}'", cfg.input));
  lw::SurfaceGrid g = lw::read_csv(in);
  lw::VerificationReport rep = lw::verify_surface(g);
  try {
    const auto ab = lw::extract_abmu(g);
    rep.add_info("abmu_roundtrip", ab.roundtrip, ab.roundtrip);
    rep.add_info("abmu_masked_nodes", static_cast<double>(g.size() - ab.unmasked()), 0.0);
  } catch (const lw::Error& e) {
    if (e.code() != lw::Errc::AllDegenerate) throw;
    rep.add_info("abmu_masked_nodes", static_cast<double>(g.size()), 0.0);
  }
  out << rep.table();
  if (!cfg.out.empty()) {
    const fs::path p(cfg.out);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    open_out(p) << rep.to_json();
  }
  out << fmt::format("verify: {}\n", rep.all_pass() ? "PASS" : "FAIL");
  return rep.all_pass() ? kPass : kVerificationFailure;
}

int cmd_export(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.input.empty()) throw lw::Error(lw::Errc::Config, "an input CSV is required");
  const Projection proj = projection_from_name(cfg.projection);
  std::ifstream in(cfg.input, std::ios::binary);
  if (!in) throw lw::Error(lw::Errc::Config, fmt::format("cannot read '{}'", cfg.input));
  lw::SurfaceGrid g = lw::read_csv(in);
  if (proj == Projection::PoincareBall) {
    // The image lies in the unit ball only for surfaces in H^3.
    const auto h3 = lw::quadric_membership(g, {lw::QuadricKind::H3, 1.0, {}});
    lw::Tier t = lw::position_tier(g);
    if (h3.residual.max > lw::tolerance_for(t, g.position_norm())) {
      err << fmt::format("warning: surface is not in H^3 (residual {:.3e}); ball containment is not guaranteed\n",
                         h3.residual.max);
    }
  }
  const fs::path target = cfg.out.empty() ? fs::path(cfg.input).replace_extension(".obj") : fs::path(cfg.out);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  auto f = open_out(target);
  export_obj(g, proj, f);
  out << fmt::format("export: wrote {} ({})\n", target.string(), projection_name(proj));
  return kPass;
}

int run_job(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    apply_tier(cfg);
    if (cfg.command == "build") return cmd_build(cfg, out, err);
    if (cfg.command == "riccati") return cmd_riccati(cfg, out, err);
    if (cfg.command == "example") return cmd_example(cfg, out, err);
    if (cfg.command == "verify") return cmd_verify(cfg, out, err);
    if (cfg.command == "export") return cmd_export(cfg, out, err);
    err << fmt::format("error: unknown command '{}'\n", cfg.command);
    return kConfigError;
  } catch (const lw::Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conformal spacelike surfaces in Minkowski 4-space", "lw"};
  app.require_subcommand(0, 1);
  JobConfig cfg;
  std::string config_path, domain, res, w0, k;
  std::vector<std::string> punctures;
  app.add_option("--config", config_path, "TOML file with a [job] table; command-line values win");
  app.add_option("--tier", cfg.tier, "Tolerance tier override: analytic, integrated or fd");

  // Options shared by several subcommands are recorded under their config key.
  std::vector<std::pair<std::string, CLI::Option*>> opts;
  const auto reg = [&](CLI::Option* o, const std::string& key) {
    opts.emplace_back(key, o);
    return o;
  };
  reg(app.get_option("--tier"), "tier");

  auto* build = app.add_subcommand("build", "Integrate mu W(a,b) over a rectangle and verify the surface");
  reg(build->add_option("--a", cfg.a, "a(w, conj w)"), "a");
  reg(build->add_option("--b", cfg.b, "b(w, conj w)"), "b");
  reg(build->add_option("--mu", cfg.mu, "Integrating factor or 'auto'"), "mu");
  reg(build->add_option("--domain", domain, "u0,u1,v0,v1"), "domain");
  reg(build->add_option("--res", res, "NuxNv"), "res");
  reg(build->add_option("--w0", w0, "Base point re,im (default: centre)"), "w0");
  reg(build->add_option("--puncture", punctures, "Excluded point re,im (repeatable)"), "punctures");
  reg(build->add_flag("--avoid-cut", cfg.avoid_cut, "Keep paths off the negative real axis"), "avoid_cut");
  reg(build->add_option("--out", cfg.out, "Output directory"), "out");

  auto* ric = app.add_subcommand("riccati", "Assemble the Bryant surface of a Riccati problem");
  reg(ric->add_option("--problem", cfg.problem, "Problem JSON"), "problem");
  reg(ric->add_option("--domain", domain, "u0,u1,v0,v1 (overrides the problem)"), "domain");
  reg(ric->add_option("--res", res, "NuxNv"), "res");
  reg(ric->add_option("--w0", w0, "Base point re,im (default: centre)"), "w0");
  reg(ric->add_option("--k", k, "Family parameter re,im"), "k");
  reg(ric->add_option("--theta", cfg.theta, "Anti-holomorphic family factor"), "theta");
  reg(ric->add_option("--out", cfg.out, "Output directory"), "out");

  auto* ex = app.add_subcommand("example", "Run a catalog example");
  std::string keys;
  for (const auto& key : example_keys()) keys += (keys.empty() ? "" : ", ") + key;
  reg(ex->add_option("key", cfg.key, "One of: " + keys), "key");
  reg(ex->add_option("--res", res, "Nodes per axis"), "res");
  reg(ex->add_option("--out", cfg.out, "Output directory (default: the key)"), "out");

  auto* ver = app.add_subcommand("verify", "Verify a surface grid CSV");
  reg(ver->add_option("input", cfg.input, "Grid CSV"), "input");
  reg(ver->add_option("--out", cfg.out, "Write the report JSON here"), "out");

  auto* exp = app.add_subcommand("export", "Write an OBJ mesh for a surface grid CSV");
  reg(exp->add_option("input", cfg.input, "Grid CSV"), "input");
  reg(exp->add_option("--projection", cfg.projection, "drop_x0 or poincare_ball"), "projection");
  reg(exp->add_option("--out", cfg.out, "OBJ path (default: input with .obj)"), "out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    if (!domain.empty()) cfg.domain = parse_rect(domain);
    if (!res.empty()) std::tie(cfg.nu, cfg.nv) = parse_res(res);
    if (!w0.empty()) cfg.w0 = parse_complex(w0);
    if (!k.empty()) cfg.k = parse_complex(k);
    for (const auto& p : punctures) cfg.punctures.push_back(parse_complex(p));
    if (!config_path.empty()) {
      std::vector<std::string> set;
      for (const auto& [key, o] : opts)
        if (o->count() > 0) set.push_back(key);
      if (!cfg.command.empty()) set.push_back("command");
      std::ifstream in(config_path);
      if (!in) throw lw::Error(lw::Errc::Config, fmt::format("cannot read '{}'", config_path));
      apply_config(in, cfg, set);
    }
  } catch (const lw::Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  if (cfg.command.empty()) {
    err << app.help();
    return kConfigError;
  }
  return run_job(cfg, out, err);
}

}  // namespace lwtool
