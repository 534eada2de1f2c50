#include "lw/oneform.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <map>
#include <mutex>
#include <random>

namespace lw {

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

namespace {

PathSpec polyline(std::initializer_list<Complex> pts) {
  PathSpec p;
  const Complex* prev = nullptr;
  for (const Complex& q : pts) {
    if (prev && *prev != q) p.segments.push_back({*prev, q});
    prev = &q;
  }
  return p;
}

bool keeps_clearance(const PathSpec& p, const Domain& d) {
  for (const Segment& s : p.segments)
    if (d.clearance(s.from, s.to) < d.eps) return false;
  return true;
}

}  // namespace

std::vector<PathSpec> candidate_paths(Complex w0, Complex w, const Domain& domain) {
  std::vector<PathSpec> all;
  all.push_back(polyline({w0, Complex(w.real(), w0.imag()), w}));
  all.push_back(polyline({w0, w}));
  all.push_back(polyline({w0, Complex(w0.real(), w.imag()), w}));
  const double span = std::max({std::abs(w - w0), domain.rect.u1 - domain.rect.u0, domain.rect.v1 - domain.rect.v0});
  for (double f : {0.125, -0.125, 0.25, -0.25, 0.5, -0.5}) {
    const Complex up(0.0, f * span);
    all.push_back(polyline({w0, w0 + up, w + up, w}));
    all.push_back(polyline({w0, w0 + f * span, w + f * span, w}));
  }
  std::vector<PathSpec> ok;
  for (auto& p : all)
    if (keeps_clearance(p, domain)) ok.push_back(std::move(p));
  return ok;
}

PathSpec default_path(Complex w0, Complex w, const Domain& domain) {
  auto paths = candidate_paths(w0, w, domain);
  if (paths.empty()) throw Error(Errc::Domain, "no admissible path to the target point");
  return paths.front();
}

Vec4c FormField::value(Complex w) const {
  Vec4c out;
  for (int k = 0; k < dim; ++k) out[static_cast<std::size_t>(k)] = components[static_cast<std::size_t>(k)].value(w);
  return out;
}

Vec4r integrate_2re(const FormField& phi, const PathSpec& path, const QuadOptions& opts) {
  const Vec4c I = line_integral<Vec4c>([&](Complex z) { return phi.value(z); }, path, opts);
  return 2.0 * real_part(I);
}

Complex integrate(const Field& f, const PathSpec& path, const QuadOptions& opts) {
  return line_integral<Complex>([&](Complex z) { return f.value(z); }, path, opts);
}

PeriodResidual period_residual(const FormField& phi, const Domain& domain, int n_samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Rect& r = domain.rect;
  std::uniform_real_distribution<double> du(r.u0, r.u1), dv(r.v0, r.v1);
  PeriodResidual out;
  for (int s = 0; s < n_samples; ++s) {
    const Complex w(du(rng), dv(rng));
    if (!domain.admissible(w)) continue;
    for (int k = 0; k < phi.dim; ++k) {
      const Jet j = phi.components[static_cast<std::size_t>(k)].jet(w);
      out.dbar_imag = std::max(out.dbar_imag, std::abs(j.b.imag()));
    }
  }
  for (int s = 0; s < n_samples; ++s) {
    const Complex p(du(rng), dv(rng)), q(du(rng), dv(rng));
    const Complex a(std::min(p.real(), q.real()), std::min(p.imag(), q.imag()));
    const Complex c(std::max(p.real(), q.real()), std::max(p.imag(), q.imag()));
    const Complex b(c.real(), a.imag()), d(a.real(), c.imag());
    bool encloses = false;
    for (Complex z : domain.punctures) encloses = encloses || Rect{a.real(), c.real(), a.imag(), c.imag()}.contains(z);
    const PathSpec loop = polyline({a, b, c, d, a});
    if (encloses || !keeps_clearance(loop, domain)) continue;
    const Vec4c I = line_integral<Vec4c>([&](Complex z) { return phi.value(z); }, loop);
    out.loop = std::max(out.loop, max_abs(real_part(I)));
  }
  return out;
}

Field exp_primitive(const Field& q, Complex w0, const Domain& domain) {
  auto primitive = [q, w0, domain](Complex w) {
    return integrate_from<Complex>([&](Complex z) { return q.value(z); }, w0, w, domain);
  };
  return Field(
      [q, primitive](Complex w) {
        const Jet dq = q.jet(w);
        Jet I{primitive(w), dq.v, 0.0, dq.w, dq.b, 0.0};
        return exp(I);
      },
      std::min(2, q.order() + 1), [primitive](Complex w) { return std::exp(primitive(w)); });
}

Field exp_2re_primitive(const Field& psi, Complex w0, const Domain& domain) {
  auto primitive = [psi, w0, domain](Complex w) {
    return 2.0 * integrate_from<Complex>([&](Complex z) { return psi.value(z); }, w0, w, domain).real();
  };
  return Field(
      [psi, primitive](Complex w) {
        const Jet p = psi.jet(w);
        Jet R{primitive(w), p.v, std::conj(p.v), p.w, p.b, std::conj(p.w)};
        return exp(R);
      },
      std::min(2, psi.order() + 1), [primitive](Complex w) { return std::exp(primitive(w)); });
}

Complex discrete_dbar(const GridField& g, int i, int j) {
  const double hu = g.grid.hu(), hv = g.grid.hv();
  const Complex gu = (g.at(i + 1, j) - g.at(i - 1, j)) / (2.0 * hu);
  const Complex gv = (g.at(i, j + 1) - g.at(i, j - 1)) / (2.0 * hv);
  return 0.5 * (gu + kI * gv);
}

DbarSolution solve_dbar(const GridField& F, Complex gauge_point, Complex gauge_value) {
  const RectGrid& grid = F.grid;
  const int nu = grid.nu, nv = grid.nv;
  if (nu < 3 || nv < 3) throw Error(Errc::SingularSystem, "solve_dbar needs at least a 3x3 grid");
  const double hu = grid.hu(), hv = grid.hv();

  // G = d/dw Phi with Laplace(Phi) = 4F and Phi = 0 on the boundary, so that
  // d/dwbar G = Laplace(Phi)/4 = F. The negative 5-point Laplacian is SPD.
  const int mu = nu - 2, mv = nv - 2;
  auto unknown = [mu](int i, int j) { return (j - 1) * mu + (i - 1); };
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(5 * mu * mv));
  const double cu = 1.0 / (hu * hu), cv = 1.0 / (hv * hv);
  for (int j = 1; j <= mv; ++j) {
    for (int i = 1; i <= mu; ++i) {
      const int row = unknown(i, j);
      trips.emplace_back(row, row, 2.0 * cu + 2.0 * cv + 1e-12);
      if (i > 1) trips.emplace_back(row, unknown(i - 1, j), -cu);
      if (i < mu) trips.emplace_back(row, unknown(i + 1, j), -cu);
      if (j > 1) trips.emplace_back(row, unknown(i, j - 1), -cv);
      if (j < mv) trips.emplace_back(row, unknown(i, j + 1), -cv);
    }
  }
  Eigen::SparseMatrix<double> A(mu * mv, mu * mv);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success) throw Error(Errc::SingularSystem, "factorisation failed");
  Eigen::VectorXd re(mu * mv), im(mu * mv);
  for (int j = 1; j <= mv; ++j) {
    for (int i = 1; i <= mu; ++i) {
      const Complex rhs = -4.0 * F.at(i, j);
      re[unknown(i, j)] = rhs.real();
      im[unknown(i, j)] = rhs.imag();
    }
  }
  const Eigen::VectorXd pr = solver.solve(re), pi = solver.solve(im);
  GridField phi{grid, std::vector<Complex>(grid.size(), 0.0)};
  for (int j = 1; j <= mv; ++j)
    for (int i = 1; i <= mu; ++i) phi.values[grid.index(i, j)] = {pr[unknown(i, j)], pi[unknown(i, j)]};

  // Second-order differences, one-sided on the edges.
  auto diff = [](const Complex* f, int k, int n, std::ptrdiff_t stride, double h) {
    auto at = [&](int m) { return f[m * stride]; };
    if (k == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
    if (k == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
    return (at(k + 1) - at(k - 1)) / (2.0 * h);
  };
  DbarSolution out{GridField{grid, std::vector<Complex>(grid.size())}};
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      const Complex pu = diff(&phi.values[grid.index(0, j)], i, nu, 1, hu);
      const Complex pv = diff(&phi.values[grid.index(i, 0)], j, nv, nu, hv);
      out.G.values[grid.index(i, j)] = 0.5 * (pu - kI * pv);
    }
  }
  const Complex shift = gauge_value - out.G.interpolate(gauge_point).value;
  for (Complex& g : out.G.values) g += shift;

  const int bi = std::max(1, (nu - 1) / 8), bj = std::max(1, (nv - 1) / 8);
  for (int j = 1; j < nv - 1; ++j) {
    for (int i = 1; i < nu - 1; ++i) {
      const double r = std::abs(discrete_dbar(out.G, i, j) - F.at(i, j));
      out.residual = std::max(out.residual, r);
      if (i >= bi && i <= nu - 1 - bi && j >= bj && j <= nv - 1 - bj) out.residual_core = std::max(out.residual_core, r);
    }
  }
  return out;
}

}  // namespace lw
