#include "lw/surface.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "lw/errors.hpp"

namespace lw {

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Analytic: return "analytic";
    case Provenance::Integrated: return "integrated";
    case Provenance::Imported: return "imported";
  }
  return "imported";
}

Provenance provenance_from_name(const std::string& name) {
  if (name == "analytic") return Provenance::Analytic;
  if (name == "integrated") return Provenance::Integrated;
  if (name == "imported") return Provenance::Imported;
  throw Error(Errc::Parse, "unknown provenance '" + name + "'");
}

std::size_t SurfaceGrid::masked_count() const {
  return static_cast<std::size_t>(std::count_if(mask.begin(), mask.end(), [](std::uint8_t m) { return m != 0; }));
}

double SurfaceGrid::position_norm() const {
  double m = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (!masked(k)) m = std::max(m, max_abs(f[k]));
  return m;
}

SurfaceGrid sample_surface(const SurfaceFn& fn, const RectGrid& grid, Provenance provenance, const Domain* domain) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  SurfaceGrid g;
  g.grid = grid;
  g.provenance = provenance;
  g.jets = JetSource::Exact;
  const std::size_t n = grid.size();
  g.f.assign(n, Vec4r{{nan, nan, nan, nan}});
  const Vec4c cnan{{Complex(nan, nan), Complex(nan, nan), Complex(nan, nan), Complex(nan, nan)}};
  g.fw.assign(n, cnan);
  g.fww.assign(n, cnan);
  g.fwwb.assign(n, cnan);
  g.mask.assign(n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex w = grid.node(k);
    if (domain && !domain->admissible(w)) continue;
    MinkVec4<Jet> J;
    try {
      J = fn(w);
    } catch (const Error&) {
      continue;
    }
    bool ok = true;
    for (std::size_t c = 0; c < 4; ++c) {
      g.f[k][c] = J[c].v.real();
      g.fw[k][c] = J[c].w;
      g.fww[k][c] = J[c].ww;
      g.fwwb[k][c] = J[c].wb;
      ok = ok && is_finite(J[c].v) && is_finite(J[c].w);
    }
    g.mask[k] = ok ? 0 : 1;
  }
  return g;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m) {
  const int n = static_cast<int>(xs.size());
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
  double c1 = 1.0, c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
  return out;
}

namespace {

// Derivative of order m along one axis with nodes 0..n-1 at spacing h.
struct AxisStencils {
  std::vector<int> start;
  std::vector<std::vector<double>> w;
};

AxisStencils axis_stencils(int n, double h, int m) {
  AxisStencils s;
  s.start.resize(static_cast<std::size_t>(n));
  s.w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const bool central = i >= 2 && i <= n - 3;
    const int width = std::min(n, central ? 5 : 6);
    const int start = std::clamp(i - width / 2, 0, n - width);
    std::vector<double> xs;
    for (int k = 0; k < width; ++k) xs.push_back((start + k) * h);
    s.start[static_cast<std::size_t>(i)] = start;
    s.w[static_cast<std::size_t>(i)] = fd_weights(i * h, xs, m);
  }
  return s;
}

template <class T>
std::vector<T> apply_axis(const std::vector<T>& data, const RectGrid& g, const AxisStencils& s, bool along_u) {
  std::vector<T> out(data.size());
  for (int j = 0; j < g.nv; ++j) {
    for (int i = 0; i < g.nu; ++i) {
      const int pos = along_u ? i : j;
      const auto& w = s.w[static_cast<std::size_t>(pos)];
      const int start = s.start[static_cast<std::size_t>(pos)];
      T acc{};
      for (std::size_t k = 0; k < w.size(); ++k) {
        const int q = start + static_cast<int>(k);
        acc = acc + w[k] * data[along_u ? g.index(q, j) : g.index(i, q)];
      }
      out[g.index(i, j)] = acc;
    }
  }
  return out;
}

}  // namespace

std::vector<Complex> fd_dw(const std::vector<Complex>& values, const RectGrid& G, bool conjugate) {
  if (G.nu < 3 || G.nv < 3) throw Error(Errc::GridMismatch, "finite differences need at least 3x3 nodes");
  const auto du = apply_axis(values, G, axis_stencils(G.nu, G.hu(), 1), true);
  const auto dv = apply_axis(values, G, axis_stencils(G.nv, G.hv(), 1), false);
  std::vector<Complex> out(values.size());
  const Complex s = conjugate ? kI : -kI;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = 0.5 * (du[k] + s * dv[k]);
  return out;
}

void compute_fd_jets(SurfaceGrid& g) {
  const RectGrid& G = g.grid;
  if (G.nu < 3 || G.nv < 3) throw Error(Errc::GridMismatch, "finite differences need at least 3x3 nodes");
  const auto u1 = axis_stencils(G.nu, G.hu(), 1), u2 = axis_stencils(G.nu, G.hu(), 2);
  const auto v1 = axis_stencils(G.nv, G.hv(), 1), v2 = axis_stencils(G.nv, G.hv(), 2);
  const auto fu = apply_axis(g.f, G, u1, true);
  const auto fv = apply_axis(g.f, G, v1, false);
  const auto fuu = apply_axis(g.f, G, u2, true);
  const auto fvv = apply_axis(g.f, G, v2, false);
  const auto fuv = apply_axis(fu, G, v1, false);
  const std::size_t n = g.size();
  g.fw.resize(n);
  g.fww.resize(n);
  g.fwwb.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t c = 0; c < 4; ++c) {
      g.fw[k][c] = 0.5 * Complex(fu[k][c], -fv[k][c]);
      g.fww[k][c] = 0.25 * Complex(fuu[k][c] - fvv[k][c], -2.0 * fuv[k][c]);
      g.fwwb[k][c] = 0.25 * (fuu[k][c] + fvv[k][c]);
    }
  }
  g.jets = JetSource::FiniteDifference;
}

void write_csv(const SurfaceGrid& g, std::ostream& out) {
  out << "u,v,x0,x1,x2,x3\n";
  for (int j = 0; j < g.grid.nv; ++j) {
    for (int i = 0; i < g.grid.nu; ++i) {
      const Vec4r& p = g.f[g.grid.index(i, j)];
      out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", g.grid.u(i), g.grid.v(j), p[0], p[1], p[2],
                         p[3]);
    }
  }
}

namespace {

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

bool close(double a, double b, double scale) { return std::abs(a - b) <= 1e-9 * std::max(1.0, scale); }

}  // namespace

SurfaceGrid read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw Error(Errc::Parse, "empty input", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "u,v,x0,x1,x2,x3") throw Error(Errc::Parse, "line 1: expected header u,v,x0,x1,x2,x3", 1);
  std::vector<std::array<double, 6>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<double, 6> r{};
    std::stringstream ss(line);
    std::string cell;
    int n = 0;
    while (std::getline(ss, cell, ',')) {
      if (n >= 6 || !parse_double(cell, r[static_cast<std::size_t>(n)])) {
        throw Error(Errc::Parse, fmt::format("line {}: malformed row", line_no), line_no);
      }
      ++n;
    }
    if (n != 6) throw Error(Errc::Parse, fmt::format("line {}: expected 6 fields, found {}", line_no, n), line_no);
    rows.push_back(r);
  }
  if (rows.empty()) throw Error(Errc::Parse, "no data rows", line_no + 1);
  std::size_t nu = 0;
  while (nu < rows.size() && rows[nu][1] == rows[0][1]) ++nu;
  const std::size_t last_line = line_no;
  if (rows.size() % nu != 0) {
    throw Error(Errc::Parse, fmt::format("line {}: truncated grid ({} rows, {} per v-row)", last_line + 1, rows.size(), nu),
                last_line + 1);
  }
  const std::size_t nv = rows.size() / nu;
  if (nu < 2 || nv < 2) throw Error(Errc::Parse, "grid needs at least two nodes per direction", last_line);
  SurfaceGrid g;
  g.provenance = Provenance::Imported;
  g.grid = RectGrid{Rect{rows[0][0], rows[nu - 1][0], rows[0][1], rows[rows.size() - 1][1]}, static_cast<int>(nu),
                    static_cast<int>(nv)};
  const double scale = std::max({std::abs(g.grid.rect.u0), std::abs(g.grid.rect.u1), std::abs(g.grid.rect.v0),
                                 std::abs(g.grid.rect.v1)});
  g.f.resize(rows.size());
  g.mask.assign(rows.size(), 0);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const int i = static_cast<int>(k % nu), j = static_cast<int>(k / nu);
    if (!close(rows[k][0], g.grid.u(i), scale) || !close(rows[k][1], g.grid.v(j), scale)) {
      throw Error(Errc::Parse, fmt::format("line {}: node is not on a uniform v-major grid", k + 2), k + 2);
    }
    g.f[k] = Vec4r{{rows[k][2], rows[k][3], rows[k][4], rows[k][5]}};
    if (!std::isfinite(max_abs(g.f[k]))) g.mask[k] = 1;
  }
  return g;
}

std::string sidecar_json(const SurfaceGrid& g) {
  nlohmann::ordered_json j;
  j["domain"] = {g.grid.rect.u0, g.grid.rect.u1, g.grid.rect.v0, g.grid.rect.v1};
  j["resolution"] = {g.grid.nu, g.grid.nv};
  j["provenance"] = provenance_name(g.provenance);
  j["masked"] = g.masked_count();
  nlohmann::ordered_json res = nlohmann::ordered_json::object();
  for (const auto& [k, v] : g.residuals) res[k] = v;
  j["residuals"] = res;
  return j.dump(2) + "\n";
}

}  // namespace lw
