#include "lwtool/export.hpp"

#include <fmt/format.h>

#include "lw/errors.hpp"

namespace lwtool {

Projection projection_from_name(const std::string& name) {
  if (name == "drop_x0") return Projection::DropX0;
  if (name == "poincare_ball") return Projection::PoincareBall;
  throw lw::Error(lw::Errc::Config, fmt::format("unknown projection '{}' (drop_x0, poincare_ball)", name));
}

const char* projection_name(Projection p) { return p == Projection::DropX0 ? "drop_x0" : "poincare_ball"; }

void export_obj(const lw::SurfaceGrid& g, Projection p, std::ostream& out) {
  const lw::RectGrid& G = g.grid;
  std::string buf;
  buf += fmt::format("# {}x{} nodes, projection {}\n", G.nu, G.nv, projection_name(p));
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.masked(k)) {
      buf += "v 0 0 0\n";
      continue;
    }
    const auto& f = g.f[k];
    double s = 1.0;
    if (p == Projection::PoincareBall) {
      const double d = 1.0 + f[0];
      if (!(d > 0.0)) {
        throw lw::Error(lw::Errc::ProjectionInvalid,
                        fmt::format("1 + x0 = {:.6g} at node ({}, {})", d, k % G.nu, k / G.nu));
      }
      s = 1.0 / d;
    }
    buf += fmt::format("v {:.12g} {:.12g} {:.12g}\n", s * f[1], s * f[2], s * f[3]);
  }
  for (int j = 0; j + 1 < G.nv; ++j) {
    for (int i = 0; i + 1 < G.nu; ++i) {
      const std::size_t a = G.index(i, j), b = G.index(i + 1, j), c = G.index(i + 1, j + 1), d = G.index(i, j + 1);
      if (g.masked(a) || g.masked(b) || g.masked(c) || g.masked(d)) continue;
      buf += fmt::format("f {} {} {}\nf {} {} {}\n", a + 1, b + 1, c + 1, a + 1, c + 1, d + 1);
    }
  }
  out << buf;
}

}  // namespace lwtool
