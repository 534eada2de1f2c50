#include "lw/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lw {

namespace {

// Catmull-Rom weights and their derivatives for parameter t in [0,1].
void cubic_weights(double t, double w[4], double dw[4]) {
  const double t2 = t * t, t3 = t2 * t;
  w[0] = 0.5 * (-t3 + 2 * t2 - t);
  w[1] = 0.5 * (3 * t3 - 5 * t2 + 2);
  w[2] = 0.5 * (-3 * t3 + 4 * t2 + t);
  w[3] = 0.5 * (t3 - t2);
  dw[0] = 0.5 * (-3 * t2 + 4 * t - 1);
  dw[1] = 0.5 * (9 * t2 - 10 * t);
  dw[2] = 0.5 * (-9 * t2 + 8 * t + 1);
  dw[3] = 0.5 * (3 * t2 - 2 * t);
}

// Cell index and local parameter along one axis, clamped to the grid.
void locate(double x, double x0, double h, int n, int& cell, double& t) {
  if (n < 2 || h == 0.0) {
    cell = 0;
    t = 0.0;
    return;
  }
  const double s = (x - x0) / h;
  cell = std::clamp(static_cast<int>(std::floor(s)), 0, n - 2);
  t = s - cell;
}

}  // namespace

GridField::Sample GridField::interpolate(Complex w) const {
  int ci = 0, cj = 0;
  double tu = 0.0, tv = 0.0;
  locate(w.real(), grid.rect.u0, grid.hu(), grid.nu, ci, tu);
  locate(w.imag(), grid.rect.v0, grid.hv(), grid.nv, cj, tv);
  double wu[4], dwu[4], wv[4], dwv[4];
  cubic_weights(tu, wu, dwu);
  cubic_weights(tv, wv, dwv);
  // Missing neighbours at the boundary are replaced by linear extrapolation.
  auto val = [&](int i, int j) -> Complex {
    auto clamp_i = [&](int k) { return std::clamp(k, 0, grid.nu - 1); };
    auto clamp_j = [&](int k) { return std::clamp(k, 0, grid.nv - 1); };
    auto raw = [&](int a, int b) { return at(clamp_i(a), clamp_j(b)); };
    auto along_u = [&](int a, int b) -> Complex {
      if (grid.nu < 2) return raw(0, b);
      if (a < 0) return 2.0 * raw(0, b) - raw(1, b);
      if (a > grid.nu - 1) return 2.0 * raw(grid.nu - 1, b) - raw(grid.nu - 2, b);
      return raw(a, b);
    };
    if (grid.nv < 2) return along_u(i, 0);
    if (j < 0) return 2.0 * along_u(i, 0) - along_u(i, 1);
    if (j > grid.nv - 1) return 2.0 * along_u(i, grid.nv - 1) - along_u(i, grid.nv - 2);
    return along_u(i, j);
  };
  Sample s{0.0, 0.0, 0.0};
  for (int b = 0; b < 4; ++b) {
    Complex row = 0.0, row_du = 0.0;
    for (int a = 0; a < 4; ++a) {
      const Complex f = val(ci - 1 + a, cj - 1 + b);
      row += wu[a] * f;
      row_du += dwu[a] * f;
    }
    s.value += wv[b] * row;
    s.du += wv[b] * row_du;
    s.dv += dwv[b] * row;
  }
  if (grid.hu() > 0.0) s.du /= grid.hu();
  if (grid.hv() > 0.0) s.dv /= grid.hv();
  return s;
}

Field as_field(const GridField& g) {
  auto shared = std::make_shared<const GridField>(g);
  return Field(
      [shared](Complex w) {
        const auto s = shared->interpolate(w);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const Complex u{nan, nan};
        return Jet{s.value, 0.5 * (s.du - kI * s.dv), 0.5 * (s.du + kI * s.dv), u, u, u};
      },
      1, [shared](Complex w) { return shared->interpolate(w).value; });
}

GridField sample(const Field& f, const RectGrid& grid) {
  GridField out{grid, std::vector<Complex>(grid.size())};
  for (int j = 0; j < grid.nv; ++j)
    for (int i = 0; i < grid.nu; ++i) out.values[grid.index(i, j)] = f.value(grid.node(i, j));
  return out;
}

}  // namespace lw
