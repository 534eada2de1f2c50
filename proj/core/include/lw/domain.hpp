#pragma once

#include <cstddef>
#include <vector>

#include "lw/jet.hpp"

namespace lw {

struct Rect {
  double u0 = -1.0, u1 = 1.0, v0 = -1.0, v1 = 1.0;

  bool contains(Complex w) const {
    return w.real() >= u0 && w.real() <= u1 && w.imag() >= v0 && w.imag() <= v1;
  }
  Complex center() const { return {0.5 * (u0 + u1), 0.5 * (v0 + v1)}; }
};

// A rectangle minus declared punctures and, optionally, the principal log cut.
struct Domain {
  Rect rect;
  std::vector<Complex> punctures;
  bool avoid_cut = false;
  double eps = kDomainEps;

  bool admissible(Complex w) const;
  // Distance from the segment [p,q] to the excluded set (punctures and cut).
  double clearance(Complex p, Complex q) const;
};

double point_segment_distance(Complex z, Complex p, Complex q);

// Uniform tensor grid on a rectangle; nodes are stored v-major (index j*nu + i).
struct RectGrid {
  Rect rect;
  int nu = 0;
  int nv = 0;

  std::size_t size() const { return static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nu) + static_cast<std::size_t>(i);
  }
  double hu() const { return nu > 1 ? (rect.u1 - rect.u0) / (nu - 1) : 0.0; }
  double hv() const { return nv > 1 ? (rect.v1 - rect.v0) / (nv - 1) : 0.0; }
  double u(int i) const { return i == nu - 1 ? rect.u1 : rect.u0 + i * hu(); }
  double v(int j) const { return j == nv - 1 ? rect.v1 : rect.v0 + j * hv(); }
  Complex node(int i, int j) const { return {u(i), v(j)}; }
  Complex node(std::size_t k) const {
    return node(static_cast<int>(k % static_cast<std::size_t>(nu)), static_cast<int>(k / static_cast<std::size_t>(nu)));
  }
  bool interior(int i, int j) const { return i > 0 && j > 0 && i < nu - 1 && j < nv - 1; }
};

}  // namespace lw
