#pragma once

#include <vector>

#include "lw/domain.hpp"
#include "lw/field.hpp"

namespace lw {

// Complex samples on a RectGrid.
struct GridField {
  RectGrid grid;
  std::vector<Complex> values;

  Complex at(int i, int j) const { return values[grid.index(i, j)]; }

  // Catmull-Rom bicubic interpolation; returns value and the u,v partials.
  struct Sample {
    Complex value, du, dv;
  };
  Sample interpolate(Complex w) const;
};

// Wraps the interpolant as a Field of order 1 (value and first derivatives).
Field as_field(const GridField& g);

GridField sample(const Field& f, const RectGrid& grid);

}  // namespace lw
