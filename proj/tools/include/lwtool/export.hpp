#pragma once

#include <ostream>
#include <string>

#include "lw/surface.hpp"

namespace lwtool {

enum class Projection { DropX0, PoincareBall };

Projection projection_from_name(const std::string& name);  // throws lw::Error(Config)
const char* projection_name(Projection p);

// Writes `v x y z` for every node (v-major) and two triangles per quad whose
// corners are all unmasked; winding follows increasing u then v. Masked nodes
// keep their index and are written at the origin. Throws ProjectionInvalid
// when the Poincare map meets 1 + x0 <= 0.
void export_obj(const lw::SurfaceGrid& g, Projection p, std::ostream& out);

}  // namespace lwtool
