#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lw/domain.hpp"
#include "lw/jet.hpp"
#include "lw/mink4.hpp"

namespace lw {

enum class Provenance { Analytic, Integrated, Imported };
const char* provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

enum class JetSource { None, Exact, FiniteDifference };

// Samples of an immersion f on a RectGrid, stored v-major, with optional jets
// f_w, f_ww and f_wwbar. Masked nodes (mask != 0) carry no valid data.
struct SurfaceGrid {
  RectGrid grid;
  Provenance provenance = Provenance::Analytic;
  std::vector<Vec4r> f;
  JetSource jets = JetSource::None;
  std::vector<Vec4c> fw, fww, fwwb;
  std::vector<std::uint8_t> mask;
  std::map<std::string, double> residuals;

  std::size_t size() const { return grid.size(); }
  bool masked(std::size_t k) const { return mask[k] != 0; }
  std::size_t masked_count() const;
  double position_norm() const;  // max |component| over unmasked nodes
};

// Immersion given pointwise by component jets.
using SurfaceFn = std::function<MinkVec4<Jet>(Complex)>;

// Evaluates fn on every node. Nodes that are inadmissible for the domain or
// raise a library error are masked.
SurfaceGrid sample_surface(const SurfaceFn& fn, const RectGrid& grid, Provenance provenance,
                           const Domain* domain = nullptr);

// Fills f_w, f_ww, f_wwbar from positions with fourth-order differences
// (stencils shift inward near the edges).
void compute_fd_jets(SurfaceGrid& g);

// d/dw (or d/dwbar when conjugate) of grid samples with the same stencils.
std::vector<Complex> fd_dw(const std::vector<Complex>& values, const RectGrid& grid, bool conjugate = false);

// Weights for the m-th derivative at x0 on the stencil xs (Fornberg).
std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m);

// CSV with header u,v,x0,x1,x2,x3, one row per node in storage order.
void write_csv(const SurfaceGrid& g, std::ostream& out);
SurfaceGrid read_csv(std::istream& in);
std::string sidecar_json(const SurfaceGrid& g);

}  // namespace lw
