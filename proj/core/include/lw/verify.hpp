#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lw/surface.hpp"
#include "lw/tolerance.hpp"

namespace lw {

// Running max / mean of absolute residuals.
struct Stat {
  double max = 0.0;
  double sum = 0.0;
  std::size_t n = 0;
  void push(double x) {
    max = std::max(max, x);
    sum += x;
    ++n;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
};

struct ReportEntry {
  std::string name;
  double max = 0.0;
  double mean = 0.0;
  std::optional<double> tolerance;  // empty for informational entries
  Tier tier = Tier::Custom;
  bool pass = true;
};

struct MaskStats {
  std::size_t total = 0;
  std::size_t masked = 0;
  std::size_t evaluated = 0;  // unmasked interior nodes entering the maxima
};

class VerificationReport {
 public:
  std::string provenance;
  MaskStats mask;
  std::vector<ReportEntry> entries;

  // Checked entry; pass iff max <= tolerance of the tier.
  ReportEntry& add(const std::string& name, const Stat& s, Tier tier, double f_norm = 0.0, double custom_tol = 0.0);
  ReportEntry& add(const std::string& name, double max, double mean, Tier tier, double f_norm = 0.0,
                   double custom_tol = 0.0);
  ReportEntry& add_info(const std::string& name, double max, double mean);
  void append(const std::vector<ReportEntry>& more);

  bool all_pass() const;
  const ReportEntry* find(const std::string& name) const;
  std::string to_json() const;
  std::string table() const;
};

// Unmasked nodes away from the boundary whose jets are finite.
std::vector<std::size_t> interior_nodes(const SurfaceGrid& g);

// Computes finite-difference jets when the grid carries none.
void ensure_jets(SurfaceGrid& g);

Tier jet_tier(const SurfaceGrid& g);
Tier position_tier(const SurfaceGrid& g);

// g11 = 2 <f_w, conj f_w> at every node (NaN where unavailable).
std::vector<double> metric_g11(const SurfaceGrid& g);

// Entries null_residual, conformal_factor_min (informational),
// conformal_factor_nonpositive and isotropy_residual.
std::vector<ReportEntry> metric_report(const SurfaceGrid& g);

struct MeanCurvature {
  std::vector<Vec4r> H;  // 2 f_wwbar / g11 per node (NaN where unavailable)
  Stat lightlike;        // |<H,H>|
  Stat orthogonality;    // max(|<H,f_u>|, |<H,f_v>|)
  double norm_max = 0.0;
  double norm_min = 0.0;
};
MeanCurvature mean_curvature(const SurfaceGrid& g);

// K = -(1/(2 g11)) Laplace(ln g11) by central differences; NaN on the
// boundary and next to masked nodes. Throws NonConformalGrid.
std::vector<double> gauss_curvature(const SurfaceGrid& g);

enum class QuadricKind { Cone, H3, Hyperplane };
struct Quadric {
  QuadricKind kind = QuadricKind::Cone;
  double c = 1.0;  // H3(c): <f,f> = -c^2
  Vec4r v{};       // hyperplane normal
};
struct QuadricResult {
  Stat residual;
  bool future_pointing = true;  // f0 > 0 at every evaluated node
};
QuadricResult quadric_membership(const SurfaceGrid& g, const Quadric& q);

struct Congruence {
  Vec4r v{};
  double residual = 0.0;
};
// v = mean(A - B), residual = max |A - B - v|. Throws GridMismatch.
Congruence congruence_residual(const SurfaceGrid& a, const SurfaceGrid& b);

// Metric, mean-curvature and curvature checks bundled into one report.
VerificationReport verify_surface(SurfaceGrid& g);

}  // namespace lw
