#include "lw/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lw {

double point_segment_distance(Complex z, Complex p, Complex q) {
  const Complex d = q - p;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(z - p);
  const double t = std::clamp(((z - p) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(z - (p + t * d));
}

namespace {

double point_cut_distance(Complex z) { return z.real() >= 0.0 ? std::abs(z) : std::abs(z.imag()); }

double segment_cut_distance(Complex p, Complex q) {
  // The cut is the ray (-inf, 0]. Two convex sets are either crossing or
  // separated by a distance attained at an endpoint of one of them.
  if ((p.imag() <= 0.0 && q.imag() >= 0.0) || (p.imag() >= 0.0 && q.imag() <= 0.0)) {
    const double dy = q.imag() - p.imag();
    const double x = dy == 0.0 ? std::min(p.real(), q.real())
                               : p.real() + (q.real() - p.real()) * (-p.imag() / dy);
    if (x <= 0.0) return 0.0;
  }
  return std::min({point_cut_distance(p), point_cut_distance(q), point_segment_distance(0.0, p, q)});
}

}  // namespace

bool Domain::admissible(Complex w) const { return clearance(w, w) >= eps; }

double Domain::clearance(Complex p, Complex q) const {
  double d = std::numeric_limits<double>::infinity();
  for (Complex z : punctures) d = std::min(d, point_segment_distance(z, p, q));
  if (avoid_cut) d = std::min(d, segment_cut_distance(p, q));
  return d;
}

}  // namespace lw
