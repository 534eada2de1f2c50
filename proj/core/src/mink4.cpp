#include "lw/mink4.hpp"

#include <algorithm>

#include "lw/errors.hpp"

namespace lw {

bool is_future_lightlike(const Vec4r& v, double tol) {
  const double scale = std::max(1.0, max_abs(v) * max_abs(v));
  return std::abs(inner(v, v)) <= tol * scale && v[0] > 0.0;
}

Vec4r cross3(const Vec4r& u, const Vec4r& v, const Vec4r& w) {
  // Cofactor expansion of det[z,u,v,w] along the z row gives C_k with
  // det = sum z_k C_k; matching <X,z> = -det forces X0 = C0 and Xi = -Ci.
  auto minor3 = [&](int skip) {
    int c[3];
    int n = 0;
    for (int k = 0; k < 4; ++k)
      if (k != skip) c[n++] = k;
    return u[c[0]] * (v[c[1]] * w[c[2]] - v[c[2]] * w[c[1]]) -
           u[c[1]] * (v[c[0]] * w[c[2]] - v[c[2]] * w[c[0]]) +
           u[c[2]] * (v[c[0]] * w[c[1]] - v[c[1]] * w[c[0]]);
  };
  Vec4r cof;
  for (int k = 0; k < 4; ++k) cof[k] = ((k % 2) ? -1.0 : 1.0) * minor3(k);
  return Vec4r{{cof[0], -cof[1], -cof[2], -cof[3]}};
}

LightPair light_vectors(Complex a, Complex b) {
  return LightPair{real_part(l0_vector(b)), real_part(l3_vector(a))};
}

NullFrameData decompose(const Vec4c& z, double eps) {
  const double scale = std::max(1e-300, max_abs(z));
  const Complex d = z[1] - kI * z[2];
  if (std::abs(d) <= eps * scale) {
    throw Error(Errc::DegenerateFrame, "Z1 - i Z2 vanishes");
  }
  if (std::abs(inner(z, z)) > 1e-8 * scale * scale) {
    throw Error(Errc::DegenerateFrame, "Z is not null");
  }
  if (inner(z, conj(z)).real() <= 0.0) {
    throw Error(Errc::DegenerateFrame, "<Z, conj Z> is not positive");
  }
  NullFrameData out{(z[0] + z[3]) / d, (z[0] - z[3]) / d, d / 2.0};
  if (std::abs(1.0 - out.a * std::conj(out.b)) <= eps) {
    throw Error(Errc::DegenerateFrame, "a conj(b) = 1");
  }
  return out;
}

}  // namespace lw
