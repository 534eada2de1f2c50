#include <random>

#include "doctest.h"
#include "lw/errors.hpp"
#include "lw/mink4.hpp"
#include "oracles.hpp"

using lw::Complex;
using lw::Vec4c;
using lw::Vec4r;

namespace {

const Vec4r e0{{1, 0, 0, 0}}, e1{{0, 1, 0, 0}}, e2{{0, 0, 1, 0}}, e3{{0, 0, 0, 1}};

Complex random_complex(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  return {d(rng), d(rng)};
}

Vec4r random_vec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  return Vec4r{{d(rng), d(rng), d(rng), d(rng)}};
}

void check_close(const Vec4c& a, const Vec4c& b, double tol) {
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(a[k] - b[k]) <= tol);
}

}  // namespace

TEST_CASE("bilinear form has signature (-,+,+,+)") {
  CHECK(lw::inner(e0, e0) == -1.0);
  CHECK(lw::inner(e1, e1) == 1.0);
  CHECK(lw::inner(e0, e3) == 0.0);
  // complex-bilinear: no conjugation
  const Vec4c z{{Complex(0, 1), 0, 0, 0}};
  CHECK(std::abs(lw::inner(z, z) - Complex(1.0)) < 1e-15);
}

TEST_CASE("light vectors at the origin pair to -2") {
  const auto lp = lw::light_vectors(0.0, 0.0);
  CHECK(lp.l0[0] == 1.0);
  CHECK(lp.l0[3] == 1.0);
  CHECK(lp.l3[3] == -1.0);
  CHECK(lw::inner(lp.l0, lp.l3) == doctest::Approx(-2.0));
}

TEST_CASE("W(i,2) has <W, conj W> = 10") {
  const Vec4c W = lw::w_vector(Complex(0, 1), Complex(2, 0));
  CHECK(std::abs(lw::inner(W, lw::conj(W)) - Complex(10.0)) < 1e-12);
}

TEST_CASE("w_vector values and nullity") {
  const Vec4c W0 = lw::w_vector(Complex(0), Complex(0));
  check_close(W0, Vec4c{{0, 1, Complex(0, 1), 0}}, 0.0);
  const Complex a(2, 1), b(1, -3);
  CHECK(std::abs(lw::inner(lw::w_vector(a, b), lw::w_vector(a, b))) < 1e-12);
  // W(a,b) = a (1, b, -ib, 1) + (b, 1, i, -b)
  const Complex I(0, 1);
  const Vec4c split = a * Vec4c{{1, b, -I * b, 1}} + Vec4c{{b, 1, I, -b}};
  check_close(lw::w_vector(a, b), split, 1e-13);
}

TEST_CASE("light vectors are lightlike, future pointing, orthogonal to W") {
  const Complex a(1, 1), b(-2, 0);
  const auto lp = lw::light_vectors(a, b);
  const Vec4c W = lw::w_vector(a, b);
  CHECK(std::abs(lw::inner(W, lp.l0)) < 1e-12);
  CHECK(std::abs(lw::inner(W, lp.l3)) < 1e-12);
  const auto l3 = lw::light_vectors(0.0, Complex(3, -1)).l3;
  CHECK(std::abs(lw::inner(l3, l3)) < 1e-12);
  CHECK(lw::is_future_lightlike(lp.l0));
  CHECK(lw::is_future_lightlike(lp.l3));
}

TEST_CASE("frame identities hold for random a, b") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    const Complex a = random_complex(rng), b = random_complex(rng);
    const Vec4c W = lw::w_vector(a, b);
    const double scale = 1.0 + std::norm(a) * std::norm(b) + std::norm(a) + std::norm(b);
    CHECK(std::abs(lw::inner(W, W)) <= 1e-12 * scale);
    const Complex expected = 2.0 * (1.0 - a * std::conj(b)) * (1.0 - b * std::conj(a));
    CHECK(std::abs(lw::inner(W, lw::conj(W)) - expected) <= 1e-12 * scale);
    const auto lp = lw::light_vectors(a, b);
    CHECK(std::abs(lw::inner(lp.l0, lp.l3) + expected.real()) <= 1e-12 * scale);
  }
}

TEST_CASE("cross3 matches the determinant definition") {
  check_close(lw::to_complex(lw::cross3(e0, e1, e2)), lw::to_complex(e3), 0.0);
  check_close(lw::to_complex(lw::cross3(e1, e2, e3)), lw::to_complex(e0), 0.0);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const Vec4r u = random_vec(rng), v = random_vec(rng), w = random_vec(rng), z = random_vec(rng);
    const Vec4r X = lw::cross3(u, v, w);
    CHECK(lw::inner(X, z) == doctest::Approx(-oracle::det4(z, u, v, w)).epsilon(1e-12).scale(100));
    CHECK(std::abs(lw::inner(X, u)) < 1e-10);
    CHECK(lw::max_abs(lw::cross3(u, u, v)) < 1e-12);
    const Vec4r swapped = lw::cross3(v, u, w);
    for (std::size_t c = 0; c < 4; ++c) CHECK(swapped[c] == doctest::Approx(-X[c]));
  }
}

TEST_CASE("decompose inverts mu W(a,b)") {
  const auto d = lw::decompose(2.0 * lw::w_vector(Complex(0, 1), Complex(3)));
  CHECK(std::abs(d.mu - 2.0) < 1e-14);
  CHECK(std::abs(d.a - Complex(0, 1)) < 1e-14);
  CHECK(std::abs(d.b - 3.0) < 1e-14);

  const auto d0 = lw::decompose(Vec4c{{0, 1, Complex(0, 1), 0}});
  CHECK(std::abs(d0.mu - 1.0) < 1e-15);
  CHECK(std::abs(d0.a) < 1e-15);
  CHECK(std::abs(d0.b) < 1e-15);

  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const Complex a = random_complex(rng), b = random_complex(rng), mu = random_complex(rng) + 3.0;
    if (std::abs(1.0 - a * std::conj(b)) < 0.1) continue;
    const Vec4c Z = mu * lw::w_vector(a, b);
    const auto r = lw::decompose(Z);
    check_close(r.mu * lw::w_vector(r.a, r.b), Z, 1e-12 * (1.0 + lw::max_abs(Z)));
  }
}

TEST_CASE("decompose rejects degenerate frames") {
  try {
    lw::decompose(Vec4c{{1, 0, 0, 1}});
    FAIL("expected DegenerateFrame");
  } catch (const lw::Error& e) {
    CHECK(e.code() == lw::Errc::DegenerateFrame);
  }
}
