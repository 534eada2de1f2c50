#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "expr_gen.hpp"
#include "lw/holo.hpp"
#include "oracles.hpp"

using lw::Complex;
using lw::Expr;

namespace {

Complex at(const Expr& e, Complex w) { return lw::eval(e, w); }

oracle::ScalarFn fn(const Expr& e) {
  return [e](Complex w) { return lw::eval(e, w); };
}

template <class F>
lw::Errc error_code(F&& f) {
  try {
    f();
  } catch (const lw::Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return lw::Errc::Config;
}

}  // namespace

TEST_CASE("parse reads the example expressions") {
  const Expr a = lw::parse("1/2 + log(w)");
  CHECK(std::abs(at(a, 2.0) - (0.5 + std::log(2.0))) < 1e-15);
  const Expr b = lw::parse("2*w/3");
  CHECK(std::abs(at(b, Complex(3, 3)) - Complex(2, 2)) < 1e-15);
  CHECK(std::abs(at(lw::parse("2i*w + i"), 1.0) - Complex(0, 3)) < 1e-15);
  CHECK(std::abs(at(lw::parse("conj(w)^3 - w^-2"), Complex(1, 1)) -
                 (std::pow(Complex(1, -1), 3) - 1.0 / std::pow(Complex(1, 1), 2))) < 1e-14);
  CHECK(std::abs(at(lw::parse(" exp( w ) * 1.5e-1 "), 0.0) - 0.15) < 1e-15);
  CHECK(std::abs(at(lw::parse("-w^2"), 2.0) + 4.0) < 1e-15);
  CHECK(std::abs(at(lw::parse("conj(w*(1+2i))"), 1.0) - Complex(1, -2)) < 1e-15);
}

TEST_CASE("parse reports syntax errors with byte offsets") {
  try {
    lw::parse("w +* 3");
    FAIL("expected SyntaxError");
  } catch (const lw::Error& e) {
    CHECK(e.code() == lw::Errc::Syntax);
    CHECK(e.has_location());
    CHECK(e.location() == 3);
  }
  CHECK(error_code([] { lw::parse("w^2.5"); }) == lw::Errc::Syntax);
  CHECK(error_code([] { lw::parse("(w + 1"); }) == lw::Errc::Syntax);
  CHECK(error_code([] { lw::parse(""); }) == lw::Errc::Syntax);
  CHECK(error_code([] { lw::parse("w w"); }) == lw::Errc::Syntax);
  try {
    lw::parse("1 + sin(w)");
    FAIL("expected UnknownIdentifier");
  } catch (const lw::Error& e) {
    CHECK(e.code() == lw::Errc::UnknownIdentifier);
    CHECK(e.location() == 4);
  }
}

TEST_CASE("printing then parsing reproduces the normalized tree") {
  for (const char* text : {"1/2 + log(w)", "2*w/3", "-(w + conj(w))^3", "w * -2", "(1-2i)*exp(w)/conj(w)^-2",
                           "w - (w - conj(w))", "1 - w*w/(3*w)"}) {
    const Expr e = lw::parse(text);
    const std::string printed = e.to_string();
    const Expr again = lw::parse(printed);
    CHECK_MESSAGE(lw::structurally_equal(e, again), text << " -> " << printed);
    CHECK(again.to_string() == printed);
  }
  testgen::ExprGen gen(99);
  for (int k = 0; k < 300; ++k) {
    const Expr e = gen.tree(4);
    const Expr again = lw::parse(e.to_string());
    CHECK_MESSAGE(lw::structurally_equal(e, again), e.to_string());
  }
}

TEST_CASE("simplification folds constants and identities") {
  CHECK(lw::parse("0*w + 1*w").to_string() == "w");
  CHECK(lw::parse("2*3 + w^1 + w^0").to_string() == "7 + w");
  CHECK(lw::parse("conj(conj(w))").to_string() == "w");
  CHECK(lw::parse("conj(exp(w))").to_string() == "exp(conj(w))");
  CHECK(lw::derive_wbar(lw::parse("exp(w)*log(w)^2 + w^7")).is_zero());
}

TEST_CASE("symbolic Wirtinger derivatives") {
  CHECK(std::abs(at(lw::derive_w(lw::parse("log(w)")), 2.0) - 0.5) < 1e-15);
  CHECK(lw::derive_wbar(lw::parse("exp(w)")).is_zero());
  const Expr c3 = lw::parse("conj(w)^3");
  const Complex w(1, 1);
  const Complex want = 3.0 * std::pow(Complex(1, -1), 2);
  CHECK(std::abs(at(lw::derive_wbar(c3), w) - want) < 1e-14);
  CHECK(std::abs(oracle::d_wbar(fn(c3), w) - want) < 1e-8);
  CHECK(lw::derive_w(c3).is_zero());
}

TEST_CASE("eval_jet values and errors") {
  const auto j = lw::eval_jet(lw::parse("w^2"), Complex(1, 1));
  CHECK(std::abs(j.value - Complex(0, 2)) < 1e-15);
  CHECK(std::abs(j.d_w - Complex(2, 2)) < 1e-15);
  CHECK(std::abs(j.d_wbar) == 0.0);
  const auto k = lw::eval_jet(lw::parse("w*conj(w)"), 3.0);
  CHECK(std::abs(k.value - 9.0) < 1e-14);
  CHECK(std::abs(k.d_w - 3.0) < 1e-14);
  CHECK(std::abs(k.d_wbar - 3.0) < 1e-14);

  CHECK(error_code([] { lw::eval_jet(lw::parse("log(w)"), -1.0); }) == lw::Errc::Domain);
  CHECK(error_code([] { lw::eval_jet(lw::parse("1/w"), 0.0); }) == lw::Errc::Domain);
  lw::EvalOptions opts;
  opts.punctures = {Complex(1, 0)};
  CHECK(error_code([&] { lw::eval_jet(lw::parse("w"), Complex(1.0 + 1e-7, 0), opts); }) == lw::Errc::Domain);
  CHECK_NOTHROW(lw::eval_jet(lw::parse("w"), Complex(1.0 + 1e-3, 0), opts));
}

TEST_CASE("classify") {
  CHECK(lw::classify(lw::parse("exp(w)")) == lw::Holomorphy::Holomorphic);
  CHECK(lw::classify(lw::parse("conj(w)^2 + 1")) == lw::Holomorphy::AntiHolomorphic);
  CHECK(lw::classify(lw::parse("w + conj(w)")) == lw::Holomorphy::Neither);
  CHECK(lw::classify(lw::parse("3")) == lw::Holomorphy::Holomorphic);
  // symbolic simplification misses this cancellation; the numeric probe catches it
  const Expr hidden = lw::parse("conj(w)*w/conj(w) + exp(w)");
  CHECK_FALSE(lw::derive_wbar(hidden).is_zero());
  CHECK(lw::classify(hidden) == lw::Holomorphy::Holomorphic);
}

TEST_CASE("jets agree with finite differences on random expressions") {
  testgen::ExprGen gen(2024);
  int checked = 0;
  for (int k = 0; k < 400; ++k) {
    const Expr e = gen.tree(3);
    const Complex w = gen.point();
    lw::Jet j;
    try {
      j = lw::eval_jet2(e, w);
      for (Complex d : {Complex(1e-4), Complex(0, 1e-4), Complex(-1e-4), Complex(0, -1e-4)}) lw::eval(e, w + d);
    } catch (const lw::Error&) {
      continue;
    }
    if (std::abs(j.v) > 1e3 || std::abs(j.ww) + std::abs(j.wb) + std::abs(j.bb) > 1e4) continue;
    ++checked;
    const auto f = fn(e);
    const double tol = 1e-6;
    // FD truncation error scales with the size of the function, so the
    // relative comparison uses max(1, |exact|, |f|) as its denominator.
    const double scale = std::max({1.0, std::abs(j.v), std::abs(j.w), std::abs(j.ww)});
    CHECK(std::abs(j.w - oracle::d_w(f, w, 1e-5)) <= tol * scale);
    CHECK(std::abs(j.b - oracle::d_wbar(f, w, 1e-5)) <= tol * scale);
    const auto dw = [&](Complex z) { return lw::eval_jet2(e, z).w; };
    CHECK(std::abs(j.ww - oracle::d_w(dw, w, 1e-5)) <= tol * scale);
    CHECK(std::abs(j.wb - oracle::d_wbar(dw, w, 1e-5)) <= tol * scale);
    // symbolic derivatives evaluate to the forward jets
    CHECK(oracle::rel_err(at(lw::derive_w(e), w), j.w) <= 1e-12);
    CHECK(oracle::rel_err(at(lw::derive_wbar(e), w), j.b) <= 1e-12);
  }
  CHECK(checked > 200);
}

TEST_CASE("conj duality and holomorphic probes") {
  testgen::ExprGen gen(77);
  for (int k = 0; k < 60; ++k) {
    const Expr e = gen.tree(3);
    const Expr lhs = lw::derive_w(lw::conj(e));
    const Expr rhs = lw::conj(lw::derive_wbar(e));
    for (int s = 0; s < 32; ++s) {
      const Complex w = gen.point();
      try {
        CHECK(oracle::rel_err(at(lhs, w), at(rhs, w)) < 1e-10);
      } catch (const lw::Error&) {
      }
    }
    if (lw::classify(e) == lw::Holomorphy::Holomorphic) {
      for (int s = 0; s < 32; ++s) {
        const Complex w = gen.point();
        try {
          const auto j = lw::eval_jet(e, w);
          CHECK(std::abs(j.d_wbar) <= 1e-10 * (1.0 + std::abs(j.value)));
        } catch (const lw::Error&) {
        }
      }
    }
  }
}
