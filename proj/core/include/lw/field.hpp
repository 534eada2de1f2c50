#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "lw/holo.hpp"
#include "lw/jet.hpp"

namespace lw {

// A complex scalar field on a planar domain. Fields backed by an expression
// keep exact symbolic derivatives; others carry a jet callback whose
// reliable differentiation order is tracked (2 = exact second-order jets).
class Field {
 public:
  using JetFn = std::function<Jet(Complex)>;
  using ValueFn = std::function<Complex(Complex)>;

  Field();  // zero
  Field(Complex c);  // NOLINT(google-explicit-constructor)
  Field(double c) : Field(Complex(c)) {}  // NOLINT(google-explicit-constructor)
  Field(Expr e);  // NOLINT(google-explicit-constructor)
  Field(JetFn fn, int order, ValueFn value = nullptr);

  Jet jet(Complex w) const;
  Complex value(Complex w) const;

  const std::optional<Expr>& expr() const;
  int order() const;
  bool is_symbolic() const { return expr().has_value(); }

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(const Field& a, const Field& b);
Field operator/(const Field& a, const Field& b);
Field operator-(const Field& a);
Field conj(const Field& a);
Field exp(const Field& a);
Field log(const Field& a);
Field sqrt(const Field& a);
Field pow(const Field& a, int n);

Field derive_w(const Field& f);
Field derive_wbar(const Field& f);

Holomorphy classify(const Field& f, const ProbeRegion& region = {});

}  // namespace lw
