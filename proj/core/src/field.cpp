#include "lw/field.hpp"

#include <algorithm>
#include <random>

namespace lw {

struct Field::Impl {
  std::optional<Expr> expr;
  JetFn jet;
  ValueFn value;
  int order = 2;
};

namespace {

std::shared_ptr<const Field::Impl> from_expr(Expr e) {
  auto impl = std::make_shared<Field::Impl>();
  impl->expr = e;
  impl->jet = [e](Complex w) { return eval_jet2(e, w); };
  impl->value = [e](Complex w) { return eval(e, w); };
  impl->order = 2;
  return impl;
}

template <class Op>
Field combine(const Field& a, const Field& b, Op op) {
  return Field([a, b, op](Complex w) { return op(a.jet(w), b.jet(w)); }, std::min(a.order(), b.order()),
               [a, b, op](Complex w) { return op(a.value(w), b.value(w)); });
}

template <class Op>
Field apply(const Field& a, Op op) {
  return Field([a, op](Complex w) { return op(a.jet(w)); }, a.order(),
               [a, op](Complex w) { return op(a.value(w)); });
}

}  // namespace

Field::Field() : impl_(from_expr(Expr())) {}
Field::Field(Complex c) : impl_(from_expr(Expr(c))) {}
Field::Field(Expr e) : impl_(from_expr(std::move(e))) {}

Field::Field(JetFn fn, int order, ValueFn value) {
  auto impl = std::make_shared<Impl>();
  impl->jet = std::move(fn);
  impl->order = std::clamp(order, 0, 2);
  if (value) {
    impl->value = std::move(value);
  } else {
    impl->value = [j = impl->jet](Complex w) { return j(w).v; };
  }
  impl_ = std::move(impl);
}

Jet Field::jet(Complex w) const { return impl_->jet(w); }
Complex Field::value(Complex w) const { return impl_->value(w); }
const std::optional<Expr>& Field::expr() const { return impl_->expr; }
int Field::order() const { return impl_->order; }

Field operator+(const Field& a, const Field& b) {
  if (a.expr() && b.expr()) return Field(*a.expr() + *b.expr());
  return combine(a, b, [](const auto& x, const auto& y) { return x + y; });
}

Field operator-(const Field& a, const Field& b) {
  if (a.expr() && b.expr()) return Field(*a.expr() - *b.expr());
  return combine(a, b, [](const auto& x, const auto& y) { return x - y; });
}

Field operator*(const Field& a, const Field& b) {
  if (a.expr() && b.expr()) return Field(*a.expr() * *b.expr());
  return combine(a, b, [](const auto& x, const auto& y) { return x * y; });
}

Field operator/(const Field& a, const Field& b) {
  if (a.expr() && b.expr()) return Field(*a.expr() / *b.expr());
  return combine(a, b, [](const auto& x, const auto& y) {
    if (detail::value_of(y) == Complex(0.0)) detail::throw_division_by_zero();
    return x / y;
  });
}

Field operator-(const Field& a) {
  if (a.expr()) return Field(-*a.expr());
  return apply(a, [](const auto& x) { return -x; });
}

Field conj(const Field& a) {
  if (a.expr()) return Field(conj(*a.expr()));
  return apply(a, [](const auto& x) {
    using std::conj;
    return conj(x);
  });
}

Field exp(const Field& a) {
  if (a.expr()) return Field(exp(*a.expr()));
  return apply(a, [](const auto& x) {
    using std::exp;
    return exp(x);
  });
}

Field log(const Field& a) {
  if (a.expr()) return Field(log(*a.expr()));
  return Field([a](Complex w) { return log(a.jet(w)); }, a.order(),
               [a](Complex w) { return checked_log(a.value(w)); });
}

Field sqrt(const Field& a) {
  return apply(a, [](const auto& x) {
    using std::sqrt;
    return sqrt(x);
  });
}

Field pow(const Field& a, int n) {
  if (a.expr()) return Field(pow(*a.expr(), n));
  return Field([a, n](Complex w) { return pow(a.jet(w), n); }, a.order(),
               [a, n](Complex w) { return detail::eipow(a.value(w), n); });
}

Field derive_w(const Field& f) {
  if (f.expr()) return Field(derive_w(*f.expr()));
  return Field([f](Complex w) { return shift_w(f.jet(w)); }, f.order() - 1,
               [f](Complex w) { return f.jet(w).w; });
}

Field derive_wbar(const Field& f) {
  if (f.expr()) return Field(derive_wbar(*f.expr()));
  return Field([f](Complex w) { return shift_wbar(f.jet(w)); }, f.order() - 1,
               [f](Complex w) { return f.jet(w).b; });
}

Holomorphy classify(const Field& f, const ProbeRegion& region) {
  if (f.expr()) return classify(*f.expr(), region);
  std::mt19937_64 rng(region.seed);
  std::uniform_real_distribution<double> du(region.u0, region.u1), dv(region.v0, region.v1);
  bool holo = true, anti = true;
  int ok = 0;
  for (int k = 0; k < region.samples; ++k) {
    const Complex w(du(rng), dv(rng));
    try {
      const Jet j = f.jet(w);
      const double scale = 1e-10 * (1.0 + std::abs(j.v));
      holo = holo && std::abs(j.b) <= scale;
      anti = anti && std::abs(j.w) <= scale;
      ++ok;
    } catch (const Error&) {
    }
  }
  if (2 * ok < region.samples) return Holomorphy::Neither;
  if (holo) return Holomorphy::Holomorphic;
  if (anti) return Holomorphy::AntiHolomorphic;
  return Holomorphy::Neither;
}

}  // namespace lw
