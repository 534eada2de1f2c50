#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lw/errors.hpp"
#include "lw/jet.hpp"

namespace lw {

struct ExprNode;

// Immutable expression tree in w and conj(w). Construction through the free
// operators applies conservative simplification (constant folding, 0/1
// identities) and pushes conj down to the leaves, so no conj node survives.
class Expr {
 public:
  enum class Kind { Const, W, ConjW, Add, Sub, Mul, Div, Neg, Pow, Exp, Log };

  Expr();  // the constant 0
  Expr(Complex c);  // NOLINT(google-explicit-constructor)
  Expr(double c) : Expr(Complex(c)) {}  // NOLINT(google-explicit-constructor)

  static Expr w();
  static Expr conj_w();

  Kind kind() const;
  Complex constant() const;  // Const only
  int exponent() const;      // Pow only
  const Expr& lhs() const;   // operand of unary nodes, left operand of binary ones
  const Expr& rhs() const;

  bool is_const() const { return kind() == Kind::Const; }
  bool is_zero() const;
  bool is_one() const;

  // Evaluates with T = Complex (values) or T = Jet (values and derivatives).
  template <class T>
  T evaluate(const T& w, const T& wbar) const;

  std::string to_string() const;
  std::size_t size() const;  // node count

  // Low-level handle constructor; a null handle is only used for unused child slots.
  explicit Expr(std::shared_ptr<const ExprNode> n) : n_(std::move(n)) {}
  const ExprNode* node() const { return n_.get(); }

 private:
  std::shared_ptr<const ExprNode> n_;
};

bool structurally_equal(const Expr& a, const Expr& b);

struct ExprNode {
  Expr::Kind kind;
  Complex c;
  int n;
  Expr a;
  Expr b;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& a, int n);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr conj(const Expr& a);

Expr parse(std::string_view text);
Expr derive_w(const Expr& e);
Expr derive_wbar(const Expr& e);
bool contains_log(const Expr& e);

struct WirtingerJet {
  Complex value;
  Complex d_w;
  Complex d_wbar;
};

struct EvalOptions {
  std::vector<Complex> punctures;
  double eps = kDomainEps;
};

Complex eval(const Expr& e, Complex w, const EvalOptions& opts = {});
WirtingerJet eval_jet(const Expr& e, Complex w, const EvalOptions& opts = {});
Jet eval_jet2(const Expr& e, Complex w, const EvalOptions& opts = {});

enum class Holomorphy { Holomorphic, AntiHolomorphic, Neither };
const char* holomorphy_name(Holomorphy h);

// Region sampled by the numeric backstop of classify.
struct ProbeRegion {
  double u0 = 0.25, u1 = 1.75, v0 = -0.75, v1 = 0.75;
  int samples = 32;
  std::uint64_t seed = 0x5eed;
};

Holomorphy classify(const Expr& e, const ProbeRegion& region = {});

// Max of |value| over the probe points that evaluate successfully; -1 if none do.
double probe_max_abs(const Expr& e, const ProbeRegion& region = {});

// ---------------------------------------------------------------------------

namespace detail {
inline Complex lift(Complex c, const Complex*) { return c; }
inline Jet lift(Complex c, const Jet*) { return Jet::constant(c); }
inline Complex elog(const Complex& z) { return checked_log(z); }
inline Jet elog(const Jet& z) { return log(z); }
inline Complex eexp(const Complex& z) { return std::exp(z); }
inline Jet eexp(const Jet& z) { return exp(z); }
inline Complex eipow(const Complex& z, int n) {
  if (n >= 0) {
    Complex r = 1.0, base = z;
    for (unsigned k = static_cast<unsigned>(n); k; k >>= 1) {
      if (k & 1u) r *= base;
      base *= base;
    }
    return r;
  }
  return 1.0 / eipow(z, -n);
}
inline Jet eipow(const Jet& z, int n) { return pow(z, n); }
inline const Complex& value_of(const Complex& z) { return z; }
inline const Complex& value_of(const Jet& z) { return z.v; }
[[noreturn]] void throw_division_by_zero();
}  // namespace detail

template <class T>
T Expr::evaluate(const T& w, const T& wbar) const {
  const ExprNode& n = *n_;
  switch (n.kind) {
    case Kind::Const: return detail::lift(n.c, static_cast<const T*>(nullptr));
    case Kind::W: return w;
    case Kind::ConjW: return wbar;
    case Kind::Add: return n.a.evaluate(w, wbar) + n.b.evaluate(w, wbar);
    case Kind::Sub: return n.a.evaluate(w, wbar) - n.b.evaluate(w, wbar);
    case Kind::Mul: return n.a.evaluate(w, wbar) * n.b.evaluate(w, wbar);
    case Kind::Div: {
      T den = n.b.evaluate(w, wbar);
      if (detail::value_of(den) == Complex(0.0)) detail::throw_division_by_zero();
      return n.a.evaluate(w, wbar) / den;
    }
    case Kind::Neg: return -n.a.evaluate(w, wbar);
    case Kind::Pow: {
      T base = n.a.evaluate(w, wbar);
      if (n.n < 0 && detail::value_of(base) == Complex(0.0)) detail::throw_division_by_zero();
      return detail::eipow(base, n.n);
    }
    case Kind::Exp: return detail::eexp(n.a.evaluate(w, wbar));
    case Kind::Log: return detail::elog(n.a.evaluate(w, wbar));
  }
  return detail::lift(Complex(0.0), static_cast<const T*>(nullptr));
}

}  // namespace lw
