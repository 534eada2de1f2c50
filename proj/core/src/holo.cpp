#include "lw/holo.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <random>

#include <fmt/format.h>

namespace lw {

using Kind = Expr::Kind;

namespace {

Expr make_node(Kind k, Complex c = 0.0, int n = 0, Expr a = Expr(nullptr), Expr b = Expr(nullptr)) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{k, c, n, std::move(a), std::move(b)}));
}

const Expr& zero_expr() {
  static const Expr z = make_node(Kind::Const, 0.0);
  return z;
}

// Constant folding only when the folded value is finite.
bool foldable(Complex c) { return is_finite(c); }

bool on_log_cut(Complex z) {
  return std::abs(z) < kDomainEps ||
         (z.real() < 0.0 && std::abs(z.imag()) <= kDomainEps * std::max(1.0, std::abs(z)));
}

}  // namespace

namespace detail {
void throw_division_by_zero() { throw Error(Errc::Domain, "division by zero"); }
}  // namespace detail

Expr::Expr() : n_(zero_expr().n_) {}
Expr::Expr(Complex c) : n_(c == Complex(0.0) ? zero_expr().n_ : make_node(Kind::Const, c).n_) {}

Expr Expr::w() {
  static const Expr e = make_node(Kind::W);
  return e;
}

Expr Expr::conj_w() {
  static const Expr e = make_node(Kind::ConjW);
  return e;
}

Kind Expr::kind() const { return n_->kind; }
Complex Expr::constant() const { return n_->c; }
int Expr::exponent() const { return n_->n; }
const Expr& Expr::lhs() const { return n_->a; }
const Expr& Expr::rhs() const { return n_->b; }
bool Expr::is_zero() const { return is_const() && constant() == Complex(0.0); }
bool Expr::is_one() const { return is_const() && constant() == Complex(1.0); }

std::size_t Expr::size() const {
  std::size_t s = 1;
  if (n_->a.node()) s += n_->a.size();
  if (n_->b.node()) s += n_->b.size();
  return s;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return true;
  if (!a.node() || !b.node()) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Kind::Const: return a.constant() == b.constant();
    case Kind::W:
    case Kind::ConjW: return true;
    case Kind::Pow: return a.exponent() == b.exponent() && structurally_equal(a.lhs(), b.lhs());
    case Kind::Neg:
    case Kind::Exp:
    case Kind::Log: return structurally_equal(a.lhs(), b.lhs());
    default: return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
  }
}

// ----------------------------------------------------------------- builders

Expr operator-(const Expr& a) {
  if (a.is_const()) return Expr(-a.constant());
  if (a.kind() == Kind::Neg) return a.lhs();
  return make_node(Kind::Neg, 0.0, 0, a);
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const() && foldable(a.constant() + b.constant())) return Expr(a.constant() + b.constant());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (b.kind() == Kind::Neg) return a - b.lhs();
  if (b.is_const() && !a.is_const()) return b + a;
  if (a.is_const() && b.kind() == Kind::Add && b.lhs().is_const()) return (a + b.lhs()) + b.rhs();
  return make_node(Kind::Add, 0.0, 0, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const() && foldable(a.constant() - b.constant())) return Expr(a.constant() - b.constant());
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  if (b.kind() == Kind::Neg) return a + b.lhs();
  if (structurally_equal(a, b)) return Expr();
  return make_node(Kind::Sub, 0.0, 0, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const() && foldable(a.constant() * b.constant())) return Expr(a.constant() * b.constant());
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (b.is_const()) return b * a;
  if (a.is_const()) {
    if (a.constant() == Complex(-1.0)) return -b;
    if (b.kind() == Kind::Mul && b.lhs().is_const() && foldable(a.constant() * b.lhs().constant())) {
      return (a.constant() * b.lhs().constant()) * b.rhs();
    }
  }
  return make_node(Kind::Mul, 0.0, 0, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const() && !b.is_zero() && foldable(a.constant() / b.constant())) {
    return Expr(a.constant() / b.constant());
  }
  if (a.is_zero() && !b.is_zero()) return Expr();
  if (b.is_one()) return a;
  return make_node(Kind::Div, 0.0, 0, a, b);
}

Expr pow(const Expr& a, int n) {
  if (n == 0) return Expr(1.0);
  if (n == 1) return a;
  if (a.is_const() && (n > 0 || !a.is_zero()) && foldable(detail::eipow(a.constant(), n))) {
    return Expr(detail::eipow(a.constant(), n));
  }
  if (a.kind() == Kind::Pow) return pow(a.lhs(), a.exponent() * n);
  return make_node(Kind::Pow, 0.0, n, a);
}

Expr exp(const Expr& a) {
  if (a.is_const() && foldable(std::exp(a.constant()))) return Expr(std::exp(a.constant()));
  return make_node(Kind::Exp, 0.0, 0, a);
}

Expr log(const Expr& a) {
  if (a.is_const() && !on_log_cut(a.constant())) return Expr(std::log(a.constant()));
  return make_node(Kind::Log, 0.0, 0, a);
}

// Off the cut, conj(log z) = log(conj z) and every other rule is exact, so
// conj is distributed down to the leaves.
Expr conj(const Expr& a) {
  switch (a.kind()) {
    case Kind::Const: return Expr(std::conj(a.constant()));
    case Kind::W: return Expr::conj_w();
    case Kind::ConjW: return Expr::w();
    case Kind::Add: return conj(a.lhs()) + conj(a.rhs());
    case Kind::Sub: return conj(a.lhs()) - conj(a.rhs());
    case Kind::Mul: return conj(a.lhs()) * conj(a.rhs());
    case Kind::Div: return conj(a.lhs()) / conj(a.rhs());
    case Kind::Neg: return -conj(a.lhs());
    case Kind::Pow: return pow(conj(a.lhs()), a.exponent());
    case Kind::Exp: return exp(conj(a.lhs()));
    case Kind::Log: return log(conj(a.lhs()));
  }
  return a;
}

// -------------------------------------------------------------- derivatives

namespace {

Expr derive(const Expr& e, bool wrt_wbar) {
  auto d = [&](const Expr& x) { return derive(x, wrt_wbar); };
  switch (e.kind()) {
    case Kind::Const: return Expr();
    case Kind::W: return Expr(wrt_wbar ? 0.0 : 1.0);
    case Kind::ConjW: return Expr(wrt_wbar ? 1.0 : 0.0);
    case Kind::Add: return d(e.lhs()) + d(e.rhs());
    case Kind::Sub: return d(e.lhs()) - d(e.rhs());
    case Kind::Mul: return d(e.lhs()) * e.rhs() + e.lhs() * d(e.rhs());
    case Kind::Div: {
      const Expr& f = e.lhs();
      const Expr& g = e.rhs();
      Expr dg = d(g);
      if (dg.is_zero()) return d(f) / g;
      return (d(f) * g - f * dg) / pow(g, 2);
    }
    case Kind::Neg: return -d(e.lhs());
    case Kind::Pow: {
      const int n = e.exponent();
      return (Expr(static_cast<double>(n)) * pow(e.lhs(), n - 1)) * d(e.lhs());
    }
    case Kind::Exp: return e * d(e.lhs());
    case Kind::Log: return d(e.lhs()) / e.lhs();
  }
  return Expr();
}

}  // namespace

Expr derive_w(const Expr& e) { return derive(e, false); }
Expr derive_wbar(const Expr& e) { return derive(e, true); }

bool contains_log(const Expr& e) {
  if (e.kind() == Kind::Log) return true;
  if (e.lhs().node() && contains_log(e.lhs())) return true;
  if (e.rhs().node() && contains_log(e.rhs())) return true;
  return false;
}

// ----------------------------------------------------------------- printing

namespace {

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

// Precedence levels: 1 additive, 2 multiplicative, 3 unary minus, 4 power, 5 atom.
int precedence(const Expr& e) {
  switch (e.kind()) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    case Kind::Const: {
      const Complex c = e.constant();
      if (c.real() != 0.0 && c.imag() != 0.0) return 5;  // printed in parentheses already
      const double lead = c.imag() == 0.0 ? c.real() : c.imag();
      return std::signbit(lead) ? 3 : 5;
    }
    default: return 5;
  }
}

std::string print_const(Complex c) {
  if (c.imag() == 0.0) return format_real(c.real());
  if (c.real() == 0.0) return format_real(c.imag()) + "i";
  const std::string im = format_real(std::abs(c.imag()));
  return "(" + format_real(c.real()) + (c.imag() < 0.0 ? "-" : "+") + im + "i)";
}

void print(const Expr& e, int min_prec, std::string& out) {
  const int p = precedence(e);
  const bool paren = p < min_prec;
  if (paren) out += '(';
  switch (e.kind()) {
    case Kind::Const: out += print_const(e.constant()); break;
    case Kind::W: out += 'w'; break;
    case Kind::ConjW: out += "conj(w)"; break;
    case Kind::Add:
    case Kind::Sub:
      print(e.lhs(), 1, out);
      out += e.kind() == Kind::Add ? " + " : " - ";
      print(e.rhs(), 2, out);
      break;
    case Kind::Mul:
    case Kind::Div:
      print(e.lhs(), 2, out);
      out += e.kind() == Kind::Mul ? " * " : " / ";
      print(e.rhs(), 3, out);
      break;
    case Kind::Neg:
      out += '-';
      print(e.lhs(), 3, out);
      break;
    case Kind::Pow:
      print(e.lhs(), 5, out);
      out += '^';
      out += std::to_string(e.exponent());
      break;
    case Kind::Exp:
    case Kind::Log:
      out += e.kind() == Kind::Exp ? "exp(" : "log(";
      print(e.lhs(), 0, out);
      out += ')';
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string Expr::to_string() const {
  std::string out;
  print(*this, 0, out);
  return out;
}

// ------------------------------------------------------------------ parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(Errc::Syntax, fmt::format("{} at offset {}", what, pos_), pos_);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(fmt::format("expected '{}'", c));
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e = e + term();
      } else if (accept('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        e = e / unary();
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    return pow(base, integer_exponent());
  }

  int integer_exponent() {
    skip();
    bool parens = accept('(');
    skip();
    bool negative = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      negative = s_[pos_] == '-';
      ++pos_;
      skip();
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E')) {
      fail("exponent must be an integer");
    }
    if (pos_ - start > 6) fail("exponent too large");
    int n = std::atoi(std::string(s_.substr(start, pos_ - start)).c_str());
    if (parens) expect(')');
    return negative ? -n : n;
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected character");
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        pos_ = q;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    const std::string text(s_.substr(start, pos_ - start));
    if (text == ".") {
      pos_ = start;
      fail("malformed number");
    }
    const double value = std::strtod(text.c_str(), nullptr);
    if (pos_ < s_.size() && s_[pos_] == 'i' &&
        !(pos_ + 1 < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])))) {
      ++pos_;
      return Expr(Complex(0.0, value));
    }
    return Expr(value);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string_view name = s_.substr(start, pos_ - start);
    if (name == "w") return Expr::w();
    if (name == "i") return Expr(kI);
    if (name == "exp" || name == "log" || name == "conj") {
      expect('(');
      Expr arg = expr();
      expect(')');
      if (name == "exp") return exp(arg);
      if (name == "log") return log(arg);
      return conj(arg);
    }
    throw Error(Errc::UnknownIdentifier,
                fmt::format("unknown identifier '{}' at offset {}", name, start), start);
  }
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

// --------------------------------------------------------------- evaluation

namespace {

void check_punctures(Complex w, const EvalOptions& opts) {
  for (Complex p : opts.punctures) {
    if (std::abs(w - p) < opts.eps) {
      throw Error(Errc::Domain, fmt::format("w = ({}, {}) is within eps of a puncture", w.real(), w.imag()));
    }
  }
}

}  // namespace

Complex eval(const Expr& e, Complex w, const EvalOptions& opts) {
  check_punctures(w, opts);
  const Complex r = e.evaluate<Complex>(w, std::conj(w));
  if (!is_finite(r)) throw Error(Errc::Domain, "expression is not finite at the sample");
  return r;
}

Jet eval_jet2(const Expr& e, Complex w, const EvalOptions& opts) {
  check_punctures(w, opts);
  const Jet j = e.evaluate<Jet>(Jet::variable(w), Jet::conj_variable(w));
  if (!is_finite(j)) throw Error(Errc::Domain, "expression is not finite at the sample");
  return j;
}

WirtingerJet eval_jet(const Expr& e, Complex w, const EvalOptions& opts) {
  const Jet j = eval_jet2(e, w, opts);
  return WirtingerJet{j.v, j.w, j.b};
}

// ------------------------------------------------------------ classification

const char* holomorphy_name(Holomorphy h) {
  switch (h) {
    case Holomorphy::Holomorphic: return "Holomorphic";
    case Holomorphy::AntiHolomorphic: return "AntiHolomorphic";
    case Holomorphy::Neither: return "Neither";
  }
  return "?";
}

namespace {

std::vector<Complex> probe_points(const ProbeRegion& r) {
  std::mt19937_64 rng(r.seed);
  std::uniform_real_distribution<double> du(r.u0, r.u1), dv(r.v0, r.v1);
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(r.samples));
  for (int k = 0; k < r.samples; ++k) pts.emplace_back(du(rng), dv(rng));
  return pts;
}

// True when |derivative| stays below 1e-10 (scaled by the function size) at
// every probe that evaluates; at least half of the probes must succeed.
bool numerically_zero(const Expr& e, const Expr& derivative, const ProbeRegion& region) {
  int ok = 0;
  for (Complex w : probe_points(region)) {
    try {
      const Complex d = eval(derivative, w);
      const Complex v = eval(e, w);
      if (std::abs(d) > 1e-10 * (1.0 + std::abs(v))) return false;
      ++ok;
    } catch (const Error&) {
    }
  }
  return 2 * ok >= region.samples;
}

}  // namespace

Holomorphy classify(const Expr& e, const ProbeRegion& region) {
  const Expr db = derive_wbar(e);
  if (db.is_zero() || numerically_zero(e, db, region)) return Holomorphy::Holomorphic;
  const Expr dw = derive_w(e);
  if (dw.is_zero() || numerically_zero(e, dw, region)) return Holomorphy::AntiHolomorphic;
  return Holomorphy::Neither;
}

double probe_max_abs(const Expr& e, const ProbeRegion& region) {
  double m = -1.0;
  for (Complex w : probe_points(region)) {
    try {
      m = std::max(m, std::abs(eval(e, w)));
    } catch (const Error&) {
    }
  }
  return m;
}

}  // namespace lw
