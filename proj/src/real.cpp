#include "yamflat/real.hpp"

#include <cstdio>

#include "yamflat/errors.hpp"

namespace yamflat {

struct Real::Node {
  enum class Op { Const, Add, Mul, Neg, Inv, Pow };
  Op op = Op::Const;
  std::optional<PiPolynomial> value;  // set iff the node is exact
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
  Rational exponent;  // Pow only
};

namespace {

using NodePtr = std::shared_ptr<const Real::Node>;

NodePtr make_const(PiPolynomial p) {
  auto n = std::make_shared<Real::Node>();
  n->op = Real::Node::Op::Const;
  n->value = std::move(p);
  return n;
}

NodePtr make_node(Real::Node::Op op, NodePtr a, NodePtr b = nullptr, Rational exponent = 0) {
  auto n = std::make_shared<Real::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->exponent = std::move(exponent);
  return n;
}

Interval evaluate(const Real::Node& n, mpfr_prec_t prec) {
  using Op = Real::Node::Op;
  if (n.value) return n.value->enclose(prec);
  switch (n.op) {
    case Op::Const: return n.value->enclose(prec);
    case Op::Add: return evaluate(*n.a, prec) + evaluate(*n.b, prec);
    case Op::Mul: return evaluate(*n.a, prec) * evaluate(*n.b, prec);
    case Op::Neg: return -evaluate(*n.a, prec);
    case Op::Inv: return evaluate(*n.a, prec).inverse();
    case Op::Pow: {
      Interval base = evaluate(*n.a, prec);
      const Integer& num = n.exponent.get_num();
      const Integer& den = n.exponent.get_den();
      if (den != 1) base = base.root(den.get_ui());
      return base.pow(num.get_si());
    }
  }
  return Interval(prec);
}

// c^(1/k) for a positive rational c, when it is rational.
std::optional<Rational> rational_root(const Rational& c, unsigned long k) {
  if (c <= 0) return std::nullopt;
  Integer rn, rd;
  if (!exact_root(c.get_num(), k, rn) || !exact_root(c.get_den(), k, rd)) return std::nullopt;
  return Rational(rn, rd);
}

}  // namespace

Real::Real() : node_(make_const(PiPolynomial())) {}
Real::Real(long v) : node_(make_const(PiPolynomial(v))) {}
Real::Real(const Rational& q) : node_(make_const(PiPolynomial(q))) {}
Real::Real(const PiPolynomial& p) : node_(make_const(p)) {}
Real::Real(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Real Real::parse(std::string_view text) { return Real(PiPolynomial::parse(text)); }

bool Real::is_exact() const { return node_->value.has_value(); }

const PiPolynomial* Real::exact() const { return node_->value ? &*node_->value : nullptr; }

Interval Real::enclose(mpfr_prec_t precision) const { return evaluate(*node_, precision); }

double Real::to_double() const { return enclose(128).midpoint(); }

std::string Real::to_string() const {
  if (const auto* p = exact()) return p->to_string();
  char buf[64];
  std::snprintf(buf, sizeof(buf), "~%.17g", to_double());
  return buf;
}

Real operator+(const Real& a, const Real& b) {
  if (a.exact() && b.exact()) return Real(*a.exact() + *b.exact());
  return Real(make_node(Real::Node::Op::Add, a.node_, b.node_));
}

Real Real::operator-() const {
  if (exact()) return Real(-*exact());
  return Real(make_node(Node::Op::Neg, node_));
}

Real operator-(const Real& a, const Real& b) { return a + (-b); }

Real operator*(const Real& a, const Real& b) {
  if (a.exact() && b.exact()) return Real(*a.exact() * *b.exact());
  return Real(make_node(Real::Node::Op::Mul, a.node_, b.node_));
}

Real operator/(const Real& a, const Real& b) {
  if (b.exact()) {
    if (b.exact()->is_zero()) throw Error(ErrorCode::InvalidInput, "division by zero");
    if (b.exact()->is_monomial()) return a * Real(b.exact()->pow(-1));
  }
  return a * Real(make_node(Real::Node::Op::Inv, b.node_));
}

Real Real::pow(long n) const {
  if (const auto* p = exact()) {
    if (n >= 0 || p->is_monomial()) return Real(p->pow(n));
  }
  if (n == 0) return Real(1);
  if (n == 1) return *this;
  return pow(Rational(n));
}

Real Real::pow(const Rational& exponent) const {
  if (exponent == 0) return Real(1);
  const bool integral = is_integer(exponent);
  if (const auto* p = exact()) {
    if (integral && (exponent >= 0 || p->is_monomial())) return Real(p->pow(exponent.get_num().get_si()));
    if (p->is_monomial()) {
      const auto& [k, c] = *p->terms().begin();
      if (c <= 0) throw Error(ErrorCode::InvalidInput, "fractional power of a non-positive value");
      const unsigned long q = exponent.get_den().get_ui();
      const long num = exponent.get_num().get_si();
      auto root = rational_root(c, q);
      if (root && (static_cast<long>(k) * num) % static_cast<long>(q) == 0) {
        const long new_k = static_cast<long>(k) * num / static_cast<long>(q);
        return Real(PiPolynomial(*root, 0).pow(num) * PiPolynomial::pi_power(static_cast<int>(new_k)));
      }
    } else if (!integral && sign(*this) <= 0) {
      throw Error(ErrorCode::InvalidInput, "fractional power of a non-positive value");
    }
  }
  if (integral) {
    switch (node_->op) {
      case Node::Op::Mul: return Real(node_->a).pow(exponent) * Real(node_->b).pow(exponent);
      case Node::Op::Inv: return Real(node_->a).pow(-exponent);
      case Node::Op::Neg: {
        const Real inner = Real(node_->a).pow(exponent);
        return exponent.get_num().get_si() % 2 == 0 ? inner : -inner;
      }
      default: break;
    }
  }
  // (x^s)^r = x^(s r) when x > 0, which holds whenever s was fractional.
  if (node_->op == Node::Op::Pow && !is_integer(node_->exponent)) {
    return Real(node_->a).pow(node_->exponent * exponent);
  }
  return Real(make_node(Node::Op::Pow, node_, nullptr, exponent));
}

int sign(const Real& x, int precision_bits) {
  if (const auto* p = x.exact()) {
    if (p->is_zero()) return 0;
    if (p->is_rational()) return sgn(p->coefficient(0));
    const int cap = 8 * std::max(precision_bits, 64);
    for (int bits = 64;; bits *= 2) {
      if (bits > cap) bits = cap;
      if (auto s = x.enclose(bits).certain_sign()) return *s;
      if (bits == cap) break;
    }
    throw Error(ErrorCode::UndecidableComparison,
                "sign of " + p->to_string() + " not resolved at " + std::to_string(cap) + " bits");
  }
  const int cap = std::max(precision_bits, 64);
  for (int bits = 64;; bits *= 2) {
    if (bits > cap) bits = cap;
    try {
      if (auto s = x.enclose(bits).certain_sign()) return *s;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UndecidableComparison && e.code() != ErrorCode::InvalidInput) throw;
    }
    if (bits == cap) break;
  }
  throw Error(ErrorCode::UndecidableComparison,
              "value " + x.to_string() + " not separated from zero at " + std::to_string(cap) + " bits");
}

int compare(const Real& a, const Real& b, int precision_bits) { return sign(a - b, precision_bits); }

std::optional<int> try_compare(const Real& a, const Real& b, int precision_bits) {
  try {
    return compare(a, b, precision_bits);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UndecidableComparison) return std::nullopt;
    throw;
  }
}

Rational upper_bound(const Real& x, int precision_bits) {
  if (const auto* p = x.exact(); p && p->is_rational()) return p->coefficient(0);
  return x.enclose(std::max(precision_bits, 64)).upper_rational();
}

Rational lower_bound(const Real& x, int precision_bits) {
  if (const auto* p = x.exact(); p && p->is_rational()) return p->coefficient(0);
  return x.enclose(std::max(precision_bits, 64)).lower_rational();
}

Real max(const Real& a, const Real& b, int precision_bits) {
  return compare(a, b, precision_bits) >= 0 ? a : b;
}

}  // namespace yamflat
