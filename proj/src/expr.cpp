#include "perron/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>

#include "perron/error.hpp"

namespace perron {
namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Expr::Kind kind, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->args = std::move(args);
  return n;
}

struct FuncName {
  std::string_view name;
  Expr::Func func;
  int arity;
};

constexpr std::array<FuncName, 8> kFuncs{{
    {"sqrt", Expr::Func::kSqrt, 1},
    {"cbrt", Expr::Func::kCbrt, 1},
    {"exp", Expr::Func::kExp, 1},
    {"log", Expr::Func::kLog, 1},
    {"sin", Expr::Func::kSin, 1},
    {"cos", Expr::Func::kCos, 1},
    {"abs", Expr::Func::kAbs, 1},
    {"pow", Expr::Func::kPow, 2},
}};

const FuncName* lookup_func(std::string_view name) {
  for (const auto& f : kFuncs)
    if (f.name == name) return &f;
  return nullptr;
}

const FuncName& func_info(Expr::Func func) {
  for (const auto& f : kFuncs)
    if (f.func == func) return f;
  return kFuncs[0];
}

// ---- rational folding of constant exponents ----

std::optional<Expr::Rational> normalise(long long p, long long q) {
  if (q == 0) return std::nullopt;
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const long long g = std::gcd(p < 0 ? -p : p, q);
  if (g > 1) {
    p /= g;
    q /= g;
  }
  if (q > 1000000 || p > 1000000000LL || p < -1000000000LL) return std::nullopt;
  return Expr::Rational{p, q};
}

std::optional<Expr::Rational> fold_rational(const Expr::Node& n) {
  using K = Expr::Kind;
  switch (n.kind) {
    case K::kNumber: {
      if (n.number.imag() != 0.0) return std::nullopt;
      const double v = n.number.real();
      for (long long q : {1LL, 2LL, 3LL, 4LL, 5LL, 6LL, 8LL, 10LL, 100LL, 1000LL}) {
        const double p = std::round(v * static_cast<double>(q));
        if (std::abs(p) < 1e9 && p / static_cast<double>(q) == v) return normalise(static_cast<long long>(p), q);
      }
      return std::nullopt;
    }
    case K::kNeg: {
      auto a = fold_rational(*n.args[0]);
      if (!a) return std::nullopt;
      return Expr::Rational{-a->num, a->den};
    }
    case K::kAdd:
    case K::kSub:
    case K::kMul:
    case K::kDiv: {
      auto a = fold_rational(*n.args[0]);
      auto b = fold_rational(*n.args[1]);
      if (!a || !b) return std::nullopt;
      if (n.kind == K::kAdd) return normalise(a->num * b->den + b->num * a->den, a->den * b->den);
      if (n.kind == K::kSub) return normalise(a->num * b->den - b->num * a->den, a->den * b->den);
      if (n.kind == K::kMul) return normalise(a->num * b->num, a->den * b->den);
      return normalise(a->num * b->den, a->den * b->num);
    }
    default:
      return std::nullopt;
  }
}

// ---- lexer / Pratt parser ----

enum class Tok { kNumber, kIdent, kPlus, kMinus, kStar, kSlash, kCaret, kLParen, kRParen, kComma, kEnd };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  cplx value{};
};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) { advance(); }

  NodePtr parse_all() {
    NodePtr e = parse(0);
    if (cur_.kind != Tok::kEnd) {
      std::vector<std::string> exp{"+", "-", "*", "/", "^"};
      if (depth_ > 0) exp.push_back(")");
      exp.push_back("end of input");
      fail("unexpected token '" + std::string(cur_.text) + "'", exp);
    }
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) const {
    std::string msg = "syntax error at offset " + std::to_string(cur_.offset) + ": " + what + "; expected one of:";
    for (const auto& e : expected) msg += " " + e;
    throw ParseError(msg, cur_.offset, std::move(expected));
  }

  void advance() {
    std::size_t i = pos_;
    while (i < src_.size() && (src_[i] == ' ' || src_[i] == '\t' || src_[i] == '\n' || src_[i] == '\r')) ++i;
    Token t{Tok::kEnd, i, {}, {}};
    if (i >= src_.size()) {
      t.text = "end of input";
      cur_ = t;
      pos_ = i;
      return;
    }
    const char c = src_[i];
    auto single = [&](Tok k) {
      t.kind = k;
      t.text = src_.substr(i, 1);
      pos_ = i + 1;
    };
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
      if (j < src_.size() && src_[j] == '.') {
        ++j;
        while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
      }
      if (j < src_.size() && (src_[j] == 'e' || src_[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
        if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
          while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) ++k;
          j = k;
        }
      }
      double v = 0.0;
      auto res = std::from_chars(src_.data() + i, src_.data() + j, v);
      if (res.ec != std::errc() || res.ptr != src_.data() + j) {
        cur_ = Token{Tok::kNumber, i, src_.substr(i, j - i), {}};
        fail("malformed number '" + std::string(src_.substr(i, j - i)) + "'", {"number"});
      }
      t.kind = Tok::kNumber;
      t.value = cplx(v, 0.0);
      if (j < src_.size() && src_[j] == 'i' &&
          (j + 1 >= src_.size() || !std::isalnum(static_cast<unsigned char>(src_[j + 1])))) {
        t.value = cplx(0.0, v);
        ++j;
      }
      t.text = src_.substr(i, j - i);
      pos_ = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) ++j;
      t.kind = Tok::kIdent;
      t.text = src_.substr(i, j - i);
      pos_ = j;
    } else {
      switch (c) {
        case '+': single(Tok::kPlus); break;
        case '-': single(Tok::kMinus); break;
        case '*': single(Tok::kStar); break;
        case '/': single(Tok::kSlash); break;
        case '^': single(Tok::kCaret); break;
        case '(': single(Tok::kLParen); break;
        case ')': single(Tok::kRParen); break;
        case ',': single(Tok::kComma); break;
        default:
          cur_ = Token{Tok::kEnd, i, src_.substr(i, 1), {}};
          fail("unexpected character '" + std::string(1, c) + "'", primary_set());
      }
    }
    cur_ = t;
  }

  static std::vector<std::string> primary_set() { return {"number", "t", "pi", "function", "(", "-"}; }

  static int lbp(Tok k) {
    switch (k) {
      case Tok::kPlus:
      case Tok::kMinus: return 10;
      case Tok::kStar:
      case Tok::kSlash: return 20;
      case Tok::kCaret: return 40;
      default: return 0;
    }
  }

  void expect(Tok k, const char* what) {
    if (cur_.kind != k) fail("unexpected token '" + std::string(cur_.text) + "'", {what});
    advance();
  }

  NodePtr parse(int rbp) {
    NodePtr left = nud();
    while (lbp(cur_.kind) > rbp) left = led(left);
    return left;
  }

  NodePtr nud() {
    const Token t = cur_;
    switch (t.kind) {
      case Tok::kNumber: {
        advance();
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Kind::kNumber;
        n->number = t.value;
        return n;
      }
      case Tok::kMinus: {
        advance();
        return make(Expr::Kind::kNeg, {parse(30)});
      }
      case Tok::kLParen: {
        advance();
        ++depth_;
        NodePtr e = parse(0);
        --depth_;
        if (cur_.kind != Tok::kRParen) fail("unbalanced parenthesis", {"+", "-", "*", "/", "^", ")"});
        advance();
        return e;
      }
      case Tok::kIdent: {
        if (t.text == "t") {
          advance();
          return make(Expr::Kind::kVar);
        }
        if (t.text == "pi") {
          advance();
          return make(Expr::Kind::kPi);
        }
        if (t.text == "i") {
          advance();
          auto n = std::make_shared<Expr::Node>();
          n->kind = Expr::Kind::kNumber;
          n->number = cplx(0.0, 1.0);
          return n;
        }
        const FuncName* f = lookup_func(t.text);
        if (f == nullptr) fail("unknown identifier '" + std::string(t.text) + "'", primary_set());
        advance();
        expect(Tok::kLParen, "(");
        ++depth_;
        std::vector<NodePtr> args;
        args.push_back(parse(0));
        while (cur_.kind == Tok::kComma) {
          advance();
          args.push_back(parse(0));
        }
        --depth_;
        if (cur_.kind != Tok::kRParen) fail("unterminated call", {",", ")"});
        if (static_cast<int>(args.size()) != f->arity)
          fail(std::string(f->name) + " takes " + std::to_string(f->arity) + " argument(s)", {")"});
        advance();
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Kind::kCall;
        n->func = f->func;
        n->args = std::move(args);
        if (f->func == Expr::Func::kPow) n->rational = fold_rational(*n->args[1]);
        return n;
      }
      default:
        fail("unexpected token '" + std::string(t.text) + "'", primary_set());
    }
  }

  NodePtr led(NodePtr left) {
    const Tok k = cur_.kind;
    advance();
    switch (k) {
      case Tok::kPlus: return make(Expr::Kind::kAdd, {left, parse(10)});
      case Tok::kMinus: return make(Expr::Kind::kSub, {left, parse(10)});
      case Tok::kStar: return make(Expr::Kind::kMul, {left, parse(20)});
      case Tok::kSlash: return make(Expr::Kind::kDiv, {left, parse(20)});
      case Tok::kCaret: {
        NodePtr right = parse(39);
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Kind::kPow;
        n->args = {left, right};
        n->rational = fold_rational(*right);
        return n;
      }
      default:
        fail("unexpected token", {"+", "-", "*", "/", "^"});
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  Token cur_{Tok::kEnd, 0, {}, {}};
};

// ---- evaluation ----

std::string show(const Expr::Node& n);

[[noreturn]] void eval_fail(const std::string& what, const Expr::Node& n, double t) {
  throw EvalError(what + " in '" + show(n) + "' at t=" + std::to_string(t));
}

cplx int_pow(cplx b, long long p) {
  cplx r = 1.0;
  const bool neg = p < 0;
  unsigned long long e = neg ? static_cast<unsigned long long>(-p) : static_cast<unsigned long long>(p);
  while (e) {
    if (e & 1ULL) r *= b;
    b *= b;
    e >>= 1;
  }
  return neg ? 1.0 / r : r;
}

cplx power(cplx base, cplx expo, const std::optional<Expr::Rational>& rat, const Expr::Node& n, double t) {
  if (rat) {
    const auto [p, q] = *rat;
    if (base == 0.0) {
      if (p > 0) return 0.0;
      if (p == 0) return 1.0;
      eval_fail("division by zero", n, t);
    }
    if (q == 1 && std::abs(p) <= 64) return int_pow(base, p);
    if (base.imag() == 0.0) {
      const double b = base.real();
      const double e = static_cast<double>(p) / static_cast<double>(q);
      if (b > 0.0) return std::pow(b, e);
      if (q % 2 == 1) {
        const double mag = std::pow(-b, e);
        return (p % 2 == 0) ? mag : -mag;
      }
    }
    return std::pow(base, cplx(static_cast<double>(p) / static_cast<double>(q), 0.0));
  }
  if (base == 0.0) {
    if (expo.real() > 0.0) return 0.0;
    eval_fail("division by zero", n, t);
  }
  if (base.imag() == 0.0 && base.real() > 0.0 && expo.imag() == 0.0) return std::pow(base.real(), expo.real());
  return std::pow(base, expo);
}

cplx eval_node(const Expr::Node& n, double t) {
  using K = Expr::Kind;
  switch (n.kind) {
    case K::kVar: return t;
    case K::kNumber: return n.number;
    case K::kPi: return std::numbers::pi;
    case K::kNeg: return -eval_node(*n.args[0], t);
    case K::kAdd: return eval_node(*n.args[0], t) + eval_node(*n.args[1], t);
    case K::kSub: return eval_node(*n.args[0], t) - eval_node(*n.args[1], t);
    case K::kMul: return eval_node(*n.args[0], t) * eval_node(*n.args[1], t);
    case K::kDiv: {
      const cplx d = eval_node(*n.args[1], t);
      if (d == 0.0) eval_fail("division by zero", n, t);
      return eval_node(*n.args[0], t) / d;
    }
    case K::kPow: return power(eval_node(*n.args[0], t), eval_node(*n.args[1], t), n.rational, n, t);
    case K::kCall: {
      const cplx x = eval_node(*n.args[0], t);
      switch (n.func) {
        case Expr::Func::kSqrt:
          if (x.imag() == 0.0 && x.real() >= 0.0) return std::sqrt(x.real());
          return std::sqrt(x);
        case Expr::Func::kCbrt:
          if (x.imag() == 0.0) return std::cbrt(x.real());
          return std::pow(x, 1.0 / 3.0);
        case Expr::Func::kExp: return std::exp(x);
        case Expr::Func::kLog:
          if (x.imag() == 0.0 && x.real() <= 0.0) eval_fail("log of non-positive value", n, t);
          if (x.imag() == 0.0) return std::log(x.real());
          return std::log(x);
        case Expr::Func::kSin: return std::sin(x);
        case Expr::Func::kCos: return std::cos(x);
        case Expr::Func::kAbs: return std::abs(x);
        case Expr::Func::kPow: return power(x, eval_node(*n.args[1], t), n.rational, n, t);
      }
    }
  }
  return 0.0;
}

// ---- printing ----

int precedence(const Expr::Node& n) {
  using K = Expr::Kind;
  switch (n.kind) {
    case K::kAdd:
    case K::kSub: return 10;
    case K::kMul:
    case K::kDiv: return 20;
    case K::kNeg: return 30;
    case K::kPow: return 40;
    case K::kNumber: return (n.number.real() != 0.0 && n.number.imag() != 0.0) ? 10 : 100;
    default: return 100;
  }
}

std::string shortest(double x) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string number_text(cplx v) {
  if (v.imag() == 0.0) return shortest(v.real());
  if (v.real() == 0.0) return shortest(v.imag()) + "i";
  std::string im = shortest(std::abs(v.imag())) + "i";
  return shortest(v.real()) + (v.imag() < 0 ? "-" : "+") + im;
}

std::string wrap(const Expr::Node& child, bool paren) {
  std::string s = show(child);
  return paren ? "(" + s + ")" : s;
}

std::string show(const Expr::Node& n) {
  using K = Expr::Kind;
  const auto binary = [&](const char* op, int prec) {
    return wrap(*n.args[0], precedence(*n.args[0]) < prec) + op + wrap(*n.args[1], precedence(*n.args[1]) <= prec);
  };
  switch (n.kind) {
    case K::kVar: return "t";
    case K::kPi: return "pi";
    case K::kNumber: return number_text(n.number);
    case K::kAdd: return binary("+", 10);
    case K::kSub: return binary("-", 10);
    case K::kMul: return binary("*", 20);
    case K::kDiv: return binary("/", 20);
    case K::kNeg: return "-" + wrap(*n.args[0], precedence(*n.args[0]) < 30);
    case K::kPow:
      return wrap(*n.args[0], precedence(*n.args[0]) <= 40) + "^" + wrap(*n.args[1], precedence(*n.args[1]) < 40);
    case K::kCall: {
      std::string s(func_info(n.func).name);
      s += "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) s += ", ";
        s += show(*n.args[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

bool same(const Expr::Node& a, const Expr::Node& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  if (a.kind == Expr::Kind::kNumber && a.number != b.number) return false;
  if (a.kind == Expr::Kind::kCall && a.func != b.func) return false;
  if (a.rational != b.rational) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!same(*a.args[i], *b.args[i])) return false;
  return true;
}

bool mentions_t(const Expr::Node& n) {
  if (n.kind == Expr::Kind::kVar) return true;
  for (const auto& a : n.args)
    if (mentions_t(*a)) return true;
  return false;
}

}  // namespace

Expr Expr::number(cplx v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kNumber;
  n->number = v;
  return Expr(n);
}

Expr Expr::variable() { return Expr(make(Kind::kVar)); }

cplx Expr::evaluate(double t) const {
  if (!node_) return 0.0;
  return eval_node(*node_, t);
}

bool Expr::is_constant() const { return node_ && !mentions_t(*node_); }

std::string Expr::to_string() const { return node_ ? show(*node_) : std::string("0"); }

bool operator==(const Expr& a, const Expr& b) {
  if (!a.node_ || !b.node_) return a.node_ == b.node_;
  return same(*a.node_, *b.node_);
}

Expr parse_expr(std::string_view text) { return Expr(Parser(text).parse_all()); }

}  // namespace perron
