#include "twistleaf/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <limits>

#include "twistleaf/error.hpp"

namespace twistleaf {

namespace {

using Op = HoloExpr::Op;
using Node = HoloExpr::Node;
using NodePtr = HoloExpr::NodePtr;

struct Function {
  std::string_view name;
  Op op;
};
constexpr std::array<Function, 5> kFunctions{{
    {"exp", Op::Exp}, {"log", Op::Log}, {"sqrt", Op::Sqrt}, {"sin", Op::Sin}, {"cos", Op::Cos}}};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

NodePtr make_const(Complex c) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = c;
  return n;
}

NodePtr make_var(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->var = index;
  return n;
}

NodePtr make_unary(Op op, NodePtr child) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(child);
  return n;
}

NodePtr make_binary(Op op, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_pow(NodePtr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->lhs = std::move(base);
  n->exponent = exponent;
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError("syntax error: " + what, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Op::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make_binary(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Op::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make_binary(Op::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_unary(Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    while (accept('^')) base = make_pow(base, exponent());
    return base;
  }

  int exponent() {
    const bool parens = accept('(');
    int sign = 1;
    if (accept('-')) {
      sign = -1;
    } else {
      accept('+');
    }
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) {
      fail(pos_ >= text_.size() ? "expected integer exponent but input ended"
                                : "exponent must be an integer literal");
    }
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("exponent out of range");
    }
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
      fail("exponent must be an integer literal");
    }
    if (parens) expect(')');
    return sign * value;
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    // A trailing `i` not followed by an identifier character makes an imaginary literal.
    if (pos_ < text_.size() && text_[pos_] == 'i' &&
        (pos_ + 1 >= text_.size() || !is_ident_char(text_[pos_ + 1]))) {
      ++pos_;
      return make_const(Complex(0.0, value));
    }
    return make_const(Complex(value, 0.0));
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected operand but input ended");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (is_ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      for (std::size_t k = 0; k < vars_.size(); ++k) {
        if (vars_[k] == name) return make_var(k);
      }
      for (const auto& f : kFunctions) {
        if (f.name == name) {
          expect('(');
          NodePtr arg = expr();
          expect(')');
          return make_unary(f.op, arg);
        }
      }
      if (name == "i") return make_const(kI);
      pos_ = start;
      throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

Complex ipow(Complex base, int n) {
  // n >= 0
  Complex result(1.0);
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

Complex eval_node(const Node& n, std::span<const Complex> x) {
  switch (n.op) {
    case Op::Const:
      return n.value;
    case Op::Var:
      return x[n.var];
    case Op::Neg:
      return -eval_node(*n.lhs, x);
    case Op::Add:
      return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
    case Op::Sub:
      return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
    case Op::Mul:
      return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
    case Op::Div: {
      const Complex den = eval_node(*n.rhs, x);
      if (den == Complex(0.0)) throw DomainError("division by zero");
      return eval_node(*n.lhs, x) / den;
    }
    case Op::Pow: {
      const Complex b = eval_node(*n.lhs, x);
      if (n.exponent >= 0) return ipow(b, n.exponent);
      if (b == Complex(0.0)) throw DomainError("negative power of zero");
      return 1.0 / ipow(b, -n.exponent);
    }
    case Op::Exp:
      return std::exp(eval_node(*n.lhs, x));
    case Op::Log: {
      const Complex a = eval_node(*n.lhs, x);
      if (a == Complex(0.0)) throw DomainError("log at its branch point 0");
      return std::log(a);
    }
    case Op::Sqrt: {
      const Complex a = eval_node(*n.lhs, x);
      if (a == Complex(0.0)) throw DomainError("sqrt at its branch point 0");
      return std::sqrt(a);
    }
    case Op::Sin:
      return std::sin(eval_node(*n.lhs, x));
    case Op::Cos:
      return std::cos(eval_node(*n.lhs, x));
  }
  return {};
}

Jet2 jet_node(const Node& n, std::span<const Complex> x) {
  switch (n.op) {
    case Op::Const:
      return Jet2::constant(n.value);
    case Op::Var:
      return Jet2::variable(x[n.var], n.var);
    case Op::Neg:
      return -jet_node(*n.lhs, x);
    case Op::Add:
      return jet_node(*n.lhs, x) + jet_node(*n.rhs, x);
    case Op::Sub:
      return jet_node(*n.lhs, x) - jet_node(*n.rhs, x);
    case Op::Mul:
      return jet_node(*n.lhs, x) * jet_node(*n.rhs, x);
    case Op::Div:
      return jet_node(*n.lhs, x) / jet_node(*n.rhs, x);
    case Op::Pow: {
      const Jet2 a = jet_node(*n.lhs, x);
      const int k = n.exponent;
      if (k == 0) return Jet2::constant(1.0);
      if (k == 1) return a;
      const Complex b = a.value;
      if (k < 0 && b == Complex(0.0)) throw DomainError("negative power of zero");
      auto pw = [&](int m) { return m >= 0 ? ipow(b, m) : 1.0 / ipow(b, -m); };
      const double kd = k;
      return compose(a, pw(k), kd * pw(k - 1), kd * (kd - 1.0) * pw(k - 2));
    }
    case Op::Exp: {
      const Jet2 a = jet_node(*n.lhs, x);
      const Complex e = std::exp(a.value);
      return compose(a, e, e, e);
    }
    case Op::Log: {
      const Jet2 a = jet_node(*n.lhs, x);
      if (a.value == Complex(0.0)) throw DomainError("log at its branch point 0");
      const Complex inv = 1.0 / a.value;
      return compose(a, std::log(a.value), inv, -inv * inv);
    }
    case Op::Sqrt: {
      const Jet2 a = jet_node(*n.lhs, x);
      if (a.value == Complex(0.0)) throw DomainError("sqrt at its branch point 0");
      const Complex root = std::sqrt(a.value);
      const Complex d1 = 0.5 / root;
      return compose(a, root, d1, -0.5 * d1 / a.value);
    }
    case Op::Sin: {
      const Jet2 a = jet_node(*n.lhs, x);
      const Complex s = std::sin(a.value);
      return compose(a, s, std::cos(a.value), -s);
    }
    case Op::Cos: {
      const Jet2 a = jet_node(*n.lhs, x);
      const Complex c = std::cos(a.value);
      return compose(a, c, -std::sin(a.value), -c);
    }
  }
  return {};
}

// Printing precedence: higher binds tighter.
int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    default:
      return 5;
  }
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int node_precedence(const Node& n) { return precedence(n.op); }

void print_node(const Node& n, const std::vector<std::string>& vars, std::string& out);

void print_child(const Node& child, bool wrap, const std::vector<std::string>& vars, std::string& out) {
  if (wrap) out += '(';
  print_node(child, vars, out);
  if (wrap) out += ')';
}

void print_node(const Node& n, const std::vector<std::string>& vars, std::string& out) {
  switch (n.op) {
    case Op::Const: {
      const double re = n.value.real();
      const double im = n.value.imag();
      if (im == 0.0 && !std::signbit(re)) {
        out += format_double(re);
      } else if (re == 0.0 && !std::signbit(re) && !std::signbit(im)) {
        out += im == 1.0 ? "i" : format_double(im) + "i";
      } else {
        // Not produced by the parser; prints as an equivalent sum.
        out += "(" + format_double(re) + (std::signbit(im) ? "-" : "+") + format_double(std::abs(im)) + "i)";
      }
      return;
    }
    case Op::Var:
      out += vars[n.var];
      return;
    case Op::Neg:
      out += '-';
      print_child(*n.lhs, node_precedence(*n.lhs) < precedence(Op::Neg), vars, out);
      return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      const int p = precedence(n.op);
      print_child(*n.lhs, node_precedence(*n.lhs) < p, vars, out);
      switch (n.op) {
        case Op::Add: out += " + "; break;
        case Op::Sub: out += " - "; break;
        case Op::Mul: out += '*'; break;
        default: out += '/'; break;
      }
      print_child(*n.rhs, node_precedence(*n.rhs) <= p || n.rhs->op == Op::Neg, vars, out);
      return;
    }
    case Op::Pow:
      print_child(*n.lhs, node_precedence(*n.lhs) < 5, vars, out);
      out += '^';
      out += n.exponent < 0 ? "(" + std::to_string(n.exponent) + ")" : std::to_string(n.exponent);
      return;
    default:
      for (const auto& f : kFunctions) {
        if (f.op == n.op) {
          out += f.name;
          break;
        }
      }
      out += '(';
      print_node(*n.lhs, vars, out);
      out += ')';
      return;
  }
}

bool equivalent(const Node& a, const Node& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Const:
      return a.value == b.value;
    case Op::Var:
      return a.var == b.var;
    case Op::Pow:
      return a.exponent == b.exponent && equivalent(*a.lhs, *b.lhs);
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      return equivalent(*a.lhs, *b.lhs) && equivalent(*a.rhs, *b.rhs);
    default:
      return equivalent(*a.lhs, *b.lhs);
  }
}

}  // namespace

HoloExpr HoloExpr::parse(std::string_view text, std::vector<std::string> vars) {
  if (vars.size() > kMaxVars) {
    throw ParseError("more than " + std::to_string(kMaxVars) + " variables declared", 0);
  }
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const std::string& v = vars[k];
    if (v.empty() || !is_ident_start(v[0]) || !std::all_of(v.begin(), v.end(), is_ident_char)) {
      throw ParseError("invalid variable name '" + v + "'", 0);
    }
    if (v == "i" || std::any_of(kFunctions.begin(), kFunctions.end(),
                                [&](const Function& f) { return f.name == v; })) {
      throw ParseError("variable name '" + v + "' is reserved", 0);
    }
    if (std::find(vars.begin(), vars.begin() + static_cast<std::ptrdiff_t>(k), v) !=
        vars.begin() + static_cast<std::ptrdiff_t>(k)) {
      throw ParseError("duplicate variable name '" + v + "'", 0);
    }
  }
  NodePtr root = Parser(text, vars).parse();
  return HoloExpr(std::move(root), std::move(vars));
}

Complex HoloExpr::eval(std::span<const Complex> point) const {
  if (point.size() < vars_.size()) throw std::invalid_argument("HoloExpr::eval: too few coordinates");
  return eval_node(*root_, point);
}

Jet2 HoloExpr::eval_jet2(std::span<const Complex> point) const {
  if (point.size() < vars_.size()) throw std::invalid_argument("HoloExpr::eval_jet2: too few coordinates");
  return jet_node(*root_, point);
}

std::string HoloExpr::to_string() const {
  std::string out;
  print_node(*root_, vars_, out);
  return out;
}

bool HoloExpr::alpha_equivalent(const HoloExpr& other) const {
  return vars_.size() == other.vars_.size() && equivalent(*root_, *other.root_);
}

HoloFn2 HoloExpr::as_fn2() const {
  if (vars_.size() > 2) throw std::invalid_argument("HoloExpr::as_fn2: expression has more than two variables");
  HoloExpr self = *this;
  return [self](Complex a, Complex b) {
    const std::array<Complex, 3> x{a, b, Complex(0.0)};
    return self.eval_jet2(x);
  };
}

}  // namespace twistleaf
