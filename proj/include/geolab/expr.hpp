#pragma once

// Parser and evaluator for scalar expressions over the jet algebra. The
// grammar covers numeric literals, declared variables, bound parameters, the
// binary operators + - * / ^ (integer literal exponents only), unary minus and
// the builtin functions exp, ln, sin, cos, sinh, cosh, tan, atan, sqrt, abs.
// Expressions are compiled once (recursive-descent Pratt parser with byte
// offsets in every diagnostic) and evaluated over jets; order-0 jets reproduce
// plain evaluation.

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "geolab/jet.hpp"

namespace geolab {

struct SyntaxError : std::runtime_error {
  SyntaxError(const std::string& msg, size_t offset)
      : std::runtime_error(msg + " (at byte " + std::to_string(offset) + ")"), offset(offset) {}
  size_t offset;
};
struct UnknownIdentifier : SyntaxError {
  UnknownIdentifier(const std::string& name, size_t offset)
      : SyntaxError("unknown identifier '" + name + "'", offset) {}
};
struct NonIntegerExponent : SyntaxError {
  explicit NonIntegerExponent(size_t offset)
      : SyntaxError("exponent must be an integer literal", offset) {}
};
struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class BinOp { Add, Sub, Mul, Div };
enum class Func { Exp, Ln, Sin, Cos, Sinh, Cosh, Tan, Atan, Sqrt, Abs };

inline const std::map<std::string, Func>& builtin_functions() {
  static const std::map<std::string, Func> m = {
      {"exp", Func::Exp},   {"ln", Func::Ln},     {"sin", Func::Sin}, {"cos", Func::Cos},
      {"sinh", Func::Sinh}, {"cosh", Func::Cosh}, {"tan", Func::Tan}, {"atan", Func::Atan},
      {"sqrt", Func::Sqrt}, {"abs", Func::Abs}};
  return m;
}

class Expr {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;
  struct Node {
    enum Kind { Num, Var, Param, Bin, Neg, Call, Pow } kind;
    double num = 0.0;
    std::string name;     // Var/Param
    BinOp op = BinOp::Add;
    Func func = Func::Exp;
    int expo = 0;         // Pow
    NodePtr lhs, rhs;     // Bin: both; Neg/Call/Pow: lhs only
  };

  static Expr parse(std::string_view src, std::span<const std::string> vars,
                    std::span<const std::string> params) {
    Parser p{src, vars, params};
    NodePtr root = p.parse_expr(0);
    p.skip_ws();
    if (p.pos != src.size()) throw SyntaxError("unexpected trailing input", p.pos);
    return Expr(std::move(root));
  }

  Jet eval(const std::map<std::string, Jet>& bindings,
           const std::map<std::string, double>& params) const {
    return eval_node(*root_, bindings, params);
  }

  std::string print() const {
    std::ostringstream os;
    print_node(*root_, os);
    return os.str();
  }

  bool same_ast(const Expr& other) const { return same_node(*root_, *other.root_); }

  const NodePtr& root() const { return root_; }

 private:
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  struct Parser {
    std::string_view src;
    std::span<const std::string> vars;
    std::span<const std::string> params;
    size_t pos = 0;

    void skip_ws() {
      while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    char peek() {
      skip_ws();
      return pos < src.size() ? src[pos] : '\0';
    }

    NodePtr parse_expr(int min_prec) {
      NodePtr lhs = parse_unary();
      for (;;) {
        skip_ws();
        if (pos >= src.size()) break;
        char c = src[pos];
        int prec;
        if (c == '+' || c == '-') prec = 10;
        else if (c == '*' || c == '/') prec = 20;
        else if (c == '^') prec = 40;
        else break;
        if (prec < min_prec) break;
        ++pos;
        if (c == '^') {
          lhs = parse_pow(lhs);
          continue;
        }
        NodePtr rhs = parse_expr(prec + 1);  // left-associative
        auto n = std::make_shared<Node>();
        n->kind = Node::Bin;
        n->op = c == '+' ? BinOp::Add : c == '-' ? BinOp::Sub : c == '*' ? BinOp::Mul : BinOp::Div;
        n->lhs = lhs;
        n->rhs = rhs;
        lhs = n;
      }
      return lhs;
    }

    // exponent: optional '-' followed by an integer literal
    NodePtr parse_pow(NodePtr base) {
      skip_ws();
      size_t at = pos;
      bool neg = false;
      if (pos < src.size() && src[pos] == '-') { neg = true; ++pos; skip_ws(); at = pos; }
      if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
        throw SyntaxError("expected integer literal exponent after '^'", pos);
      auto [val, is_int] = lex_number();
      if (!is_int) throw NonIntegerExponent(at);
      auto n = std::make_shared<Node>();
      n->kind = Node::Pow;
      n->expo = int(val) * (neg ? -1 : 1);
      n->lhs = std::move(base);
      return n;
    }

    NodePtr parse_unary() {
      skip_ws();
      if (pos < src.size() && src[pos] == '-') {
        ++pos;
        NodePtr inner = parse_expr(30);  // binds tighter than * /, looser than ^
        auto n = std::make_shared<Node>();
        n->kind = Node::Neg;
        n->lhs = inner;
        return n;
      }
      return parse_primary();
    }

    NodePtr parse_primary() {
      skip_ws();
      if (pos >= src.size()) throw SyntaxError("unexpected end of input", pos);
      char c = src[pos];
      if (c == '(') {
        ++pos;
        NodePtr inner = parse_expr(0);
        skip_ws();
        if (pos >= src.size() || src[pos] != ')') throw SyntaxError("expected ')'", pos);
        ++pos;
        return inner;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        auto n = std::make_shared<Node>();
        n->kind = Node::Num;
        n->num = lex_number().first;
        return n;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
          ++pos;
        std::string name(src.substr(start, pos - start));
        if (auto it = builtin_functions().find(name); it != builtin_functions().end()) {
          skip_ws();
          if (pos >= src.size() || src[pos] != '(')
            throw SyntaxError("expected '(' after function '" + name + "'", pos);
          ++pos;
          NodePtr arg = parse_expr(0);
          skip_ws();
          if (pos >= src.size() || src[pos] != ')')
            throw SyntaxError("expected ')' closing call of '" + name + "'", pos);
          ++pos;
          auto n = std::make_shared<Node>();
          n->kind = Node::Call;
          n->func = it->second;
          n->lhs = arg;
          return n;
        }
        auto n = std::make_shared<Node>();
        for (const auto& v : vars)
          if (v == name) { n->kind = Node::Var; n->name = name; return n; }
        for (const auto& p : params)
          if (p == name) { n->kind = Node::Param; n->name = name; return n; }
        throw UnknownIdentifier(name, start);
      }
      throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
    }

    // returns (value, was_plain_integer)
    std::pair<double, bool> lex_number() {
      size_t start = pos;
      bool is_int = true;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      if (pos < src.size() && src[pos] == '.') {
        is_int = false;
        ++pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      }
      if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
        is_int = false;
        ++pos;
        if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
        if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
          throw SyntaxError("malformed exponent in numeric literal", pos);
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      }
      if (pos == start || (pos == start + 1 && src[start] == '.'))
        throw SyntaxError("malformed numeric literal", start);
      double v = 0.0;
      try {
        v = std::stod(std::string(src.substr(start, pos - start)));
      } catch (const std::exception&) {
        throw SyntaxError("malformed numeric literal", start);
      }
      return {v, is_int};
    }
  };

  static Jet proto_constant(cplx value, const std::map<std::string, Jet>& bind) {
    if (bind.empty()) return Jet::constant(value, 0.0, 0.0, 0);
    const Jet& any = bind.begin()->second;
    return Jet::constant(value, any.u0(), any.v0(), any.order());
  }

  static Jet eval_node(const Node& n, const std::map<std::string, Jet>& bind,
                       const std::map<std::string, double>& params) {
    switch (n.kind) {
      case Node::Num: return proto_constant(n.num, bind);
      case Node::Var: {
        auto it = bind.find(n.name);
        if (it == bind.end()) throw EvalError("unbound variable '" + n.name + "'");
        return it->second;
      }
      case Node::Param: {
        auto it = params.find(n.name);
        if (it == params.end()) throw EvalError("unbound parameter '" + n.name + "'");
        return proto_constant(it->second, bind);
      }
      case Node::Bin: {
        Jet a = eval_node(*n.lhs, bind, params);
        Jet b = eval_node(*n.rhs, bind, params);
        switch (n.op) {
          case BinOp::Add: return a + b;
          case BinOp::Sub: return a - b;
          case BinOp::Mul: return a * b;
          case BinOp::Div: return a / b;
        }
        throw EvalError("bad binop");
      }
      case Node::Neg: return -eval_node(*n.lhs, bind, params);
      case Node::Pow: return pow_int(eval_node(*n.lhs, bind, params), n.expo);
      case Node::Call: {
        Jet a = eval_node(*n.lhs, bind, params);
        switch (n.func) {
          case Func::Exp: return exp(a);
          case Func::Ln: return log(a);
          case Func::Sin: return sin(a);
          case Func::Cos: return cos(a);
          case Func::Sinh: return sinh(a);
          case Func::Cosh: return cosh(a);
          case Func::Tan: return tan(a);
          case Func::Atan: return atan(a);
          case Func::Sqrt: return sqrt(a);
          case Func::Abs: {
            // permitted only for real-valued jets: taking |.| of a genuinely
            // complex field would hide non-differentiable points
            if (std::abs(a.value().imag()) > 1e-10 * (1.0 + std::abs(a.value())))
              throw EvalError("abs applied to a non-real jet");
            return abs_jet(a);
          }
        }
        throw EvalError("bad function");
      }
    }
    throw EvalError("bad node");
  }

  static const char* func_name(Func f) {
    switch (f) {
      case Func::Exp: return "exp";
      case Func::Ln: return "ln";
      case Func::Sin: return "sin";
      case Func::Cos: return "cos";
      case Func::Sinh: return "sinh";
      case Func::Cosh: return "cosh";
      case Func::Tan: return "tan";
      case Func::Atan: return "atan";
      case Func::Sqrt: return "sqrt";
      case Func::Abs: return "abs";
    }
    return "?";
  }

  static void print_node(const Node& n, std::ostringstream& os) {
    switch (n.kind) {
      case Node::Num: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", n.num);
        os << buf;
        break;
      }
      case Node::Var:
      case Node::Param: os << n.name; break;
      case Node::Bin:
        os << '(';
        print_node(*n.lhs, os);
        os << (n.op == BinOp::Add ? " + " : n.op == BinOp::Sub ? " - "
               : n.op == BinOp::Mul ? "*" : "/");
        print_node(*n.rhs, os);
        os << ')';
        break;
      case Node::Neg:
        os << "(-";
        print_node(*n.lhs, os);
        os << ')';
        break;
      case Node::Pow:
        os << '(';
        print_node(*n.lhs, os);
        os << '^' << n.expo << ')';
        break;
      case Node::Call:
        os << func_name(n.func) << '(';
        print_node(*n.lhs, os);
        os << ')';
        break;
    }
  }

  static bool same_node(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Node::Num: return a.num == b.num;
      case Node::Var:
      case Node::Param: return a.name == b.name;
      case Node::Bin:
        return a.op == b.op && same_node(*a.lhs, *b.lhs) && same_node(*a.rhs, *b.rhs);
      case Node::Neg: return same_node(*a.lhs, *b.lhs);
      case Node::Pow: return a.expo == b.expo && same_node(*a.lhs, *b.lhs);
      case Node::Call: return a.func == b.func && same_node(*a.lhs, *b.lhs);
    }
    return false;
  }

  NodePtr root_;
};

}  // namespace geolab
