#include "momspace/expr.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <vector>

namespace momspace {

namespace {

struct Node {
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Log, Exp } kind;
  Real value = 0;
  std::unique_ptr<Node> a, b;

  Real eval(Real y) const {
    switch (kind) {
      case Kind::Const: return value;
      case Kind::Var: return y;
      case Kind::Add: return a->eval(y) + b->eval(y);
      case Kind::Sub: return a->eval(y) - b->eval(y);
      case Kind::Mul: return a->eval(y) * b->eval(y);
      case Kind::Div: return a->eval(y) / b->eval(y);
      case Kind::Pow: return std::pow(a->eval(y), b->eval(y));
      case Kind::Neg: return -a->eval(y);
      case Kind::Log: return std::log(a->eval(y));
      case Kind::Exp: return std::exp(a->eval(y));
    }
    return 0;
  }
};

using NodePtr = std::unique_ptr<Node>;

NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_unique<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool consume(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw Error("expression error at position " + std::to_string(pos) + ": " + msg);
  }

  NodePtr parse() {
    NodePtr e = sum();
    skip();
    if (pos != s.size()) fail("trailing input");
    return e;
  }

  NodePtr sum() {
    NodePtr e = product();
    for (;;) {
      if (consume('+')) e = make(Node::Kind::Add, std::move(e), product());
      else if (consume('-')) e = make(Node::Kind::Sub, std::move(e), product());
      else return e;
    }
  }

  NodePtr product() {
    NodePtr e = unary();
    for (;;) {
      if (consume('*')) e = make(Node::Kind::Mul, std::move(e), unary());
      else if (consume('/')) e = make(Node::Kind::Div, std::move(e), unary());
      else return e;
    }
  }

  NodePtr unary() {
    if (consume('-')) return make(Node::Kind::Neg, unary());
    if (consume('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (consume('^')) return make(Node::Kind::Pow, std::move(base), unary());
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos >= s.size()) fail("unexpected end of input");
    const char c = s[pos];
    if (c == '(') {
      ++pos;
      NodePtr e = sum();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      Real v;
      try {
        v = std::stold(s.substr(pos), &used);
      } catch (const std::exception&) {
        fail("bad numeric literal");
      }
      pos += used;
      auto n = make(Node::Kind::Const);
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t e = pos;
      while (e < s.size() && std::isalpha(static_cast<unsigned char>(s[e]))) ++e;
      const std::string name = s.substr(pos, e - pos);
      pos = e;
      if (name == "y" || name == "x") return make(Node::Kind::Var);
      if (name == "log" || name == "exp") {
        if (!consume('(')) fail("expected '(' after " + name);
        NodePtr arg = sum();
        if (!consume(')')) fail("expected ')'");
        return make(name == "log" ? Node::Kind::Log : Node::Kind::Exp, std::move(arg));
      }
      fail("unknown identifier '" + name + "'");
    }
    fail("unexpected character");
  }
};

}  // namespace

std::function<Real(Real)> parse_expression(const std::string& text) {
  Parser p(text);
  std::shared_ptr<Node> root(p.parse().release());
  return [root](Real y) { return root->eval(y); };
}

}  // namespace momspace
