#include "tracelab/exprparse.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace tracelab::exprparse {

namespace {

struct Node {
  enum class Kind { number, variable, add, sub, mul, neg, pow, exp, sinh, cosh } kind;
  double value{0.0};
  int var{0};
  int exponent{1};
  std::shared_ptr<Node> a, b;
};

using NodePtr = std::shared_ptr<Node>;

double eval_node(const Node& n, const std::vector<double>& vars) {
  switch (n.kind) {
    case Node::Kind::number: return n.value;
    case Node::Kind::variable:
      if (static_cast<std::size_t>(n.var) > vars.size())
        throw std::invalid_argument("expression refers to x" + std::to_string(n.var) +
                                    " but only " + std::to_string(vars.size()) +
                                    " variables were supplied");
      return vars[static_cast<std::size_t>(n.var - 1)];
    case Node::Kind::add: return eval_node(*n.a, vars) + eval_node(*n.b, vars);
    case Node::Kind::sub: return eval_node(*n.a, vars) - eval_node(*n.b, vars);
    case Node::Kind::mul: return eval_node(*n.a, vars) * eval_node(*n.b, vars);
    case Node::Kind::neg: return -eval_node(*n.a, vars);
    case Node::Kind::pow: {
      double base = eval_node(*n.a, vars);
      double out = 1.0;
      for (int i = 0; i < n.exponent; ++i) out *= base;
      return out;
    }
    case Node::Kind::exp: return std::exp(eval_node(*n.a, vars));
    case Node::Kind::sinh: return std::sinh(eval_node(*n.a, vars));
    case Node::Kind::cosh: return std::cosh(eval_node(*n.a, vars));
  }
  throw std::logic_error("unreachable expression node");
}

int max_var(const Node& n) {
  int m = (n.kind == Node::Kind::variable) ? n.var : 0;
  if (n.a) m = std::max(m, max_var(*n.a));
  if (n.b) m = std::max(m, max_var(*n.b));
  return m;
}

struct Parser {
  const std::string& s;
  std::size_t pos{0};

  explicit Parser(const std::string& text) : s(text) {}

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("expression error at position " + std::to_string(pos) + ": " +
                                what);
  }

  NodePtr parse_expr() {
    NodePtr left = parse_term();
    for (;;) {
      if (eat('+')) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::add;
        n->a = left;
        n->b = parse_term();
        left = n;
      } else if (eat('-')) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::sub;
        n->a = left;
        n->b = parse_term();
        left = n;
      } else {
        return left;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr left = parse_factor();
    while (eat('*')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::mul;
      n->a = left;
      n->b = parse_factor();
      left = n;
    }
    return left;
  }

  NodePtr parse_factor() {
    NodePtr base = parse_atom();
    skip();
    if (eat('^')) {
      skip();
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos == start) fail("expected a nonnegative integer exponent after '^'");
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::pow;
      n->a = base;
      n->exponent = std::stoi(s.substr(start, pos - start));
      return n;
    }
    return base;
  }

  NodePtr parse_atom() {
    skip();
    if (pos >= s.size()) fail("unexpected end of expression");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (c == '-') {
      ++pos;
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::neg;
      n->a = parse_atom();
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s.substr(pos), &used);
      } catch (const std::exception&) {
        fail("malformed number");
      }
      pos += used;
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::number;
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      while (pos < s.size() && std::isalnum(static_cast<unsigned char>(s[pos]))) ++pos;
      std::string name = s.substr(start, pos - start);
      if (name == "exp" || name == "sinh" || name == "cosh") {
        if (!eat('(')) fail("expected '(' after " + name);
        NodePtr inner = parse_expr();
        if (!eat(')')) fail("expected ')' closing " + name);
        auto n = std::make_shared<Node>();
        n->kind = name == "exp" ? Node::Kind::exp
                                : (name == "sinh" ? Node::Kind::sinh : Node::Kind::cosh);
        n->a = inner;
        return n;
      }
      if (name == "x") {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::variable;
        n->var = 1;
        return n;
      }
      if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '9') {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::variable;
        n->var = name[1] - '0';
        return n;
      }
      fail("unknown name '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

ParsedExpr parse(const std::string& text) {
  Parser p(text);
  NodePtr root = p.parse_expr();
  p.skip();
  if (p.pos != text.size())
    throw std::invalid_argument("expression error at position " + std::to_string(p.pos) +
                                ": trailing input");
  ParsedExpr out;
  out.arity = max_var(*root);
  out.fn = [root](const std::vector<double>& vars) { return eval_node(*root, vars); };
  return out;
}

}  // namespace tracelab::exprparse
