#include "dirac_ocp/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "dirac_ocp/errors.hpp"

namespace dirac_ocp {

namespace {

// Recursive-descent parser producing a tiny expression tree.
struct Node {
  virtual ~Node() = default;
  virtual double eval(const Eigen::Vector3d& p) const = 0;
};
using NodePtr = std::unique_ptr<Node>;

struct Constant : Node {
  double value;
  explicit Constant(double v) : value(v) {}
  double eval(const Eigen::Vector3d&) const override { return value; }
};

struct Variable : Node {
  int index;
  explicit Variable(int i) : index(i) {}
  double eval(const Eigen::Vector3d& p) const override { return p(index); }
};

struct Unary : Node {
  double (*fn)(double);
  NodePtr arg;
  Unary(double (*f)(double), NodePtr a) : fn(f), arg(std::move(a)) {}
  double eval(const Eigen::Vector3d& p) const override { return fn(arg->eval(p)); }
};

struct Binary : Node {
  char op;
  NodePtr lhs, rhs;
  Binary(char o, NodePtr l, NodePtr r) : op(o), lhs(std::move(l)), rhs(std::move(r)) {}
  double eval(const Eigen::Vector3d& p) const override {
    double a = lhs->eval(p), b = rhs->eval(p);
    switch (op) {
      case '+': return a + b;
      case '-': return a - b;
      case '*': return a * b;
      case '/': return a / b;
      default: return std::pow(a, b);
    }
  }
};

class Parser {
public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = sum();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected character '" + std::string(1, text_[pos_]) +
                       "' in expression at position " + std::to_string(pos_));
    return e;
  }

private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr sum() {
    NodePtr lhs = product();
    for (;;) {
      if (consume('+'))
        lhs = std::make_unique<Binary>('+', std::move(lhs), product());
      else if (consume('-'))
        lhs = std::make_unique<Binary>('-', std::move(lhs), product());
      else
        return lhs;
    }
  }

  NodePtr product() {
    NodePtr lhs = power();
    for (;;) {
      if (consume('*'))
        lhs = std::make_unique<Binary>('*', std::move(lhs), power());
      else if (consume('/'))
        lhs = std::make_unique<Binary>('/', std::move(lhs), power());
      else
        return lhs;
    }
  }

  NodePtr power() {
    NodePtr base = unary();
    if (consume('^'))  // right associative
      return std::make_unique<Binary>('^', std::move(base), power());
    return base;
  }

  NodePtr unary() {
    if (consume('-'))
      return std::make_unique<Binary>('-', std::make_unique<Constant>(0.0), unary());
    if (consume('+')) return unary();
    return atom();
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = sum();
      if (!consume(')')) throw ParseError("missing ')' in expression");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError("unexpected character '" + std::string(1, c) +
                     "' in expression at position " + std::to_string(pos_));
  }

  NodePtr number() {
    std::size_t end = 0;
    double v;
    try {
      v = std::stod(text_.substr(pos_), &end);
    } catch (const std::exception&) {
      throw ParseError("malformed number in expression at position " +
                       std::to_string(pos_));
    }
    pos_ += end;
    return std::make_unique<Constant>(v);
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    if (name == "x") return std::make_unique<Variable>(0);
    if (name == "y") return std::make_unique<Variable>(1);
    if (name == "z") return std::make_unique<Variable>(2);
    if (name == "pi") return std::make_unique<Constant>(M_PI);
    if (name == "e") return std::make_unique<Constant>(M_E);

    static const std::map<std::string, double (*)(double)> fns = {
        {"sin", std::sin},   {"cos", std::cos},   {"tan", std::tan},
        {"exp", std::exp},   {"log", std::log},   {"sqrt", std::sqrt},
        {"abs", std::fabs},  {"atan", std::atan}, {"sinh", std::sinh},
        {"cosh", std::cosh}, {"tanh", std::tanh}};
    auto it = fns.find(name);
    if (it == fns.end())
      throw ParseError("unknown identifier '" + name + "' in expression");
    if (!consume('('))
      throw ParseError("function '" + name + "' requires parentheses");
    NodePtr arg = sum();
    if (!consume(')')) throw ParseError("missing ')' after argument of '" + name + "'");
    return std::make_unique<Unary>(it->second, std::move(arg));
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

ScalarField compile_expression(const std::string& text) {
  Parser parser(text);
  std::shared_ptr<Node> root(parser.parse().release());
  return [root](const Eigen::Vector3d& p) { return root->eval(p); };
}

}  // namespace dirac_ocp
