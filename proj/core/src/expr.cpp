#include "emfd/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "emfd/errors.hpp"

namespace emfd {

struct Expr::Node {
  enum class Op {
    number,
    var_x,
    var_y,
    add,
    sub,
    mul,
    div,
    pow,
    neg,
    fn_sin,
    fn_cos,
    fn_exp,
    fn_sqrt,
    fn_abs,
    iflt,
  };
  Op op;
  double value = 0.0;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = Expr::Node;
using Op = Node::Op;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Op op, std::vector<NodePtr> args = {}, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->value = value;
  n->args = std::move(args);
  return n;
}

struct Token {
  enum class Kind { number, ident, symbol, end };
  Kind kind;
  double number = 0.0;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }
  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    current_.pos = pos_;
    if (pos_ >= text_.size()) {
      current_.kind = Token::Kind::end;
      current_.text = "<end>";
      return;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      const char* start = text_.c_str() + pos_;
      char* end = nullptr;
      current_.number = std::strtod(start, &end);
      if (end == start) throw SyntaxError("bad number", pos_, "number");
      current_.kind = Token::Kind::number;
      current_.text.assign(start, static_cast<std::size_t>(end - start));
      pos_ += static_cast<std::size_t>(end - start);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < text_.size() && std::isalpha(static_cast<unsigned char>(text_[end]))) ++end;
      current_.kind = Token::Kind::ident;
      current_.text = text_.substr(pos_, end - pos_);
      pos_ = end;
      return;
    }
    if (std::string("+-*/^(),").find(c) != std::string::npos) {
      current_.kind = Token::Kind::symbol;
      current_.text = std::string(1, c);
      ++pos_;
      return;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos_, "token");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  Token current_;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  NodePtr run() {
    NodePtr e = expr();
    if (lex_.peek().kind != Token::Kind::end)
      throw SyntaxError("trailing input after expression: \"" + lex_.peek().text + "\"", lex_.peek().pos,
                        "end of input");
    return e;
  }

 private:
  bool at_symbol(const char* s) const {
    return lex_.peek().kind == Token::Kind::symbol && lex_.peek().text == s;
  }
  void expect_symbol(const char* s) {
    if (!at_symbol(s))
      throw SyntaxError("expected '" + std::string(s) + "', got \"" + lex_.peek().text + "\"",
                        lex_.peek().pos, s);
    lex_.take();
  }

  NodePtr expr() {
    NodePtr left = term();
    while (at_symbol("+") || at_symbol("-")) {
      const bool add = lex_.take().text == "+";
      left = make(add ? Op::add : Op::sub, {left, term()});
    }
    return left;
  }

  NodePtr term() {
    NodePtr left = unary();
    while (at_symbol("*") || at_symbol("/")) {
      const bool mul = lex_.take().text == "*";
      left = make(mul ? Op::mul : Op::div, {left, unary()});
    }
    return left;
  }

  NodePtr unary() {
    if (at_symbol("-")) {
      lex_.take();
      return make(Op::neg, {unary()});
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (at_symbol("^")) {
      lex_.take();
      return make(Op::pow, {base, unary()});  // right-associative, sign allowed in the exponent
    }
    return base;
  }

  NodePtr primary() {
    const Token t = lex_.peek();
    if (t.kind == Token::Kind::number) {
      lex_.take();
      return make(Op::number, {}, t.number);
    }
    if (t.kind == Token::Kind::ident) {
      lex_.take();
      if (t.text == "x") return make(Op::var_x);
      if (t.text == "y") return make(Op::var_y);
      if (t.text == "pi") return make(Op::number, {}, M_PI);
      if (t.text == "e") return make(Op::number, {}, M_E);
      Op fn;
      if (t.text == "sin")
        fn = Op::fn_sin;
      else if (t.text == "cos")
        fn = Op::fn_cos;
      else if (t.text == "exp")
        fn = Op::fn_exp;
      else if (t.text == "sqrt")
        fn = Op::fn_sqrt;
      else if (t.text == "abs")
        fn = Op::fn_abs;
      else if (t.text == "iflt")
        fn = Op::iflt;
      else
        throw SyntaxError("unknown name \"" + t.text + "\"", t.pos, "x, y, pi, e or a function");
      expect_symbol("(");
      std::vector<NodePtr> args;
      args.push_back(expr());
      if (fn == Op::iflt) {
        for (int i = 0; i < 3; ++i) {
          expect_symbol(",");
          args.push_back(expr());
        }
      }
      expect_symbol(")");
      return make(fn, std::move(args));
    }
    if (t.kind == Token::Kind::symbol && t.text == "(") {
      lex_.take();
      NodePtr inner = expr();
      expect_symbol(")");
      return inner;
    }
    throw SyntaxError("expected an operand, got \"" + t.text + "\"", t.pos, "operand");
  }

  Lexer lex_;
};

double check_finite(double v) {
  if (!std::isfinite(v)) throw EvalError("expression produced a non-finite value");
  return v;
}

double eval_node(const Node& n, double x, double y) {
  switch (n.op) {
    case Op::number: return n.value;
    case Op::var_x: return x;
    case Op::var_y: return y;
    case Op::add: return check_finite(eval_node(*n.args[0], x, y) + eval_node(*n.args[1], x, y));
    case Op::sub: return check_finite(eval_node(*n.args[0], x, y) - eval_node(*n.args[1], x, y));
    case Op::mul: return check_finite(eval_node(*n.args[0], x, y) * eval_node(*n.args[1], x, y));
    case Op::div: {
      const double denom = eval_node(*n.args[1], x, y);
      if (denom == 0.0) throw EvalError("division by zero");
      return check_finite(eval_node(*n.args[0], x, y) / denom);
    }
    case Op::pow:
      return check_finite(std::pow(eval_node(*n.args[0], x, y), eval_node(*n.args[1], x, y)));
    case Op::neg: return -eval_node(*n.args[0], x, y);
    case Op::fn_sin: return std::sin(eval_node(*n.args[0], x, y));
    case Op::fn_cos: return std::cos(eval_node(*n.args[0], x, y));
    case Op::fn_exp: return check_finite(std::exp(eval_node(*n.args[0], x, y)));
    case Op::fn_sqrt: return check_finite(std::sqrt(eval_node(*n.args[0], x, y)));
    case Op::fn_abs: return std::abs(eval_node(*n.args[0], x, y));
    case Op::iflt:
      // lazy: only the selected branch is evaluated
      return eval_node(*n.args[0], x, y) < eval_node(*n.args[1], x, y) ? eval_node(*n.args[2], x, y)
                                                                       : eval_node(*n.args[3], x, y);
  }
  throw EvalError("corrupt expression node");
}

void print_node(const Node& n, std::string& out) {
  char buf[40];
  switch (n.op) {
    case Op::number:
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    case Op::var_x: out += 'x'; return;
    case Op::var_y: out += 'y'; return;
    case Op::neg:
      out += "(-";
      print_node(*n.args[0], out);
      out += ')';
      return;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
    case Op::pow: {
      const char* sym = n.op == Op::add   ? "+"
                        : n.op == Op::sub ? "-"
                        : n.op == Op::mul ? "*"
                        : n.op == Op::div ? "/"
                                          : "^";
      out += '(';
      print_node(*n.args[0], out);
      out += sym;
      print_node(*n.args[1], out);
      out += ')';
      return;
    }
    case Op::fn_sin:
    case Op::fn_cos:
    case Op::fn_exp:
    case Op::fn_sqrt:
    case Op::fn_abs:
    case Op::iflt: {
      const char* name = n.op == Op::fn_sin    ? "sin"
                         : n.op == Op::fn_cos  ? "cos"
                         : n.op == Op::fn_exp  ? "exp"
                         : n.op == Op::fn_sqrt ? "sqrt"
                         : n.op == Op::fn_abs  ? "abs"
                                               : "iflt";
      out += name;
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ',';
        print_node(*n.args[i], out);
      }
      out += ')';
      return;
    }
  }
}

}  // namespace

Expr Expr::parse(const std::string& text) { return Expr(Parser(text).run()); }

double Expr::eval(double x, double y) const {
  if (!root_) throw EvalError("empty expression");
  return check_finite(eval_node(*root_, x, y));
}

std::string Expr::to_string() const {
  std::string out;
  if (root_) print_node(*root_, out);
  return out;
}

}  // namespace emfd
