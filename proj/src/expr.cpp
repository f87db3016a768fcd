#include "gkv/expr.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

namespace gkv {

ExprPtr Expr::constant(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Const;
  e->cval = v;
  return e;
}

ExprPtr Expr::variable(int index) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Var;
  e->var = index;
  return e;
}

ExprPtr Expr::unary(UnOp op, ExprPtr child) {
  // fold a negated literal so that "-0.5" round-trips as a constant
  if (op == UnOp::Neg && child->kind == Kind::Const) return constant(-child->cval);
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Unary;
  e->uop = op;
  e->a = std::move(child);
  return e;
}

ExprPtr Expr::binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Binary;
  e->bop = op;
  e->a = std::move(lhs);
  e->b = std::move(rhs);
  return e;
}

ExprPtr Expr::pow(ExprPtr base, double exponent) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Pow;
  e->a = std::move(base);
  e->exponent = exponent;
  return e;
}

namespace {

struct Parser {
  const std::string& s;
  const std::vector<std::string>& coords;
  const std::map<std::string, double>& params;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  [[noreturn]] void err(const std::string& msg, size_t at) { throw ParseError(msg, at); }

  double number() {
    skip_ws();
    const char* begin = s.c_str() + pos;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) err("expected a number", pos);
    pos += static_cast<size_t>(end - begin);
    return v;
  }

  std::string identifier() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (start == pos) err("expected an identifier", pos);
    return s.substr(start, pos - start);
  }

  // expr    := term (('+'|'-') term)*
  // term    := factor (('*'|'/') factor)*
  // factor  := ('-'|'+') factor | power
  // power   := atom ('^' signed-number)?
  // atom    := number | ident | ident '(' expr ')' | '(' expr ')'
  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      if (eat('+'))
        lhs = Expr::binary(BinOp::Add, lhs, term());
      else if (eat('-'))
        lhs = Expr::binary(BinOp::Sub, lhs, term());
      else
        return lhs;
    }
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    for (;;) {
      if (eat('*'))
        lhs = Expr::binary(BinOp::Mul, lhs, factor());
      else if (eat('/'))
        lhs = Expr::binary(BinOp::Div, lhs, factor());
      else
        return lhs;
    }
  }

  ExprPtr factor() {
    if (eat('-')) return Expr::unary(UnOp::Neg, factor());
    if (eat('+')) return factor();
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (eat('^')) {
      skip_ws();
      size_t at = pos;
      bool neg = false;
      if (eat('-')) neg = true;
      if (peek() == '(') {
        // allow a parenthesized constant exponent, e.g. x^(-0.5)
        eat('(');
        double e = number();
        if (!eat(')')) err("expected ')' after exponent", pos);
        return Expr::pow(base, neg ? -e : e);
      }
      if (!std::isdigit(static_cast<unsigned char>(peek())) && peek() != '.')
        err("exponent must be a numeric constant", at);
      double e = number();
      return Expr::pow(base, neg ? -e : e);
    }
    return base;
  }

  ExprPtr atom() {
    skip_ws();
    if (pos >= s.size()) err("unexpected end of expression", pos);
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr::constant(number());
    if (c == '(') {
      ++pos;
      ExprPtr e = expr();
      if (!eat(')')) err("expected ')'", pos);
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t at = pos;
      std::string name = identifier();
      static const std::map<std::string, UnOp> funcs = {
          {"sin", UnOp::Sin}, {"cos", UnOp::Cos}, {"exp", UnOp::Exp},
          {"log", UnOp::Log}, {"sqrt", UnOp::Sqrt}};
      auto f = funcs.find(name);
      if (f != funcs.end()) {
        if (!eat('(')) err("function '" + name + "' requires one parenthesized argument", pos);
        ExprPtr arg = expr();
        if (eat(',')) err("function '" + name + "' takes exactly one argument", pos - 1);
        if (!eat(')')) err("expected ')' closing call of '" + name + "'", pos);
        return Expr::unary(f->second, arg);
      }
      for (size_t i = 0; i < coords.size(); ++i)
        if (coords[i] == name) {
          if (eat('(')) err("coordinate '" + name + "' is not callable", pos - 1);
          return Expr::variable(static_cast<int>(i));
        }
      auto p = params.find(name);
      if (p != params.end()) {
        if (eat('(')) err("parameter '" + name + "' is not callable", pos - 1);
        return Expr::constant(p->second);
      }
      err("unknown identifier '" + name + "'", at);
    }
    err(std::string("unexpected character '") + c + "'", pos);
  }
};

}  // namespace

ExprPtr parse_expr(const std::string& text, const std::vector<std::string>& coords,
                   const std::map<std::string, double>& params) {
  Parser p{text, coords, params};
  ExprPtr e = p.expr();
  p.skip_ws();
  if (p.pos != text.size()) p.err("trailing input", p.pos);
  return e;
}

namespace {

void print_rec(const ExprPtr& e, std::ostringstream& out) {
  switch (e->kind) {
    case Expr::Kind::Const: {
      out.precision(17);
      out << e->cval;
      break;
    }
    case Expr::Kind::Var:
      out << "x" << (e->var + 1);
      break;
    case Expr::Kind::Unary: {
      static const char* names[] = {"-", "sin", "cos", "exp", "log", "sqrt"};
      if (e->uop == UnOp::Neg) {
        out << "(-";
        print_rec(e->a, out);
        out << ")";
      } else {
        out << names[static_cast<int>(e->uop)] << "(";
        print_rec(e->a, out);
        out << ")";
      }
      break;
    }
    case Expr::Kind::Binary: {
      static const char* ops[] = {"+", "-", "*", "/"};
      out << "(";
      print_rec(e->a, out);
      out << ops[static_cast<int>(e->bop)];
      print_rec(e->b, out);
      out << ")";
      break;
    }
    case Expr::Kind::Pow: {
      out << "(";
      print_rec(e->a, out);
      out << ")^(";
      out.precision(17);
      out << e->exponent << ")";
      break;
    }
  }
}

}  // namespace

// Canonical form assumes coordinates named x1..xn; round-trip tests parse the
// result against that name list.
std::string print_expr(const ExprPtr& e) {
  std::ostringstream out;
  print_rec(e, out);
  return out.str();
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Const:
      return a->cval == b->cval;
    case Expr::Kind::Var:
      return a->var == b->var;
    case Expr::Kind::Unary:
      return a->uop == b->uop && structurally_equal(a->a, b->a);
    case Expr::Kind::Binary:
      return a->bop == b->bop && structurally_equal(a->a, b->a) && structurally_equal(a->b, b->b);
    case Expr::Kind::Pow:
      return a->exponent == b->exponent && structurally_equal(a->a, b->a);
  }
  return false;
}

namespace {

Jet eval_rec(const Expr& e, std::span<const double> p) {
  const int n = static_cast<int>(p.size());
  switch (e.kind) {
    case Expr::Kind::Const:
      return Jet::constant(e.cval, n);
    case Expr::Kind::Var:
      return Jet::variable(p[static_cast<size_t>(e.var)], n, e.var);
    case Expr::Kind::Unary: {
      Jet a = eval_rec(*e.a, p);
      switch (e.uop) {
        case UnOp::Neg: return -a;
        case UnOp::Sin: return sin(a);
        case UnOp::Cos: return cos(a);
        case UnOp::Exp: return exp(a);
        case UnOp::Log: return log(a);
        case UnOp::Sqrt: return sqrt(a);
      }
      break;
    }
    case Expr::Kind::Binary: {
      Jet a = eval_rec(*e.a, p);
      Jet b = eval_rec(*e.b, p);
      switch (e.bop) {
        case BinOp::Add: return a + b;
        case BinOp::Sub: return a - b;
        case BinOp::Mul: return a * b;
        case BinOp::Div:
          if (b.v == 0.0) fail(errc::domain_error, "division by zero");
          return a / b;
      }
      break;
    }
    case Expr::Kind::Pow:
      return pow(eval_rec(*e.a, p), e.exponent);
  }
  fail(errc::internal, "corrupt expression node");
}

}  // namespace

Jet eval_jet(const ExprPtr& e, std::span<const double> point) {
  if (static_cast<int>(point.size()) > kMaxDim)
    fail(errc::dimension_limit, "point dimension exceeds kMaxDim");
  try {
    return eval_rec(*e, point);
  } catch (const Error& err) {
    if (err.code() == errc::domain_error)
      fail_at(errc::domain_error, err.what(), std::vector<double>(point.begin(), point.end()));
    throw;
  }
}

double eval_value(const ExprPtr& e, std::span<const double> point) {
  return eval_jet(e, point).v;
}

}  // namespace gkv
