#include "confgeo/expr.hpp"

#include <cmath>
#include <cstdio>

namespace confgeo {

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Exp: return "exp";
    case Func::Sqrt: return "sqrt";
    case Func::Log: return "log";
  }
  return "?";
}

namespace {
ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
}  // namespace

ExprPtr expr_num(double v) { return node({.kind = Expr::Kind::Number, .number = v}); }
ExprPtr expr_param(int i) { return node({.kind = Expr::Kind::Param, .param = i}); }
ExprPtr expr_add(ExprPtr a, ExprPtr b) { return node({.kind = Expr::Kind::Add, .a = std::move(a), .b = std::move(b)}); }
ExprPtr expr_sub(ExprPtr a, ExprPtr b) { return node({.kind = Expr::Kind::Sub, .a = std::move(a), .b = std::move(b)}); }
ExprPtr expr_mul(ExprPtr a, ExprPtr b) { return node({.kind = Expr::Kind::Mul, .a = std::move(a), .b = std::move(b)}); }
ExprPtr expr_div(ExprPtr a, ExprPtr b) { return node({.kind = Expr::Kind::Div, .a = std::move(a), .b = std::move(b)}); }
ExprPtr expr_neg(ExprPtr a) { return node({.kind = Expr::Kind::Neg, .a = std::move(a)}); }
ExprPtr expr_pow(ExprPtr a, double expo) { return node({.kind = Expr::Kind::Pow, .expo = expo, .a = std::move(a)}); }
ExprPtr expr_call(Func fn, ExprPtr a) { return node({.kind = Expr::Kind::Call, .fn = fn, .a = std::move(a)}); }

Jet eval_jet(const ExprPtr& e, std::span<const Jet> params) {
  if (!e) throw DomainError("eval: null expression");
  switch (e->kind) {
    case Expr::Kind::Number:
      return Jet::constant(e->number, params.empty() ? 1 : params[0].nvars());
    case Expr::Kind::Param:
      if (e->param < 0 || e->param >= static_cast<int>(params.size()))
        throw DomainError("eval: parameter index out of range");
      return params[e->param];
    case Expr::Kind::Add: return eval_jet(e->a, params) + eval_jet(e->b, params);
    case Expr::Kind::Sub: return eval_jet(e->a, params) - eval_jet(e->b, params);
    case Expr::Kind::Mul: return eval_jet(e->a, params) * eval_jet(e->b, params);
    case Expr::Kind::Div: return eval_jet(e->a, params) / eval_jet(e->b, params);
    case Expr::Kind::Neg: return -eval_jet(e->a, params);
    case Expr::Kind::Pow: return pow(eval_jet(e->a, params), e->expo);
    case Expr::Kind::Call: {
      Jet x = eval_jet(e->a, params);
      switch (e->fn) {
        case Func::Sin: return sin(x);
        case Func::Cos: return cos(x);
        case Func::Sinh: return sinh(x);
        case Func::Cosh: return cosh(x);
        case Func::Exp: return exp(x);
        case Func::Sqrt: return sqrt(x);
        case Func::Log: return log(x);
      }
    }
  }
  throw DomainError("eval: bad node");
}

double eval_value(const ExprPtr& e, std::span<const double> params) {
  switch (e->kind) {
    case Expr::Kind::Number: return e->number;
    case Expr::Kind::Param:
      if (e->param < 0 || e->param >= static_cast<int>(params.size()))
        throw DomainError("eval: parameter index out of range");
      return params[e->param];
    case Expr::Kind::Add: return eval_value(e->a, params) + eval_value(e->b, params);
    case Expr::Kind::Sub: return eval_value(e->a, params) - eval_value(e->b, params);
    case Expr::Kind::Mul: return eval_value(e->a, params) * eval_value(e->b, params);
    case Expr::Kind::Div: return eval_value(e->a, params) / eval_value(e->b, params);
    case Expr::Kind::Neg: return -eval_value(e->a, params);
    case Expr::Kind::Pow: return std::pow(eval_value(e->a, params), e->expo);
    case Expr::Kind::Call: {
      double x = eval_value(e->a, params);
      switch (e->fn) {
        case Func::Sin: return std::sin(x);
        case Func::Cos: return std::cos(x);
        case Func::Sinh: return std::sinh(x);
        case Func::Cosh: return std::cosh(x);
        case Func::Exp: return std::exp(x);
        case Func::Sqrt: return std::sqrt(x);
        case Func::Log: return std::log(x);
      }
    }
  }
  throw DomainError("eval: bad node");
}

namespace {

std::string fmt_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Precedence levels: Add/Sub = 1, Mul/Div = 2, Neg = 3, Pow = 4, atoms = 5.
int prec(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
  }
}

void print_rec(const ExprPtr& e, std::span<const std::string> names, std::string& out,
               int parent_prec) {
  // Negative literals print like a unary minus so the text reparses.
  const bool neg_num = e->kind == Expr::Kind::Number && std::signbit(e->number);
  const int p = neg_num ? 3 : prec(e);
  const bool parens = p < parent_prec;
  if (parens) out += "(";
  switch (e->kind) {
    case Expr::Kind::Number:
      if (neg_num) {
        out += "-";
        out += fmt_number(-e->number);
      } else {
        out += fmt_number(e->number);
      }
      break;
    case Expr::Kind::Param:
      out += (e->param < static_cast<int>(names.size())) ? names[e->param]
                                                         : "u" + std::to_string(e->param + 1);
      break;
    case Expr::Kind::Add:
      print_rec(e->a, names, out, 1);
      out += " + ";
      print_rec(e->b, names, out, 2);  // right child binds tighter to keep a-b+c shapes
      break;
    case Expr::Kind::Sub:
      print_rec(e->a, names, out, 1);
      out += " - ";
      print_rec(e->b, names, out, 2);
      break;
    case Expr::Kind::Mul:
      print_rec(e->a, names, out, 2);
      out += "*";
      print_rec(e->b, names, out, 3);
      break;
    case Expr::Kind::Div:
      print_rec(e->a, names, out, 2);
      out += "/";
      print_rec(e->b, names, out, 3);
      break;
    case Expr::Kind::Neg:
      out += "-";
      print_rec(e->a, names, out, 4);
      break;
    case Expr::Kind::Pow:
      print_rec(e->a, names, out, 5);
      out += "^";
      out += fmt_number(e->expo);
      break;
    case Expr::Kind::Call:
      out += func_name(e->fn);
      out += "(";
      print_rec(e->a, names, out, 0);
      out += ")";
      break;
  }
  if (parens) out += ")";
}

}  // namespace

std::string print_expr(const ExprPtr& e, std::span<const std::string> param_names) {
  std::string out;
  print_rec(e, param_names, out, 0);
  return out;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Number: return a->number == b->number;
    case Expr::Kind::Param: return a->param == b->param;
    case Expr::Kind::Pow: return a->expo == b->expo && expr_equal(a->a, b->a);
    case Expr::Kind::Neg:
    case Expr::Kind::Call:
      return (a->kind != Expr::Kind::Call || a->fn == b->fn) && expr_equal(a->a, b->a);
    default:
      return expr_equal(a->a, b->a) && expr_equal(a->b, b->b);
  }
}

ExprPtr expr_affine_params(const ExprPtr& e, std::span<const double> scale,
                           std::span<const double> offset) {
  switch (e->kind) {
    case Expr::Kind::Number: return e;
    case Expr::Kind::Param: {
      const int i = e->param;
      ExprPtr scaled = expr_mul(expr_num(scale[i]), expr_param(i));
      if (offset[i] == 0.0) return scaled;
      return expr_add(scaled, expr_num(offset[i]));
    }
    case Expr::Kind::Add:
      return expr_add(expr_affine_params(e->a, scale, offset), expr_affine_params(e->b, scale, offset));
    case Expr::Kind::Sub:
      return expr_sub(expr_affine_params(e->a, scale, offset), expr_affine_params(e->b, scale, offset));
    case Expr::Kind::Mul:
      return expr_mul(expr_affine_params(e->a, scale, offset), expr_affine_params(e->b, scale, offset));
    case Expr::Kind::Div:
      return expr_div(expr_affine_params(e->a, scale, offset), expr_affine_params(e->b, scale, offset));
    case Expr::Kind::Neg: return expr_neg(expr_affine_params(e->a, scale, offset));
    case Expr::Kind::Pow: return expr_pow(expr_affine_params(e->a, scale, offset), e->expo);
    case Expr::Kind::Call: return expr_call(e->fn, expr_affine_params(e->a, scale, offset));
  }
  throw DomainError("expr_affine_params: bad node");
}

}  // namespace confgeo
