#pragma once

#include <memory>
#include <span>
#include <string>

#include "confgeo/jet.hpp"

namespace confgeo {

enum class Func { Sin, Cos, Sinh, Cosh, Exp, Sqrt, Log };

const char* func_name(Func f);

/// Immutable arithmetic tree over parameters, constants, +,-,*,/, ^const and
/// the elementary functions. Shared subtrees are fine; nodes never mutate.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, Param, Add, Sub, Mul, Div, Neg, Pow, Call };
  Kind kind;
  double number = 0.0;   // Number
  int param = -1;        // Param
  double expo = 0.0;     // Pow
  Func fn = Func::Sin;   // Call
  ExprPtr a, b;
};

ExprPtr expr_num(double v);
ExprPtr expr_param(int index);
ExprPtr expr_add(ExprPtr a, ExprPtr b);
ExprPtr expr_sub(ExprPtr a, ExprPtr b);
ExprPtr expr_mul(ExprPtr a, ExprPtr b);
ExprPtr expr_div(ExprPtr a, ExprPtr b);
ExprPtr expr_neg(ExprPtr a);
ExprPtr expr_pow(ExprPtr a, double expo);
ExprPtr expr_call(Func fn, ExprPtr a);

Jet eval_jet(const ExprPtr& e, std::span<const Jet> params);
double eval_value(const ExprPtr& e, std::span<const double> params);

/// Prints with enough parentheses that parse(print(e)) reproduces e node for
/// node; numbers are emitted with 17 significant digits.
std::string print_expr(const ExprPtr& e, std::span<const std::string> param_names);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

/// Substitute params: param i becomes scale[i]*param_i + offset[i].
ExprPtr expr_affine_params(const ExprPtr& e, std::span<const double> scale,
                           std::span<const double> offset);

}  // namespace confgeo
