#ifndef GKV_EXPR_HPP
#define GKV_EXPR_HPP

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gkv/jet.hpp"

namespace gkv {

// Immutable expression tree over named coordinates and real literals.
// Supported: + - * /, unary minus, sin cos exp log sqrt, ^ with a constant
// exponent. Named parameters are substituted with their values at parse time.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class UnOp { Neg, Sin, Cos, Exp, Log, Sqrt };
enum class BinOp { Add, Sub, Mul, Div };

struct Expr {
  enum class Kind { Const, Var, Unary, Binary, Pow };

  Kind kind;
  double cval = 0;     // Const
  int var = -1;        // Var (coordinate index)
  UnOp uop{};          // Unary
  BinOp bop{};         // Binary
  ExprPtr a, b;        // children
  double exponent = 0; // Pow

  static ExprPtr constant(double v);
  static ExprPtr variable(int index);
  static ExprPtr unary(UnOp op, ExprPtr child);
  static ExprPtr binary(BinOp op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr pow(ExprPtr base, double exponent);
};

// Thrown with the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(std::string msg, size_t offset)
      : Error(errc::parse_error, msg + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

ExprPtr parse_expr(const std::string& text, const std::vector<std::string>& coords,
                   const std::map<std::string, double>& params = {});

std::string print_expr(const ExprPtr& e);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

// Value and exact first partials at a point. Throws Error(domain_error) with
// the point attached when a primitive is evaluated outside its domain.
Jet eval_jet(const ExprPtr& e, std::span<const double> point);

double eval_value(const ExprPtr& e, std::span<const double> point);

}  // namespace gkv

#endif
