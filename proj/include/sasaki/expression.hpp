#pragma once

#include <memory>
#include <string>

#include "sasaki/metric.hpp"

namespace sasaki {

struct ExprNode;

/// Arithmetic expression in the variable x.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' unary)?
///   primary := number | 'x' | '(' expr ')' | fn '(' expr ')' | 'pow' '(' expr ',' expr ')'
///   fn      := sin | cos | exp | log
class Expression {
 public:
  /// Throws ConfigError with the offending position on malformed input.
  static Expression parse(const std::string& text);

  double operator()(double x) const;
  const std::string& text() const { return text_; }

  /// Samples onto the grid; throws DomainError on a non-finite value.
  BasicPotential sample(const GridPtr& grid) const;

 private:
  std::string text_;
  std::shared_ptr<const ExprNode> root_;
};

}  // namespace sasaki
