#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cvent::scenario {

class ExpressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Bindings = std::map<std::string, double, std::less<>>;

/// Arithmetic on numbers, `pi` and bound names: + - * / and parentheses,
/// e.g. "pi/2", "3*pi/4", "-theta + 0.1". Throws ExpressionError.
double evaluate_expression(std::string_view text, const Bindings& bindings = {});

}  // namespace cvent::scenario
