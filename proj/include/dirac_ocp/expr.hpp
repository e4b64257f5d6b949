// A small arithmetic expression evaluator for desired-state fields:
// variables x, y, z; operators + - * / ^ with parentheses; functions
// sin cos tan exp log sqrt abs atan sinh cosh tanh; constants pi, e.
#pragma once

#include <string>

#include "dirac_ocp/field.hpp"

namespace dirac_ocp {

// Compiles the expression into a ScalarField. Throws ParseError on syntax
// errors or unknown identifiers.
ScalarField compile_expression(const std::string& text);

}  // namespace dirac_ocp
