#pragma once

// Small expression language for series-valued coefficients in equation
// files: integer literals, variable names, + - * / ^ and parentheses.
// Division requires the denominator to satisfy invert's precondition and is
// rejected otherwise, with the offending position.

#include "mvfe/series.hpp"

#include <cstddef>
#include <string>

namespace mvfe {

struct SourcePos {
    std::size_t line = 1;
    std::size_t col = 1;
};

class parse_error : public error {
public:
    parse_error(const std::string& message, SourcePos pos)
        : error(message + " at line " + std::to_string(pos.line) + ", column " +
                std::to_string(pos.col)),
          pos_(pos) {}

    SourcePos pos() const { return pos_; }

private:
    SourcePos pos_;
};

// Parses `text` into a Series over `table`. Unknown variables, malformed
// syntax, and uninvertible denominators throw parse_error. `^` takes a
// nonnegative integer literal exponent and binds tighter than unary minus.
Series parse_expression(const std::string& text, VarTablePtr table);

}  // namespace mvfe
