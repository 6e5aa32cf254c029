#pragma once

#include <map>
#include <string>
#include <string_view>

#include "kd/multipoly.hpp"

namespace kd {

// Parses polynomial expressions: + - * ^ ( ), integer literals and p/q
// rational literals, identifiers from `slots`. Juxtaposition is rejected and
// '/' is only legal inside a rational literal. `line` and `column` locate
// the start of `text` for error messages.
MultiPoly parse_polynomial(std::string_view text, const std::map<std::string, int>& slots, int nvars,
                           int line = 1, int column = 1);

// Canonical text over the default names x1..xn, h.
MultiPoly parse_canonical(std::string_view text, int nvars);

}  // namespace kd
