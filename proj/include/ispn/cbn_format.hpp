#pragma once

#include <iosfwd>
#include <string>

#include "ispn/scm.hpp"

namespace ispn {

// Parses the line-oriented CBN/SCM spec format:
//   vars N
//   var <name> binary | var <name> cont <lo> <hi>
//   edge <src> <dst>
//   cpt <var> <parent-state-index> <p0> <p1>     (lexicographic parent order)
//   mech <var> <equation-class> <params...> <noise-family> <noise-params...>
// '#' starts a comment. Throws ParseError with a line number.
Scm load_cbn(const std::string& path);
Scm parse_cbn(std::istream& in, const std::string& origin);

}  // namespace ispn
