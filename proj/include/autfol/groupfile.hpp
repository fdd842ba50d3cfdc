#pragma once

#include <string>

#include "autfol/group.hpp"

namespace autfol {

// Group definition files: either line-oriented key=value text
//
//   p=3
//   exponents=1,2
//
// or a JSON object {"p": 3, "exponents": [1, 2]}.  Both forms are accepted;
// the leading non-space character decides.
GroupSpec parse_group_text(const std::string& text);
GroupSpec load_group_file(const std::string& path);

} // namespace autfol
