#pragma once

#include <string>

#include "mol/ast.hpp"

namespace mol {

// Canonical text for a program: two-space indent, one item per line,
// explicit req/opt qualifiers, comma-separated lists. Printing then parsing
// yields a structurally equal program, and the canonical form is a fixpoint
// of print-parse.
std::string printProgram(const Program& p);

} // namespace mol
