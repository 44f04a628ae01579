#pragma once

#include "mol/ast.hpp"
#include "mol/diagnostics.hpp"

namespace mol {

// Checks every Program invariant: name resolution, acyclic classifier
// hierarchy, unique declarations, unique abstraction keys per scope,
// call-site resolvability (unique name+arity target, matching arity and
// argument kinds), reference-only deref/null tests, consistent variable
// kinds, and definite assignment on every path. Returns an empty list iff
// the program is well-formed.
DiagnosticList validateProgram(const Program& p);

} // namespace mol
