#pragma once

#include <optional>

#include "mol/ast.hpp"
#include "mol/index.hpp"
#include "mol/static_analysis.hpp"

namespace mol {

struct OracleOptions {
    int loop_bound = 1;
    long budget = 4'000'000; // statement executions across all enumerated runs
};

struct OracleResult {
    bool feasible = false; // false: enumeration budget exceeded
    NullabilityClass cls = NullabilityClass::NotLocallyRequired;
};

// Ground truth at desk scale, independent of the summary/fixpoint machinery:
// exhaustively enumerates whole-program executions starting at `method` with
// `param_index` bound to null and every other reference parameter bound to a
// fresh object. Opaque conditions take both outcomes, dispatch takes every
// implementation of the callee abstraction, loops contribute 0..loop_bound
// body copies with the exit always available, and a call to an abstraction
// that is already active is skipped (see README on recursion bounding).
// DefinitelyRequired iff every execution fails, NotLocallyRequired iff none
// does, PossiblyRequired otherwise.
OracleResult oracleClassify(const Program& p, const ProgramIndex& index,
                            const AbstractionKey& method, int param_index,
                            const OracleOptions& opts = {});

} // namespace mol
