#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mol/ast.hpp"
#include "mol/diagnostics.hpp"
#include "mol/index.hpp"

namespace mol {

// Three-valued classification per (method abstraction, reference parameter).
// Fixpoint ascent uses the chain NotLocally < Possibly < Definitely with
// join = maximum.
enum class NullabilityClass {
    NotLocallyRequired = 0,
    PossiblyRequired = 1,
    DefinitelyRequired = 2,
};

NullabilityClass chainJoin(NullabilityClass a, NullabilityClass b);
const char* nullabilityClassName(NullabilityClass c); // snake_case, stable
std::optional<NullabilityClass> nullabilityClassFromName(const std::string& name);

// One event observed on an execution path under the hypothesis "the tracked
// parameter entered null": either the method fails locally, or the null
// entry value is passed to `callee` at `position`.
struct CalleeUse {
    AbstractionKey callee;
    int position = 0;
    auto operator<=>(const CalleeUse&) const = default;
};

struct PathSummary {
    bool local_fail = false;
    std::set<CalleeUse> uses;
    auto operator<=>(const PathSummary&) const = default;
};

struct PathSet {
    std::set<PathSummary> paths; // nonempty for every summarized parameter
    bool operator==(const PathSet&) const = default;
};

// Degraded summary when path enumeration exceeds the budget. `local` is
// DefinitelyRequired only when the method fails before its first branch;
// otherwise it is PossiblyRequired when some enumerated path failed locally,
// else NotLocallyRequired. Dependencies lift the result to at most
// PossiblyRequired, keeping the lower-bound direction.
struct FallbackSummary {
    NullabilityClass local = NullabilityClass::NotLocallyRequired;
    std::set<std::pair<AbstractionKey, int>> dependencies;
    bool operator==(const FallbackSummary&) const = default;
};

using ParamSummary = std::variant<PathSet, FallbackSummary>;

// The once-derived per-method summary used by every fixpoint sweep.
struct MethodTransfer {
    AbstractionKey method;
    std::string implementation; // owner-qualified name
    std::map<int, ParamSummary> per_param; // keyed by full parameter index
    bool budget_exceeded = false;

    std::string str() const; // deterministic, for tests and debugging
};

struct AnalysisOptions {
    int loop_bound = 1;
    long max_paths = 4096;
};

using Environment = std::map<std::pair<AbstractionKey, int>, NullabilityClass>;

// Enumerates the executions of `m` under the hypothesis that one reference
// parameter entered null: null tests on tracked values are deterministic,
// opaque conditions fork, loop bodies contribute 0..loop_bound copies (the
// exit is always available), and a path ends at a local failure (deref of a
// null value, or fail). Exceeding max_paths degrades that parameter to a
// FallbackSummary.
MethodTransfer summarizeMethod(const MethodDecl& m, const ProgramIndex& index,
                               const AnalysisOptions& opts);

// Pure table lookup: a path FAILs if it fails locally or uses a callee
// position whose class is DefinitelyRequired; otherwise it is MAYBE when it
// uses a PossiblyRequired position, else OK. All-FAIL -> Definitely,
// all-OK -> NotLocally, otherwise Possibly. Every callee position used by
// the transfer must be present in env.
std::map<int, NullabilityClass> evaluateTransfer(const MethodTransfer& t,
                                                 const Environment& env);

struct StaticResult {
    std::map<std::pair<AbstractionKey, int>, NullabilityClass> classes;
    int iterations = 0; // sweeps, including the final confirming one
    std::set<AbstractionKey> path_budget_exceeded;
    AnalysisOptions options;

    std::string toCsv() const;
    std::string toText() const;
};

// Least fixpoint from the all-NotLocally bottom, Jacobi sweeps in method
// declaration order. Requires a validated program.
StaticResult fixpointAnalyze(const Program& p, const ProgramIndex& index,
                             const AnalysisOptions& opts = {});

// Test hook: same result plus the environment after every sweep, with the
// per-sweep evaluation order given by `order` (indices into p.methods).
StaticResult fixpointAnalyzeOrdered(const Program& p, const ProgramIndex& index,
                                    const AnalysisOptions& opts,
                                    const std::vector<int>& order,
                                    std::vector<Environment>* history = nullptr);

// Parses StaticResult::toCsv output; diagnostics on malformed input.
std::optional<StaticResult> parseStaticResultCsv(const std::string& text,
                                                 DiagnosticList& diags);

} // namespace mol
