#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mol/ast.hpp"
#include "mol/diagnostics.hpp"
#include "mol/index.hpp"

namespace mol {

// One line per call, tab separated: abstraction key, dispatched
// implementation, argNull bitstring over the reference positions
// ('1' = null was passed). A trailer line carries outcome/seed/totalCalls.
struct CallRecord {
    AbstractionKey abstraction;
    std::string implementation; // owner-qualified
    std::vector<uint8_t> arg_null; // reference positions only

    bool operator==(const CallRecord&) const = default;
};

enum class RunOutcome { Completed, NullDerefFailure, ExplicitFailure, StepLimit };

struct ExecutionTrace {
    std::vector<CallRecord> records;
    RunOutcome outcome = RunOutcome::Completed;
    SourcePos failure_location; // set for the two failure outcomes
    long total_calls = 0;
    uint64_t seed = 0;

    std::string serialize() const;
};

const char* runOutcomeName(RunOutcome o);

// Deterministic interpretation: every `opaque` is resolved by a SplitMix64
// stream seeded with `seed` (see rng.hpp), so identical inputs give
// byte-identical traces. The entry's required reference parameters are bound
// to fresh objects, optional ones to null, value parameters to scalars.
// Dereferencing null and `fail` halt with the corresponding outcome; each
// statement execution costs one step and the run halts with StepLimit when
// `step_limit` is exhausted. The entry invocation itself is not recorded;
// every `call` statement appends one record before the callee body runs.
ExecutionTrace runProgram(const Program& p, const ProgramIndex& index,
                          const std::string& entry, uint64_t seed,
                          long step_limit = 1'000'000);

// Per-abstraction merge of one or more traces: callCount sums, neverNull[i]
// stays true only if no record anywhere passed null at reference position i
// (nullable wins across implementations of the same abstraction).
struct DynamicProfile {
    struct PerAbstraction {
        long call_count = 0;
        std::vector<uint8_t> never_null; // reference positions only
        std::set<std::string> implementations_seen;

        bool operator==(const PerAbstraction&) const = default;
    };
    std::map<AbstractionKey, PerAbstraction> per_abstraction;

    std::string toCsv() const; // abstraction,ref_param_count,call_count,never_null_bitstring
    bool operator==(const DynamicProfile&) const = default;
};

DynamicProfile aggregateTrace(const std::vector<ExecutionTrace>& traces, const Program& p,
                              DiagnosticList& diags);

std::optional<DynamicProfile> parseProfileCsv(const std::string& text, DiagnosticList& diags);

// Deterministic dispatch: the most specific implementation for the first
// argument's runtime classifier (smallest ancestry distance to the owner's
// classifier), free-standing implementations least specific, declaration
// order as tiebreak; falls back to declaration order when nothing matches.
const MethodDecl* dispatchImplementation(const ProgramIndex& index, const AbstractionKey& key,
                                         const std::string* first_arg_classifier);

} // namespace mol
