#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mol/ast.hpp"
#include "mol/diagnostics.hpp"
#include "mol/reporting.hpp"
#include "mol/static_analysis.hpp"

namespace mol {

// Seeded synthetic corpus. Shape fractions must sum to 1; loop_density is
// applied on top of compatible shapes. Entry points (one per project) and
// polymorphic families are emitted only when method_count >= 20, so tiny
// corpora consist of exactly the requested shape methods.
struct CorpusSpec {
    int method_count = 2000;
    int max_ref_params = 7;
    double frac_pd = 0.30;
    double frac_pp = 0.15;
    double frac_pn = 0.25;
    double frac_forward = 0.20;
    double frac_recursive = 0.10;
    double loop_density = 0.10;
    uint64_t seed = 42;
    int project_count = 7;
};

// Classifications known by construction: the templates are closed under the
// analysis rules, so the expected answers never come from running the
// analyzer. loop_free marks methods whose transitive call graph has neither
// loops nor recursion (the oracle-comparable subset).
struct GroundTruth {
    std::map<std::pair<AbstractionKey, int>, NullabilityClass> expected_class;
    CrossTab expected_crosstab; // definitely-required level, per implementation
    std::map<AbstractionKey, std::string> project_of;
    std::set<AbstractionKey> loop_free;
    std::vector<std::string> entry_points; // one per project, when emitted

    std::string classesToCsv() const; // abstraction,param_index,class
    std::string projectsToCsv() const; // abstraction,project
};

struct CorpusResult {
    Program program;
    GroundTruth truth;
    DiagnosticList diagnostics; // nonempty iff the spec is infeasible
};

CorpusResult generateCorpus(const CorpusSpec& spec);

} // namespace mol
