#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mol/ast.hpp"
#include "mol/interpreter.hpp"
#include "mol/static_analysis.hpp"

namespace mol {

// Grid of method counts: columns are reference-parameter counts (>= 1),
// rows are required-parameter counts (0..column). Column totals are kept
// consistent with the cells at all times.
struct CrossTab {
    std::map<std::pair<int, int>, long> cells; // (ref_params, required) -> count
    std::map<int, long> column_totals;

    void add(int ref_params, int required, long count = 1);
    long grandTotal() const;
    int maxArity() const;
    bool wellFormed() const; // column conservation, bounds, non-negativity

    bool operator==(const CrossTab&) const = default;
};

enum class StaticTabLevel { DefiniteOnly, DefiniteOrPossible };

// One increment per method implementation: its reference-parameter count and
// how many of those are DefinitelyRequired (or at least PossiblyRequired for
// the DefiniteOrPossible variant). Methods without reference parameters do
// not appear.
CrossTab buildStaticCrossTab(const StaticResult& r, const Program& p, StaticTabLevel level);

// One increment per called abstraction: required = number of true neverNull
// flags.
CrossTab buildDynamicCrossTab(const DynamicProfile& d);

enum class ShareKind { SingleParamShare, TrueRecombShare };

// SingleParamShare: single-reference-parameter methods over all methods in
// the tab. TrueRecombShare: among methods with >= 2 reference parameters,
// those with >= 2 required. Fractions in [0,1]; nullopt when the denominator
// is zero.
std::optional<double> recombinationShare(const CrossTab& t, ShareKind kind);

// Methods tolerating at least one null parameter, over all methods.
std::optional<double> optionalShare(const CrossTab& t);

struct ProjectEntry {
    std::string project;
    long size = 0;
    double percentage = 0; // 0..100
};

struct ProjectSummary {
    std::vector<ProjectEntry> per_project;
    double mean = 0;                    // of the percentages, unweighted
    std::optional<double> sample_stddev; // n-1 denominator; nullopt if n < 2
};

ProjectSummary projectStats(const std::vector<ProjectEntry>& values);

enum class ReportFormat { Csv, StructuredText };

// Deterministic. CSV rows are ordered by (column, row); the structured text
// renders the percentage grid with a final totals row (column totals, then
// the grand total). Percentages are rounded to integers only here.
std::string emitCrossTab(const CrossTab& t, ReportFormat format);
std::string emitProjectSummary(const ProjectSummary& s, ReportFormat format);

} // namespace mol
