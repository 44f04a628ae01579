#include "mol/reporting.hpp"

#include <cassert>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "mol/csv.hpp"

namespace mol {

void CrossTab::add(int ref_params, int required, long count) {
    assert(ref_params >= 1 && required >= 0 && required <= ref_params && count >= 0);
    cells[{ref_params, required}] += count;
    column_totals[ref_params] += count;
}

long CrossTab::grandTotal() const {
    long total = 0;
    for (const auto& [col, n] : column_totals) total += n;
    return total;
}

int CrossTab::maxArity() const {
    int m = 0;
    for (const auto& [col, n] : column_totals) {
        (void)n;
        m = std::max(m, col);
    }
    return m;
}

bool CrossTab::wellFormed() const {
    std::map<int, long> sums;
    for (const auto& [cell, n] : cells) {
        auto [col, row] = cell;
        if (col < 1 || row < 0 || row > col || n < 0) return false;
        sums[col] += n;
    }
    for (const auto& [col, total] : column_totals) {
        if (total < 0) return false;
        auto it = sums.find(col);
        long cell_sum = it == sums.end() ? 0 : it->second;
        if (cell_sum != total) return false;
    }
    for (const auto& [col, sum] : sums) {
        (void)sum;
        if (!column_totals.count(col)) return false;
    }
    return true;
}

CrossTab buildStaticCrossTab(const StaticResult& r, const Program& p, StaticTabLevel level) {
    CrossTab tab;
    for (const auto& m : p.methods) {
        AbstractionKey key = m.key();
        auto ref_positions = key.refPositions();
        if (ref_positions.empty()) continue;
        int required = 0;
        for (int pos : ref_positions) {
            auto it = r.classes.find({key, pos});
            assert(it != r.classes.end() && "result must cover the program");
            bool counts = level == StaticTabLevel::DefiniteOnly
                              ? it->second == NullabilityClass::DefinitelyRequired
                              : it->second != NullabilityClass::NotLocallyRequired;
            if (counts) ++required;
        }
        tab.add(int(ref_positions.size()), required);
    }
    return tab;
}

CrossTab buildDynamicCrossTab(const DynamicProfile& d) {
    CrossTab tab;
    for (const auto& [key, entry] : d.per_abstraction) {
        int ref_params = key.refParamCount();
        if (ref_params == 0) continue;
        int required = 0;
        for (uint8_t flag : entry.never_null)
            if (flag) ++required;
        tab.add(ref_params, required);
    }
    return tab;
}

std::optional<double> recombinationShare(const CrossTab& t, ShareKind kind) {
    if (kind == ShareKind::SingleParamShare) {
        long total = t.grandTotal();
        if (total == 0) return std::nullopt;
        auto it = t.column_totals.find(1);
        long single = it == t.column_totals.end() ? 0 : it->second;
        return double(single) / double(total);
    }
    long multi = 0, recombinant = 0;
    for (const auto& [col, n] : t.column_totals)
        if (col >= 2) multi += n;
    for (const auto& [cell, n] : t.cells) {
        auto [col, row] = cell;
        if (col >= 2 && row >= 2) recombinant += n;
    }
    if (multi == 0) return std::nullopt;
    return double(recombinant) / double(multi);
}

std::optional<double> optionalShare(const CrossTab& t) {
    long total = t.grandTotal();
    if (total == 0) return std::nullopt;
    long all_required = 0;
    for (const auto& [cell, n] : t.cells) {
        auto [col, row] = cell;
        if (row == col) all_required += n;
    }
    return double(total - all_required) / double(total);
}

ProjectSummary projectStats(const std::vector<ProjectEntry>& values) {
    ProjectSummary s;
    s.per_project = values;
    if (values.empty()) return s;
    double sum = 0;
    for (const auto& v : values) sum += v.percentage;
    s.mean = sum / double(values.size());
    if (values.size() >= 2) {
        double sq = 0;
        for (const auto& v : values) {
            double d = v.percentage - s.mean;
            sq += d * d;
        }
        s.sample_stddev = std::sqrt(sq / double(values.size() - 1));
    }
    return s;
}

namespace {

std::string pad(const std::string& text, size_t width) {
    if (text.size() >= width) return text;
    return std::string(width - text.size(), ' ') + text;
}

} // namespace

std::string emitCrossTab(const CrossTab& t, ReportFormat format) {
    if (format == ReportFormat::Csv) {
        std::string out = "ref_params,required,count\n";
        for (const auto& [cell, n] : t.cells)
            out += csvLine({std::to_string(cell.first), std::to_string(cell.second),
                            std::to_string(n)}) +
                   "\n";
        return out;
    }

    int max_arity = t.maxArity();
    std::ostringstream os;
    const size_t w = 7;
    os << pad("required", 9);
    for (int col = 1; col <= max_arity; ++col) os << pad(std::to_string(col), w);
    os << '\n';
    for (int row = 0; row <= max_arity; ++row) {
        os << pad(std::to_string(row), 9);
        for (int col = 1; col <= max_arity; ++col) {
            if (row > col) {
                os << pad("", w);
                continue;
            }
            auto total_it = t.column_totals.find(col);
            long total = total_it == t.column_totals.end() ? 0 : total_it->second;
            auto it = t.cells.find({col, row});
            long n = it == t.cells.end() ? 0 : it->second;
            if (total == 0) {
                os << pad("-", w);
            } else {
                long pct = std::lround(100.0 * double(n) / double(total));
                os << pad(std::to_string(pct) + "%", w);
            }
        }
        os << '\n';
    }
    os << pad("total", 9);
    for (int col = 1; col <= max_arity; ++col) {
        auto it = t.column_totals.find(col);
        os << pad(std::to_string(it == t.column_totals.end() ? 0 : it->second), w);
    }
    os << pad(std::to_string(t.grandTotal()), w) << '\n';
    return os.str();
}

std::string emitProjectSummary(const ProjectSummary& s, ReportFormat format) {
    if (format == ReportFormat::Csv) {
        std::string out = "project,size,percentage\n";
        for (const auto& e : s.per_project)
            out += csvLine({e.project, std::to_string(e.size),
                            std::to_string(std::lround(e.percentage))}) +
                   "\n";
        out += csvLine({"mean", "", std::to_string(std::lround(s.mean))}) + "\n";
        out += csvLine({"sample_stddev", "",
                        s.sample_stddev ? std::to_string(std::lround(*s.sample_stddev))
                                        : std::string("undefined")}) +
               "\n";
        return out;
    }
    std::ostringstream os;
    os << pad("project", 12) << pad("size", 8) << pad("percentage", 12) << '\n';
    for (const auto& e : s.per_project)
        os << pad(e.project, 12) << pad(std::to_string(e.size), 8)
           << pad(std::to_string(std::lround(e.percentage)) + "%", 12) << '\n';
    os << pad("mean", 12) << pad("", 8) << pad(std::to_string(std::lround(s.mean)) + "%", 12)
       << '\n';
    os << pad("stddev", 12) << pad("", 8)
       << pad(s.sample_stddev ? std::to_string(std::lround(*s.sample_stddev)) + "%"
                              : std::string("undefined"),
              12)
       << '\n';
    return os.str();
}

} // namespace mol
