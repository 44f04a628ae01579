#include "mol/diagnostics.hpp"

#include <algorithm>
#include <sstream>

namespace mol {

bool hasErrors(const DiagnosticList& diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string formatDiagnostic(const Diagnostic& d) {
    std::ostringstream os;
    os << (d.severity == Severity::Error ? "ERROR" : "WARNING");
    os << ' ' << d.kind << ' ';
    os << (d.method.empty() ? d.pos.file : d.method);
    os << ':' << d.pos.line << ':' << d.pos.col << ' ' << d.message;
    return os.str();
}

std::string formatDiagnostics(const DiagnosticList& diags) {
    std::string out;
    for (const auto& d : diags) {
        out += formatDiagnostic(d);
        out += '\n';
    }
    return out;
}

void sortDiagnostics(DiagnosticList& diags) {
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        if (a.pos.file != b.pos.file) return a.pos.file < b.pos.file;
        if (a.pos.line != b.pos.line) return a.pos.line < b.pos.line;
        if (a.pos.col != b.pos.col) return a.pos.col < b.pos.col;
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.message < b.message;
    });
}

} // namespace mol
