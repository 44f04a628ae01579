#pragma once

#include <string>
#include <vector>

namespace mol {

struct SourcePos {
    std::string file;
    int line = 0; // 1-based; 0 means unknown
    int col = 0;
};

enum class Severity { Error, Warning };

// Diagnostics are values, never exceptions. `kind` is a stable
// machine-readable tag; `method` is set for method-scoped findings.
struct Diagnostic {
    Severity severity = Severity::Error;
    std::string kind;
    SourcePos pos;
    std::string method;
    std::string message;
};

using DiagnosticList = std::vector<Diagnostic>;

bool hasErrors(const DiagnosticList& diags);

// "SEVERITY kind scope:line:col message", scope = method when set, else file.
std::string formatDiagnostic(const Diagnostic& d);
std::string formatDiagnostics(const DiagnosticList& diags);

// Deterministic order: (file, line, col, kind, message).
void sortDiagnostics(DiagnosticList& diags);

} // namespace mol
