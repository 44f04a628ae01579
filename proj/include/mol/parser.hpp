#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "mol/ast.hpp"
#include "mol/diagnostics.hpp"

namespace mol {

struct ParseResult {
    std::optional<Program> program; // engaged iff no error diagnostics
    DiagnosticList diagnostics;

    bool ok() const { return program.has_value(); }
};

// Parses and validates one MOL source. Never throws on bad input; every
// failure is a diagnostic with a position.
ParseResult parseProgram(std::string_view text, std::string file_name = "<input>");

// Parses several sources into one merged program (cross-file references are
// resolved after the merge), then validates.
ParseResult parseFiles(const std::vector<std::pair<std::string, std::string>>& named_sources);

// Syntax only, no validation; used by parseProgram and the tests.
ParseResult parseSyntax(std::string_view text, std::string file_name = "<input>");

} // namespace mol
