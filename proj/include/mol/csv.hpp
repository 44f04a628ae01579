#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mol {

// Minimal RFC-style CSV: fields containing comma/quote/newline are quoted,
// quotes doubled. Enough for the report and result files; no locale games.
std::string csvQuote(std::string_view field);
std::string csvLine(const std::vector<std::string>& fields);

// Splits one line into fields (handles quoted fields). Unterminated quotes
// consume the rest of the line.
std::vector<std::string> csvSplit(std::string_view line);

// Splits text into lines, dropping a trailing empty line.
std::vector<std::string> splitLines(std::string_view text);

} // namespace mol
