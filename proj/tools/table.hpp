#pragma once

// Row-oriented output with a fixed column schema, written as CSV (header
// row, RFC 4180 quoting, LF line ends) or as a JSON array of objects.

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace rotkit::cli {

/// Text cells carry exact values ("p/q") and labels; they stay strings in
/// JSON. Doubles print with 17 significant digits.
using Cell = std::variant<std::monostate, std::string, double, std::int64_t, bool>;

enum class Format { csv, json };

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
    void write(std::ostream& os, Format fmt) const;
};

std::string format_cell(const Cell& c);

} // namespace rotkit::cli
