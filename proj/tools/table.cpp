#include "table.hpp"

#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rotkit::cli {

namespace {

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

} // namespace

std::string format_cell(const Cell& c) {
    struct {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(double d) const {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", d);
            return buf;
        }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    } visitor;
    return std::visit(visitor, c);
}

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw std::logic_error("row width does not match the column schema");
    }
    rows.push_back(std::move(row));
}

void Table::write(std::ostream& os, Format fmt) const {
    if (fmt == Format::csv) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            os << (i ? "," : "") << csv_quote(columns[i]);
        }
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                os << (i ? "," : "") << csv_quote(format_cell(row[i]));
            }
            os << "\n";
        }
        return;
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            nlohmann::ordered_json v;
            std::visit(
                [&](const auto& x) {
                    using X = std::decay_t<decltype(x)>;
                    if constexpr (std::is_same_v<X, std::monostate>) {
                        v = nullptr;
                    } else {
                        v = x;
                    }
                },
                row[i]);
            obj[columns[i]] = std::move(v);
        }
        arr.push_back(std::move(obj));
    }
    os << arr.dump(2) << "\n";
}

} // namespace rotkit::cli
