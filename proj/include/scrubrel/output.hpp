#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace scrubrel {

inline constexpr const char* kSchemaVersion = "1";

using Cell = std::variant<std::string, double, std::int64_t>;

/// One command's output: the resolved parameters it ran with, named
/// columns (units spelled out in the names), and rows of cells.
struct OutputRecord {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params; ///< resolved, ordered
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> notes;

    void add_param(std::string key, std::string value) {
        params.emplace_back(std::move(key), std::move(value));
    }
};

/// Shortest decimal string that round-trips the double ('.' separator,
/// locale independent).
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_cell(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    return std::to_string(std::get<std::int64_t>(c));
}

/// CSV with `# key=value` header lines for the metadata.
inline std::string to_csv(const OutputRecord& rec) {
    std::string out;
    out += "# schema_version=";
    out += kSchemaVersion;
    out += "\n# command=" + rec.command + "\n";
    for (const auto& [k, v] : rec.params) out += "# " + k + "=" + v + "\n";
    for (const auto& note : rec.notes) out += "# note: " + note + "\n";
    for (std::size_t i = 0; i < rec.columns.size(); ++i) {
        if (i) out += ',';
        out += rec.columns[i];
    }
    out += '\n';
    for (const auto& row : rec.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

inline std::string to_json(const OutputRecord& rec) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = rec.command;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : rec.params) params[k] = v;
    j["params"] = std::move(params);
    if (!rec.notes.empty()) j["notes"] = rec.notes;
    j["columns"] = rec.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : rec.rows) {
        auto jr = nlohmann::ordered_json::array();
        for (const auto& cell : row) {
            if (const auto* s = std::get_if<std::string>(&cell))
                jr.push_back(*s);
            else if (const auto* d = std::get_if<double>(&cell))
                jr.push_back(*d);
            else
                jr.push_back(std::get<std::int64_t>(cell));
        }
        rows.push_back(std::move(jr));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

inline std::string serialize(const OutputRecord& rec, bool json) {
    return json ? to_json(rec) : to_csv(rec);
}

} // namespace scrubrel
