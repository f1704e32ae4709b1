#pragma once

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wormhole/common.hpp"

namespace wormhole::io {

/// 17 significant digits, locale-independent: round-trips every double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

using Cell = std::variant<double, long long, std::string, bool>;

inline std::string cell_to_string(const Cell& c) {
    if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
    if (std::holds_alternative<long long>(c))
        return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<bool>(c)) return std::get<bool>(c) ? "true" : "false";
    return std::get<std::string>(c);
}

inline nlohmann::json cell_to_json(const Cell& c) {
    if (std::holds_alternative<double>(c)) return std::get<double>(c);
    if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
    if (std::holds_alternative<bool>(c)) return std::get<bool>(c);
    return std::get<std::string>(c);
}

/// Reproducibility header carried by every output file: the exact run
/// configuration plus tool version and the units convention. No timestamps;
/// identical configuration produces byte-identical files.
struct OutputMeta {
    std::string tool;
    std::vector<std::pair<std::string, std::string>> config;
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline void write_csv(std::ostream& os, const OutputMeta& meta,
                      const std::vector<Table>& tables) {
    os << "# tool: " << meta.tool << "\n";
    os << "# version: " << kVersion << "\n";
    os << "# units: " << kUnitsNote << "\n";
    for (const auto& [key, value] : meta.config)
        os << "# config: " << key << " = " << value << "\n";
    bool first = true;
    for (const auto& t : tables) {
        if (!first) os << "#\n";
        first = false;
        os << "# table: " << t.name << "\n";
        for (std::size_t c = 0; c < t.columns.size(); ++c)
            os << (c ? "," : "") << t.columns[c];
        os << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                os << (c ? "," : "") << cell_to_string(row[c]);
            os << "\n";
        }
    }
}

inline void write_json(std::ostream& os, const OutputMeta& meta,
                       const std::vector<Table>& tables) {
    nlohmann::json j;
    j["tool"] = meta.tool;
    j["version"] = kVersion;
    j["units"] = kUnitsNote;
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [key, value] : meta.config) cfg[key] = value;
    j["config"] = cfg;
    j["tables"] = nlohmann::json::array();
    for (const auto& t : tables) {
        nlohmann::json jt;
        jt["name"] = t.name;
        jt["columns"] = t.columns;
        auto rows = nlohmann::json::array();
        for (const auto& row : t.rows) {
            auto jr = nlohmann::json::array();
            for (const auto& cell : row) jr.push_back(cell_to_json(cell));
            rows.push_back(std::move(jr));
        }
        jt["rows"] = std::move(rows);
        j["tables"].push_back(std::move(jt));
    }
    os << j.dump(2) << "\n";
}

}  // namespace wormhole::io
