#pragma once

// Tidy long-format CSV helpers shared by the CLI commands. Numbers are
// written with %.17g so files round-trip exactly and reruns are
// byte-identical.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sppdon {

using CsvCell = std::variant<double, long long, std::string>;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        throw std::invalid_argument("csv: unknown column '" + name + "'");
    }
};

inline std::string csv_format(const CsvCell& cell) {
    if (std::holds_alternative<std::string>(cell)) return std::get<std::string>(cell);
    char buf[40];
    if (std::holds_alternative<long long>(cell))
        std::snprintf(buf, sizeof buf, "%lld", std::get<long long>(cell));
    else
        std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(cell));
    return buf;
}

inline void write_csv(std::ostream& out, const std::vector<std::string>& header,
                      const std::vector<std::vector<CsvCell>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << csv_format(row[i]);
        out << "\n";
    }
}

inline void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                           const std::vector<std::vector<CsvCell>>& rows) {
    std::ofstream out(path, std::ios::binary);  // binary: no CRLF translation
    if (!out) throw std::runtime_error("cannot write " + path);
    write_csv(out, header, rows);
}

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (ss.eof() && !line.empty() && line.back() == ',') cells.push_back("");
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

inline double csv_to_double(const std::string& s) {
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("csv: cell '" + s + "' is not numeric");
    }
}

}  // namespace sppdon
