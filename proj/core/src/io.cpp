#include "wavemap/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wavemap/errors.hpp"

namespace wavemap {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void Table::add_row(const std::vector<double>& row) {
    if (row.size() != columns.size())
        throw DimensionError("Table::add_row: row width does not match the column count");
    rows.push_back(row);
}

void write_table(const std::string& path, const Table& table) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    for (const auto& [k, v] : table.metadata) out << "# " << k << " = " << v << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out << ",";
        out << table.columns[c];
    }
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ",";
            out << format_g17(row[c]);
        }
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    Table t;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::size_t eq = line.find('=');
            if (eq != std::string::npos) {
                std::string k = line.substr(1, eq - 1);
                std::string v = line.substr(eq + 1);
                auto trim = [](std::string& s) {
                    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
                        s.erase(s.begin());
                    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
                        s.pop_back();
                };
                trim(k);
                trim(v);
                t.metadata[k] = v;
            }
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        if (!header_seen) {
            while (std::getline(row, cell, ',')) t.columns.push_back(cell);
            header_seen = true;
            continue;
        }
        std::vector<double> vals;
        while (std::getline(row, cell, ',')) {
            char* end = nullptr;
            const double x = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) throw IoError("non-numeric cell in " + path + ": " + cell);
            vals.push_back(x);
        }
        if (vals.size() != t.columns.size())
            throw IoError("ragged row in " + path);
        t.rows.push_back(std::move(vals));
    }
    if (!header_seen) throw IoError("no header row in " + path);
    return t;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace wavemap
