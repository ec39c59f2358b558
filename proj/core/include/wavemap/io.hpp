#pragma once

#include <map>
#include <string>
#include <vector>

namespace wavemap {

/// Numeric table with named columns and optional "# key = value" metadata
/// lines, written as delimited text with a header row.  All numbers are
/// emitted with "%.17g" so files re-parse bit-exactly and identical inputs
/// produce byte-identical outputs.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // row-major, rows[i].size() == columns.size()
    std::map<std::string, std::string> metadata;

    void add_row(const std::vector<double>& row);
};

void write_table(const std::string& path, const Table& table);
Table read_table(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

std::string format_g17(double v);

}  // namespace wavemap
