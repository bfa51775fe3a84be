#include "pcmwall/csv.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace pcmwall {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

std::string csv_join(const std::vector<std::string>& fields) {
    std::string line;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (fields[i].find_first_of(",\n\r") != std::string::npos)
            throw std::invalid_argument("csv_join: field contains a separator: " + fields[i]);
        if (i) line += ',';
        line += fields[i];
    }
    return line;
}

CsvTable read_csv(const std::string& text) {
    CsvTable table;
    size_t pos = 0;
    size_t line_number = 0;
    while (pos < text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        size_t stop = end;
        if (stop > pos && text[stop - 1] == '\r') --stop;
        std::string_view line(text.data() + pos, stop - pos);
        pos = end + 1;
        ++line_number;
        if (line.empty()) continue;

        std::vector<std::string_view> fields;
        size_t start = 0;
        while (true) {
            size_t comma = line.find(',', start);
            if (comma == std::string_view::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }

        if (line_number == 1) {
            for (auto f : fields) table.header.emplace_back(f);
            continue;
        }
        if (fields.size() != table.header.size())
            throw std::invalid_argument("csv line " + std::to_string(line_number) +
                                        ": expected " + std::to_string(table.header.size()) +
                                        " fields, got " + std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (auto f : fields) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size())
                throw std::invalid_argument("csv line " + std::to_string(line_number) +
                                            ": not a number: '" + std::string(f) + "'");
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) throw std::invalid_argument("csv: missing header line");
    return table;
}

} // namespace pcmwall
