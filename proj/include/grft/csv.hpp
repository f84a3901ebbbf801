#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "grft/core.hpp"

namespace grft {

/// Numeric comma-separated table with a header row. Lines starting with '#'
/// are comments; "# key: value" comments are collected as metadata.
struct CsvTable {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<int> line_numbers;
    std::map<std::string, std::string> metadata;

    std::size_t column(const std::string& key) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == key) return i;
        throw ParseError(name + ": missing column '" + key + "'");
    }

    bool has_column(const std::string& key) const
    {
        for (const auto& h : header)
            if (h == key) return true;
        return false;
    }

    std::vector<double> values(const std::string& key) const
    {
        const std::size_t c = column(key);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[c]);
        return out;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline bool parse_number(std::string_view s, double& v)
{
    if (s == "nan" || s == "NaN") {
        v = std::nan("");
        return true;
    }
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    return res.ec == std::errc() && res.ptr == end;
}

} // namespace detail

inline CsvTable read_csv(std::istream& in, const std::string& name = "<stream>")
{
    CsvTable t;
    t.name = name;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view body = detail::trim(line);
        if (body.empty()) continue;
        if (body.front() == '#') {
            const auto colon = body.find(':');
            if (colon != std::string_view::npos) {
                const auto key = detail::trim(body.substr(1, colon - 1));
                const auto value = detail::trim(body.substr(colon + 1));
                if (!key.empty()) t.metadata[std::string(key)] = std::string(value);
            }
            continue;
        }
        const auto fields = detail::split_fields(body);
        if (t.header.empty()) {
            for (const auto f : fields) t.header.emplace_back(f);
            continue;
        }
        if (fields.size() != t.header.size())
            throw ParseError(name + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                             " fields, found " + std::to_string(fields.size()));
        std::vector<double> row(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (!detail::parse_number(fields[i], row[i]))
                throw ParseError(name + ":" + std::to_string(lineno) + ": column '" + t.header[i] +
                                 "' is not a number: '" + std::string(fields[i]) + "'");
        }
        t.rows.push_back(std::move(row));
        t.line_numbers.push_back(lineno);
    }
    if (t.header.empty()) throw ParseError(name + ": missing header row");
    return t;
}

inline CsvTable read_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return read_csv(in, path);
}

} // namespace grft
