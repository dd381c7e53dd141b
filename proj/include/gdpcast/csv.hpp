#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gdpcast/errors.hpp"
#include "gdpcast/time_series.hpp"

namespace gdpcast::csv {

/// Shortest exact decimal form: %.17g round-trips every double, so emitted
/// files are byte-stable across runs and re-readable without loss.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

/// Parse "YYYY-Qn" into (year, period); throws InputError on any deviation.
inline CalendarPoint parse_quarter_label(const std::string& raw) {
    const std::string s = trim(raw);
    const auto fail = [&] { throw InputError("csv: bad date label '" + s + "', expected YYYY-Qn"); };
    const std::size_t dash = s.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 2 >= s.size()) fail();
    if (s[dash + 1] != 'Q') fail();
    const std::string ys = s.substr(0, dash);
    const std::string qs = s.substr(dash + 2);
    if (ys.size() != 4) fail();
    for (char c : ys)
        if (!std::isdigit(static_cast<unsigned char>(c))) fail();
    for (char c : qs)
        if (!std::isdigit(static_cast<unsigned char>(c))) fail();
    if (qs.size() != 1) fail();
    int year = 0, period = 0;
    try {
        year = std::stoi(ys);
        period = std::stoi(qs);
    } catch (const std::exception&) {
        fail();
    }
    if (period < 1 || period > 4) throw InputError("csv: quarter out of 1..4 in '" + s + "'");
    return {year, period};
}

inline double parse_value(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) throw InputError("csv: empty value field");
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw InputError("csv: bad numeric value '" + s + "'");
    }
    if (pos != s.size()) throw InputError("csv: trailing junk in value '" + s + "'");
    if (!std::isfinite(v)) throw InputError("csv: non-finite value '" + s + "'");
    return v;
}

/**
 * Read a quarterly series from `date,value` CSV text.
 *
 * The header must be exactly `date,value`; rows must be consecutive quarters
 * (no gaps, no duplicates) so the calendar can be represented by origin alone.
 */
inline TimeSeries read_series(std::istream& in, const std::string& what = "input") {
    std::string line;
    if (!std::getline(in, line)) throw InputError("csv: " + what + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    {
        auto header = split_line(line);
        if (header.size() != 2 || trim(header[0]) != "date" || trim(header[1]) != "value")
            throw InputError("csv: " + what + " header must be 'date,value', got '" + line + "'");
    }
    std::vector<double> values;
    CalendarPoint origin{};
    CalendarPoint prev{};
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != 2)
            throw InputError("csv: " + what + " row " + std::to_string(row) +
                             " must have 2 fields");
        const CalendarPoint c = parse_quarter_label(fields[0]);
        const double v = parse_value(fields[1]);
        if (values.empty()) {
            origin = c;
        } else {
            const long long want = static_cast<long long>(prev.year) * 4 + prev.period; // next abs index
            const long long got = static_cast<long long>(c.year) * 4 + (c.period - 1);
            if (got == want - 1)
                throw InputError("csv: duplicate date at row " + std::to_string(row));
            if (got != want)
                throw InputError("csv: gap or out-of-order date at row " + std::to_string(row) +
                                 " (expected quarter after " + std::to_string(prev.year) + "-Q" +
                                 std::to_string(prev.period) + ")");
        }
        prev = c;
        values.push_back(v);
    }
    if (values.empty()) throw InputError("csv: " + what + " has no data rows");
    return TimeSeries(std::move(values), origin, 4);
}

inline TimeSeries read_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("csv: cannot open '" + path + "'");
    return read_series(in, path);
}

inline void write_series(std::ostream& out, const TimeSeries& ts) {
    out << "date,value\n";
    for (std::size_t i = 0; i < ts.size(); ++i)
        out << ts.label_at(i) << ',' << format_double(ts[i]) << '\n';
}

inline void write_series_file(const std::string& path, const TimeSeries& ts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("csv: cannot write '" + path + "'");
    write_series(out, ts);
}

/// Rectangular table writer used by every report artifact: one header row,
/// every cell already stringified by the caller.
inline void write_table(std::ostream& out, const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) {
    for (std::size_t j = 0; j < header.size(); ++j)
        out << (j ? "," : "") << header[j];
    out << '\n';
    for (const auto& r : rows) {
        if (r.size() != header.size()) throw InputError("csv: ragged table row");
        for (std::size_t j = 0; j < r.size(); ++j)
            out << (j ? "," : "") << r[j];
        out << '\n';
    }
}

inline void write_table_file(const std::string& path, const std::vector<std::string>& header,
                             const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("csv: cannot write '" + path + "'");
    write_table(out, header, rows);
}

/// Parse any `header + numeric rows` CSV back into memory (test oracles and
/// report recomputation read emitted artifacts through this).
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t j = 0; j < header.size(); ++j)
            if (header[j] == name) return j;
        throw InputError("csv: table has no column '" + name + "'");
    }

    double number(std::size_t row, std::size_t col) const { return parse_value(rows.at(row).at(col)); }
};

inline Table read_table(std::istream& in, const std::string& what = "table") {
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw InputError("csv: " + what + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    t.header = split_line(line);
    for (auto& h : t.header) h = trim(h);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != t.header.size())
            throw InputError("csv: " + what + " has a ragged row");
        t.rows.push_back(std::move(fields));
    }
    return t;
}

inline Table read_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("csv: cannot open '" + path + "'");
    return read_table(in, path);
}

} // namespace gdpcast::csv
