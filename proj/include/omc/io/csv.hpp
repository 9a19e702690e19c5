#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "omc/bath/power_law.hpp"
#include "omc/cooling/analysis.hpp"
#include "omc/counting/ringdown.hpp"
#include "omc/counting/simulate.hpp"
#include "omc/design/nelder_mead.hpp"

namespace omc::io {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text, std::string_view what);
std::uint64_t parse_uint(std::string_view text, std::string_view what);

// Comma-separated table: '#' lines are comments, the first other line is the
// mandatory header. Values are kept as text.
struct Table {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const;  // throws if absent
    bool has_column(std::string_view name) const;
    double number(std::size_t row, std::string_view name) const;
};

Table read_table(std::istream& in);
Table read_table_file(const std::string& path);

// Emits one row; values are already formatted.
void write_row(std::ostream& out, const std::vector<std::string>& cells);

void write_histogram(std::ostream& out, const counting::BinnedCounts& counts);
counting::BinnedCounts read_histogram(const Table& table);

void write_ringdown(std::ostream& out, const std::vector<counting::RingdownPoint>& points);
std::vector<counting::RingdownPoint> read_ringdown(const Table& table);

void write_trace(std::ostream& out, const design::SearchTrace& trace);
// best_so_far is rebuilt per restart from the status and fitness columns.
std::vector<design::TraceEntry> read_trace(const Table& table);

void write_curve(std::ostream& out, const std::vector<cooling::CurvePoint>& points);
void write_map(std::ostream& out, const cooling::CeffMap& map);
void write_contours(std::ostream& out, const std::vector<cooling::ContourLine>& contours);

// Sweep data: n_c, value[, sigma].
std::vector<bath::DataPoint> read_sweep(const Table& table);

// FNV-1a 64-bit.
std::uint64_t fnv1a(std::string_view data);
std::string hex64(std::uint64_t v);

}  // namespace omc::io
