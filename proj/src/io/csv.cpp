#include "omc/io/csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "omc/errors.hpp"
#include "omc/units.hpp"

namespace omc::io {

using detail::require;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

double parse_double(std::string_view text, std::string_view what) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
        throw ValidationError(std::string(what) + ": '" + std::string(text) + "' is not a number");
    return v;
}

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
    text = trim(text);
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec == std::errc() && res.ptr == text.data() + text.size() && !text.empty()) return v;
    // Accept integral values written in floating-point form (1e7).
    const double d = parse_double(text, what);
    if (!(d >= 0.0 && d <= 1.8e19 && std::floor(d) == d))
        throw ValidationError(std::string(what) + ": '" + std::string(text) + "' is not a non-negative integer");
    return static_cast<std::uint64_t>(d);
}

std::size_t Table::column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ValidationError("missing CSV column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
}

bool Table::has_column(std::string_view name) const {
    return std::find(header.begin(), header.end(), name) != header.end();
}

double Table::number(std::size_t row, std::string_view name) const {
    return parse_double(rows.at(row).at(column(name)), name);
}

Table read_table(std::istream& in) {
    Table t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto view = trim(line);
        if (view.empty()) continue;
        if (view.front() == '#') {
            t.comments.emplace_back(view);
            continue;
        }
        auto cells = split(view);
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        require(cells.size() == t.header.size(),
                "CSV line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) + " cells, expected " +
                    std::to_string(t.header.size()));
        t.rows.push_back(std::move(cells));
    }
    require(!t.header.empty(), "CSV input has no header row");
    return t;
}

Table read_table_file(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "cannot open '" + path + "'");
    return read_table(in);
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

void write_histogram(std::ostream& out, const counting::BinnedCounts& counts) {
    write_row(out, {"bin_start_s", "counts", "pulses"});
    for (std::size_t i = 0; i < counts.counts.size(); ++i)
        write_row(out, {format_double(counts.bin_start(i)), std::to_string(counts.counts[i]),
                        std::to_string(counts.n_pulses)});
}

counting::BinnedCounts read_histogram(const Table& table) {
    counting::BinnedCounts out;
    const auto c_start = table.column("bin_start_s"), c_counts = table.column("counts"),
               c_pulses = table.column("pulses");
    require(table.rows.size() >= 2, "histogram needs at least two bins");
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        out.counts.push_back(parse_uint(table.rows[i][c_counts], "counts"));
        const auto pulses = parse_uint(table.rows[i][c_pulses], "pulses");
        require(i == 0 || pulses == out.n_pulses, "histogram pulse count must be uniform");
        out.n_pulses = pulses;
    }
    const double t0 = parse_double(table.rows[0][c_start], "bin_start_s");
    out.bin_width = parse_double(table.rows[1][c_start], "bin_start_s") - t0;
    require(out.bin_width > 0.0, "histogram bins must be increasing");
    require(std::abs(t0) <= 1e-9 * out.bin_width, "histogram must start at t = 0");
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const double expected = static_cast<double>(i) * out.bin_width;
        const double got = parse_double(table.rows[i][c_start], "bin_start_s");
        require(std::abs(got - expected) <= 1e-6 * out.bin_width, "histogram bins must be uniform");
    }
    return out;
}

void write_ringdown(std::ostream& out, const std::vector<counting::RingdownPoint>& points) {
    write_row(out, {"tau_off_s", "n_i", "n_i_sigma", "n_f"});
    for (const auto& p : points)
        write_row(out, {format_double(p.tau_off), format_double(p.n_i), format_double(p.n_i_sigma),
                        format_double(p.n_f)});
}

std::vector<counting::RingdownPoint> read_ringdown(const Table& table) {
    std::vector<counting::RingdownPoint> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        out.push_back({table.number(i, "tau_off_s"), table.number(i, "n_i"), table.number(i, "n_i_sigma"),
                       table.number(i, "n_f")});
    return out;
}

void write_trace(std::ostream& out, const design::SearchTrace& trace) {
    std::vector<std::string> header{"restart", "eval_index"};
    for (auto name : design::DesignVector::names()) header.emplace_back(name);
    for (const char* c : {"omega_o_hz", "omega_m_hz", "g0_hz", "q_scat", "fitness_hz", "status"}) header.emplace_back(c);
    write_row(out, header);
    for (const auto& e : trace.entries) {
        std::vector<std::string> row{std::to_string(e.restart), std::to_string(e.eval_index)};
        for (double v : e.evaluation.design.to_array()) row.push_back(format_double(v));
        const auto& ev = e.evaluation;
        row.push_back(format_double(to_hz(ev.omega_o)));
        row.push_back(format_double(to_hz(ev.omega_m)));
        row.push_back(format_double(to_hz(ev.g0)));
        row.push_back(format_double(ev.q_scat));
        row.push_back(format_double(to_hz(ev.fitness)));
        row.emplace_back(design::to_string(ev.status));
        write_row(out, row);
    }
}

std::vector<design::TraceEntry> read_trace(const Table& table) {
    std::vector<design::TraceEntry> out;
    const auto names = design::DesignVector::names();
    double best = 0.0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        design::TraceEntry e;
        e.restart = parse_uint(table.rows[i][table.column("restart")], "restart");
        e.eval_index = parse_uint(table.rows[i][table.column("eval_index")], "eval_index");
        std::array<double, design::kDesignDim> v{};
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = table.number(i, names[k]);
        auto& ev = e.evaluation;
        ev.design = design::DesignVector::from_array(v);
        ev.omega_o = to_angular(table.number(i, "omega_o_hz"));
        ev.omega_m = to_angular(table.number(i, "omega_m_hz"));
        ev.g0 = to_angular(table.number(i, "g0_hz"));
        ev.q_scat = table.number(i, "q_scat");
        ev.fitness = to_angular(table.number(i, "fitness_hz"));
        ev.status = design::parse_eval_status(table.rows[i][table.column("status")]);
        if (out.empty() || out.back().restart != e.restart) best = 0.0;
        if (ev.status == design::EvalStatus::ok) best = std::min(best, ev.fitness);
        e.best_so_far = best;
        out.push_back(std::move(e));
    }
    return out;
}

void write_curve(std::ostream& out, const std::vector<cooling::CurvePoint>& points) {
    write_row(out, {"n_c", "p_in_w", "n_wg", "n_p", "gamma_p_hz", "gamma_om_hz", "n_avg", "c", "c_eff"});
    for (const auto& p : points) {
        const auto& r = p.result;
        write_row(out, {format_double(p.n_c), format_double(p.p_in), format_double(r.bath.n_wg),
                        format_double(r.bath.n_p), format_double(to_hz(r.bath.gamma_p)),
                        format_double(to_hz(r.gamma_om)), format_double(r.n_avg), format_double(r.c),
                        format_double(r.c_eff)});
    }
}

void write_map(std::ostream& out, const cooling::CeffMap& map) {
    write_row(out, {"q_c", "n_c", "n_avg", "c_eff"});
    for (const auto& cell : map.cells)
        write_row(out, {format_double(cell.q_c), format_double(cell.point.n_c), format_double(cell.point.result.n_avg),
                        format_double(cell.point.result.c_eff)});
}

void write_contours(std::ostream& out, const std::vector<cooling::ContourLine>& contours) {
    write_row(out, {"level", "polyline", "q_c", "n_c"});
    for (const auto& c : contours)
        for (std::size_t k = 0; k < c.polylines.size(); ++k)
            for (const auto& [q, n] : c.polylines[k])
                write_row(out, {format_double(c.level), std::to_string(k), format_double(q), format_double(n)});
}

std::vector<bath::DataPoint> read_sweep(const Table& table) {
    const bool has_sigma = table.has_column("sigma");
    std::vector<bath::DataPoint> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        out.push_back({table.number(i, "n_c"), table.number(i, "value"), has_sigma ? table.number(i, "sigma") : 0.0});
    return out;
}

std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace omc::io
