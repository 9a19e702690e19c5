#include "omc/cooling/contours.hpp"

#include <cmath>
#include <cstdint>
#include <map>

#include "omc/errors.hpp"

namespace omc::cooling {

namespace {

using EdgeKey = std::uint64_t;

// dir 0: edge from (i, j) to (i + 1, j); dir 1: from (i, j) to (i, j + 1).
constexpr EdgeKey edge_key(std::uint64_t dir, std::uint64_t i, std::uint64_t j) { return (dir << 62) | (i << 31) | j; }

}  // namespace

std::vector<Polyline> iso_contours(std::span<const double> x, std::span<const double> y,
                                   std::span<const double> values, double level,
                                   const std::function<double(double, double)>& field, bool log_axes) {
    const std::size_t nx = x.size(), ny = y.size();
    detail::require(nx >= 2 && ny >= 2, "contouring needs at least a 2x2 grid");
    detail::require(values.size() == nx * ny, "contour grid size mismatch");
    if (log_axes)
        for (double v : x) detail::require(v > 0.0, "log-axis contouring needs positive coordinates");
    if (log_axes)
        for (double v : y) detail::require(v > 0.0, "log-axis contouring needs positive coordinates");

    const auto to_u = [&](double v) { return log_axes ? std::log(v) : v; };
    const auto from_u = [&](double u) { return log_axes ? std::exp(u) : u; };
    const auto value = [&](std::size_t i, std::size_t j) { return values[i * ny + j]; };
    const auto inside = [&](double v) { return v >= level; };

    std::map<EdgeKey, std::pair<double, double>> crossing;
    const auto edge_point = [&](std::uint64_t dir, std::size_t i, std::size_t j) -> EdgeKey {
        const EdgeKey key = edge_key(dir, i, j);
        if (crossing.count(key)) return key;
        const std::size_t i2 = dir == 0 ? i + 1 : i, j2 = dir == 0 ? j : j + 1;
        const double v0 = value(i, j) - level, v1 = value(i2, j2) - level;
        double u0 = to_u(dir == 0 ? x[i] : y[j]);
        double u1 = to_u(dir == 0 ? x[i2] : y[j2]);
        const auto at = [&](double u) {
            return dir == 0 ? std::pair{from_u(u), y[j]} : std::pair{x[i], from_u(u)};
        };
        double u = u0 + (u1 - u0) * v0 / (v0 - v1);
        if (field) {
            // Keep u0 on the side of v0.
            const bool in0 = v0 >= 0.0;
            for (int it = 0; it < 200 && std::abs(u1 - u0) > 1e-13 * std::max(1.0, std::abs(u0)); ++it) {
                const double mid = 0.5 * (u0 + u1);
                const auto p = at(mid);
                const double fm = field(p.first, p.second) - level;
                if ((fm >= 0.0) == in0) u0 = mid; else u1 = mid;
            }
            u = 0.5 * (u0 + u1);
        }
        crossing[key] = at(u);
        return key;
    };

    std::vector<std::pair<EdgeKey, EdgeKey>> segments;
    for (std::size_t i = 0; i + 1 < nx; ++i) {
        for (std::size_t j = 0; j + 1 < ny; ++j) {
            const double a = value(i, j), b = value(i + 1, j), c = value(i + 1, j + 1), d = value(i, j + 1);
            if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d)) continue;
            const bool ia = inside(a), ib = inside(b), ic = inside(c), id = inside(d);
            const int mask = ia | (ib << 1) | (ic << 2) | (id << 3);
            if (mask == 0 || mask == 15) continue;
            // Edges: 0 bottom (a-b), 1 right (b-c), 2 top (d-c), 3 left (a-d).
            const auto e = [&](int k) {
                switch (k) {
                    case 0: return edge_point(0, i, j);
                    case 1: return edge_point(1, i + 1, j);
                    case 2: return edge_point(0, i, j + 1);
                    default: return edge_point(1, i, j);
                }
            };
            const bool cross[4] = {ia != ib, ib != ic, ic != id, id != ia};
            if (mask == 5 || mask == 10) {
                double centre = 0.25 * (a + b + c + d);
                if (field) {
                    const double cx = from_u(0.5 * (to_u(x[i]) + to_u(x[i + 1])));
                    const double cy = from_u(0.5 * (to_u(y[j]) + to_u(y[j + 1])));
                    centre = field(cx, cy);
                }
                if (inside(centre) == ia) {
                    segments.emplace_back(e(0), e(1));
                    segments.emplace_back(e(2), e(3));
                } else {
                    segments.emplace_back(e(3), e(0));
                    segments.emplace_back(e(1), e(2));
                }
                continue;
            }
            int first = -1;
            for (int k = 0; k < 4; ++k) {
                if (!cross[k]) continue;
                if (first < 0) {
                    first = k;
                } else {
                    segments.emplace_back(e(first), e(k));
                    break;
                }
            }
        }
    }

    std::multimap<EdgeKey, std::size_t> incident;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        incident.emplace(segments[s].first, s);
        incident.emplace(segments[s].second, s);
    }
    std::vector<bool> used(segments.size(), false);
    std::vector<Polyline> out;

    const auto walk = [&](std::size_t s, EdgeKey start) {
        Polyline line{crossing[start]};
        EdgeKey at = start;
        for (;;) {
            used[s] = true;
            const EdgeKey next = segments[s].first == at ? segments[s].second : segments[s].first;
            line.push_back(crossing[next]);
            at = next;
            std::size_t follow = segments.size();
            const auto [lo, hi] = incident.equal_range(at);
            for (auto it = lo; it != hi; ++it)
                if (!used[it->second]) follow = it->second;
            if (follow == segments.size()) break;
            s = follow;
        }
        out.push_back(std::move(line));
    };

    // Open chains start at boundary edges (one incident segment); loops after.
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (used[s]) continue;
        for (EdgeKey end : {segments[s].first, segments[s].second}) {
            if (!used[s] && incident.count(end) == 1) walk(s, end);
        }
    }
    for (std::size_t s = 0; s < segments.size(); ++s)
        if (!used[s]) walk(s, segments[s].first);
    return out;
}

}  // namespace omc::cooling
