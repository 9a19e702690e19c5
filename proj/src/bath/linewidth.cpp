#include "omc/bath/linewidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "omc/numerics/roots.hpp"

namespace omc::bath {
namespace {

using detail::require;

struct SplitFit {
    std::size_t split{0};
    double cost{std::numeric_limits<double>::infinity()};
    PowerLawFit low, high;
};

std::optional<SplitFit> fit_split(std::span<const DataPoint> sorted, std::size_t split) {
    try {
        SplitFit s;
        s.split = split;
        s.low = fit_power_law(sorted.first(split), true);
        s.high = fit_power_law(sorted.subspan(split), true);
        s.cost = s.low.residual_norm * s.low.residual_norm + s.high.residual_norm * s.high.residual_norm;
        if (!std::isfinite(s.cost)) return std::nullopt;
        return s;
    } catch (const NumericError&) {
        return std::nullopt;
    } catch (const ValidationError&) {
        return std::nullopt;
    }
}

}  // namespace

double PiecewiseLinewidthFit::operator()(double x) const {
    if (low && high && crossover) return x < *crossover ? (*low)(x) : (*high)(x);
    if (low) return (*low)(x);
    return gamma_phi;
}

HotBathModel PiecewiseLinewidthFit::to_bath_model(HotBathModel base) const {
    require(low.has_value(), "linewidth fit has no low-power branch to convert");
    base.damp_dephasing = low->offset.value_or(gamma_phi);
    base.damp_low_amplitude = low->amplitude;
    base.damp_low_exponent = low->exponent;
    if (high) {
        base.damp_high_offset = high->offset.value_or(0.0);
        base.damp_high_amplitude = high->amplitude;
        base.damp_high_exponent = high->exponent;
    } else {
        base.damp_high_offset = 0.0;
        base.damp_high_amplitude = 0.0;
        base.damp_high_exponent = 0.0;
    }
    return base;
}

PiecewiseLinewidthFit fit_piecewise_linewidth(std::span<const DataPoint> points,
                                              const LinewidthFitOptions& options) {
    require(points.size() >= 3, "linewidth fit needs at least 3 points");
    for (const auto& p : points) {
        require(std::isfinite(p.x) && std::isfinite(p.y), "linewidth fit: non-finite data");
        require(p.x > 0.0, "linewidth fit: n_c must be positive");
        require(p.y > 0.0, "linewidth fit: linewidth must be positive");
    }
    std::vector<DataPoint> sorted(points.begin(), points.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.x < b.x; });

    PiecewiseLinewidthFit out;
    out.decomposition =
        "gamma_p(x) = gamma(x) - gamma_phi; low branch B1 x^q1, high branch (c2 - gamma_phi) + B2 x^q2, "
        "switching at the intersection of the two fitted linewidth branches";

    const double decade_edge = std::pow(10.0, std::floor(std::log10(sorted.front().x) + 1e-9) + 1.0);
    const auto plateau_end = static_cast<std::size_t>(
        std::find_if(sorted.begin(), sorted.end(), [&](const auto& p) { return p.x >= decade_edge; }) -
        sorted.begin());
    out.plateau_points = plateau_end;
    double plateau_mean = 0.0;
    for (std::size_t i = 0; i < plateau_end; ++i) plateau_mean += sorted[i].y;
    if (plateau_end > 0) plateau_mean /= static_cast<double>(plateau_end);

    const std::size_t per_regime = std::max<std::size_t>(3, options.min_points_per_regime);
    const std::size_t rising = sorted.size() - plateau_end;
    const double y_max = std::max_element(sorted.begin(), sorted.end(),
                                          [](const auto& a, const auto& b) { return a.y < b.y; })->y;
    const double y_min = std::min_element(sorted.begin(), sorted.end(),
                                          [](const auto& a, const auto& b) { return a.y < b.y; })->y;
    const double reference = plateau_end > 0 ? plateau_mean : y_min;
    const bool flat = y_max < reference * (1.0 + options.min_rise);

    if (plateau_end < per_regime) {
        out.gamma_phi_is_upper_bound = true;
        out.warnings.push_back("fewer than " + std::to_string(per_regime) +
                               " points on the saturation plateau; gamma_phi is an upper bound");
    }

    if (flat || rising < per_regime) {
        double mean = 0.0;
        for (const auto& p : sorted) mean += p.y;
        out.gamma_phi = flat ? mean / static_cast<double>(sorted.size()) : plateau_mean;
        if (!flat) out.warnings.push_back("too few points above the plateau for a power-law branch");
        return out;
    }

    if (rising < 2 * per_regime) {
        out.low = fit_power_law(sorted, true);
        out.warnings.push_back("too few points for a separate high-power branch; fitted a single branch");
    } else {
        const std::size_t first = plateau_end + per_regime;
        const std::size_t last = sorted.size() - per_regime;  // inclusive
        const std::size_t stride = std::max<std::size_t>(1, (last - first + 1) / 40);

        std::optional<SplitFit> best;
        const auto consider = [&](std::size_t k) {
            if (k < first || k > last) return;
            if (best && best->split == k) return;
            auto s = fit_split(sorted, k);
            if (s && (!best || s->cost < best->cost)) best = std::move(s);
        };
        for (std::size_t k = first; k <= last; k += stride) consider(k);
        if (!best) throw FitError("linewidth fit: no split produced two converged branch fits");
        const std::size_t centre = best->split;
        for (std::size_t k = centre > stride ? centre - stride : first; k <= std::min(last, centre + stride); ++k)
            consider(k);

        out.low = best->low;
        out.high = best->high;
        const auto low = *out.low, high = *out.high;
        const auto root = numerics::bracketed_root(
            [&](double u) { return low(std::exp(u)) - high(std::exp(u)); }, std::log(1e-12), std::log(1e24),
            1e-15);
        if (root) {
            out.crossover = std::exp(*root);
        } else {
            out.warnings.push_back("fitted branches do not intersect; crossover undefined");
        }
    }

    if (out.gamma_phi_is_upper_bound) {
        out.gamma_phi = y_min;
    } else {
        out.gamma_phi = out.low->offset.value_or(plateau_mean);
    }
    return out;
}

}  // namespace omc::bath
