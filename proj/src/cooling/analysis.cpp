#include "omc/cooling/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "omc/cooling/contours.hpp"
#include "omc/errors.hpp"
#include "omc/parallel.hpp"

namespace omc::cooling {

using detail::require;

namespace {

void require_increasing(std::span<const double> grid, const char* name) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        require(std::isfinite(grid[i]) && grid[i] > 0.0, std::string(name) + " grid values must be positive");
        if (i > 0) require(grid[i] > grid[i - 1], std::string(name) + " grid must be strictly increasing");
    }
}

HotBathModel with_beta(HotBathModel bath, std::optional<double> beta) {
    if (beta) bath.beta = *beta;
    return bath;
}

}  // namespace

void SweepSpec::validate(bool need_q_c) const {
    require(!n_c.empty(), "sweep needs at least one n_c value");
    require_increasing(n_c, "n_c");
    if (need_q_c) require(!q_c.empty(), "map sweep needs at least one Q_c value");
    require_increasing(q_c, "Q_c");
    require(!beta || (std::isfinite(*beta) && *beta >= 0.0), "beta must be non-negative");
}

std::vector<double> log_space(double lo, double hi, std::size_t count) {
    require(lo > 0.0 && hi > 0.0, "log_space bounds must be positive");
    require(count >= 1, "log_space needs at least one point");
    if (count == 1) {
        require(lo == hi, "a one-point grid needs equal bounds");
        return {lo};
    }
    require(hi > lo, "log_space upper bound must exceed the lower bound");
    std::vector<double> out(count);
    // Decade exponents keep grid points such as 1e6 exact.
    const double a = std::log10(lo), step = (std::log10(hi) - a) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = std::pow(10.0, a + step * static_cast<double>(i));
    out.front() = lo;
    out.back() = hi;
    return out;
}

CurvePoint cooling_point(const Device& device, const HotBathModel& bath, double n_c, const BathOptions& options) {
    require(std::isfinite(n_c) && n_c >= 0.0, "n_c must be non-negative");
    CurvePoint out;
    out.n_c = n_c;
    out.p_in = input_power_for_photons(device.cavity, device.mode.omega_m, n_c);
    const auto state = hot_bath(device.mode, bath, n_c, out.p_in, options);
    out.result = cooled_occupancy(device.mode, state, parametric_rate(device.mode, device.cavity, n_c));
    return out;
}

std::vector<CurvePoint> cooling_curve(const Device& device, const HotBathModel& bath, const SweepSpec& sweep) {
    device.validate();
    sweep.validate();
    const auto model = with_beta(bath, sweep.beta);
    model.validate();
    std::vector<CurvePoint> out(sweep.n_c.size());
    parallel_for(out.size(), sweep.threads,
                 [&](std::size_t i) { out[i] = cooling_point(device, model, sweep.n_c[i], sweep.bath_options); });
    return out;
}

CeffCurve ceff_curve(const Device& device, const HotBathModel& bath, const SweepSpec& sweep) {
    CeffCurve out;
    out.points = cooling_curve(device, bath, sweep);
    const auto model = with_beta(bath, sweep.beta);
    for (std::size_t i = 0; i < out.points.size(); ++i) {
        const double c = out.points[i].result.c_eff;
        if (c > out.peak_c_eff) {
            out.peak_c_eff = c;
            out.peak_n_c = out.points[i].n_c;
        }
        if (out.first_crossing || !(c > 1.0)) continue;
        if (i == 0) {
            out.first_crossing = out.points[0].n_c;
            continue;
        }
        // C_eff(lo) <= 1 < C_eff(hi); bisect in log n_c.
        double lo = std::log(out.points[i - 1].n_c), hi = std::log(out.points[i].n_c);
        for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (cooling_point(device, model, std::exp(mid), sweep.bath_options).result.c_eff > 1.0) hi = mid;
            else lo = mid;
        }
        out.first_crossing = std::exp(hi);
    }
    return out;
}

Device device_with_quality(const Device& device, double q_c) {
    require(std::isfinite(q_c) && q_c > 0.0, "Q_c must be positive");
    Device out = device;
    out.cavity = OpticalCavity::from_quality(device.cavity.omega_c, q_c, device.cavity.eta_kappa());
    out.validate();
    return out;
}

CeffMap ceff_map(const Device& device, const HotBathModel& bath, const SweepSpec& sweep,
                 std::span<const double> levels) {
    device.validate();
    sweep.validate(true);
    HotBathModel model = bath;
    model.beta = sweep.beta.value_or(0.0);
    model.validate();
    for (double l : levels) require(std::isfinite(l) && l > 0.0, "contour levels must be positive");

    CeffMap out;
    out.q_c = sweep.q_c;
    out.n_c = sweep.n_c;
    const std::size_t nq = out.q_c.size(), nn = out.n_c.size();
    out.cells.resize(nq * nn);
    parallel_for(out.cells.size(), sweep.threads, [&](std::size_t k) {
        const std::size_t iq = k / nn, in = k % nn;
        const auto dev = device_with_quality(device, out.q_c[iq]);
        out.cells[k] = {out.q_c[iq], cooling_point(dev, model, out.n_c[in], sweep.bath_options)};
    });

    if (nq >= 2 && nn >= 2) {
        std::vector<double> grid(out.cells.size());
        for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = out.cells[k].point.result.c_eff;
        const auto field = [&](double q_c, double n_c) {
            return cooling_point(device_with_quality(device, q_c), model, n_c, sweep.bath_options).result.c_eff;
        };
        for (double level : levels) out.contours.push_back({level, iso_contours(out.q_c, out.n_c, grid, level, field)});
    }
    return out;
}

}  // namespace omc::cooling
