#include "omc/bath/power_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "omc/numerics/least_squares.hpp"

namespace omc::bath {
namespace {

using detail::require;

void validate_points(std::span<const DataPoint> points) {
    require(points.size() >= 3, "power-law fit needs at least 3 points");
    for (const auto& p : points) {
        require(std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.sigma),
                "power-law fit: non-finite data");
        require(p.x > 0.0, "power-law fit: x must be positive");
        require(p.sigma >= 0.0, "power-law fit: sigma must be non-negative");
    }
    const auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                              [](const auto& a, const auto& b) { return a.x < b.x; });
    require(lo->x < hi->x, "power-law fit: all x values are equal");
}

double scale_of(const DataPoint& p) { return p.sigma > 0.0 ? p.sigma : std::abs(p.y); }

PowerLawFit fit_log_log(std::span<const DataPoint> points) {
    std::vector<double> lx, ly, w;
    lx.reserve(points.size());
    ly.reserve(points.size());
    w.reserve(points.size());
    bool weighted = false;
    for (const auto& p : points) {
        require(p.y > 0.0, "power-law fit without offset needs y > 0");
        lx.push_back(std::log(p.x));
        ly.push_back(std::log(p.y));
        // sigma(ln y) = sigma / y
        const double rel = p.sigma > 0.0 ? p.sigma / p.y : 1.0;
        weighted |= p.sigma > 0.0;
        w.push_back(1.0 / (rel * rel));
    }
    const auto line = numerics::fit_line(lx, ly, weighted ? std::span<const double>(w) : std::span<const double>());

    PowerLawFit fit;
    fit.amplitude = std::exp(line.intercept);
    fit.exponent = line.slope;
    fit.residual_norm = std::sqrt(line.chi2);
    fit.covariance.resize(2, 2);
    const double a = fit.amplitude;
    fit.covariance(0, 0) = a * a * line.intercept_sigma * line.intercept_sigma;
    fit.covariance(1, 1) = line.slope_sigma * line.slope_sigma;
    fit.covariance(0, 1) = fit.covariance(1, 0) = a * line.covariance;
    return fit;
}

struct Start {
    double amplitude, exponent, offset, cost;
};

double offset_cost(std::span<const DataPoint> points, double amplitude, double exponent, double offset) {
    double cost = 0.0;
    for (const auto& p : points) {
        const double r = (p.y - offset - amplitude * std::pow(p.x, exponent)) / scale_of(p);
        cost += r * r;
    }
    return std::isfinite(cost) ? cost : std::numeric_limits<double>::infinity();
}

// Offset candidates as fractions of the smallest observation; each seeds a
// log-log fit of (y - offset) over the upper half of the x range.
std::vector<Start> offset_starts(std::span<const DataPoint> sorted) {
    const double y_min = std::min_element(sorted.begin(), sorted.end(),
                                          [](const auto& a, const auto& b) { return a.y < b.y; })->y;
    const std::size_t tail_begin = std::min(sorted.size() / 2, sorted.size() - 3);
    std::vector<Start> starts;
    for (double frac : {-0.5, 0.0, 0.25, 0.5, 0.75, 0.9, 0.97}) {
        const double c0 = frac * y_min;
        std::vector<DataPoint> tail;
        for (std::size_t i = tail_begin; i < sorted.size(); ++i) {
            const double lifted = sorted[i].y - c0;
            if (lifted > 0.0) tail.push_back({sorted[i].x, lifted, 0.0});
        }
        if (tail.size() < 3) continue;
        if (tail.front().x == tail.back().x) continue;
        const auto seed = fit_log_log(tail);
        starts.push_back({seed.amplitude, seed.exponent, c0,
                          offset_cost(sorted, seed.amplitude, seed.exponent, c0)});
    }
    std::sort(starts.begin(), starts.end(), [](const Start& a, const Start& b) { return a.cost < b.cost; });
    return starts;
}

PowerLawFit fit_with_offset(std::span<const DataPoint> points) {
    std::vector<DataPoint> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
    const bool weighted = std::any_of(sorted.begin(), sorted.end(), [](const auto& p) { return p.sigma > 0.0; });
    for (const auto& p : sorted) require(scale_of(p) > 0.0, "power-law fit: zero y without sigma");

    const auto starts = offset_starts(sorted);
    if (starts.empty()) throw FitError("power-law fit: no admissible starting point from the tail");

    std::vector<double> log_x(sorted.size()), inv_scale(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        log_x[i] = std::log(sorted[i].x);
        inv_scale[i] = 1.0 / scale_of(sorted[i]);
    }
    // p = (amplitude, exponent, offset)
    const numerics::ResidualFn residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r,
                                              Eigen::MatrixXd* jac) {
        const auto n = static_cast<Eigen::Index>(sorted.size());
        r.resize(n);
        if (jac) jac->resize(n, 3);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double power = std::exp(p[1] * log_x[i]);
            r[i] = (sorted[i].y - p[2] - p[0] * power) * inv_scale[i];
            if (jac) {
                (*jac)(i, 0) = -power * inv_scale[i];
                (*jac)(i, 1) = -p[0] * power * log_x[i] * inv_scale[i];
                (*jac)(i, 2) = -inv_scale[i];
            }
        }
    };
    numerics::DampedGaussNewtonOptions options;
    options.max_iterations = 500;
    options.admissible = [](const Eigen::VectorXd& p) { return std::abs(p[1]) < 50.0; };

    std::optional<numerics::DampedGaussNewtonResult> best;
    std::vector<IterationRecord> failed_trace;
    const std::size_t tries = std::min<std::size_t>(2, starts.size());
    for (std::size_t k = 0; k < tries; ++k) {
        Eigen::VectorXd p0(3);
        p0 << starts[k].amplitude, starts[k].exponent, starts[k].offset;
        auto result = numerics::damped_gauss_newton(residual, p0, options);
        if (!result.converged) {
            failed_trace = result.trace;
            continue;
        }
        if (!best || result.cost < best->cost) best = std::move(result);
    }
    if (!best) throw FitError("power-law fit with offset did not converge", failed_trace);
    if (!(best->params[0] > 0.0))
        throw FitError("power-law fit with offset produced a non-positive amplitude", best->trace);

    PowerLawFit fit;
    fit.amplitude = best->params[0];
    fit.exponent = best->params[1];
    fit.offset = best->params[2];
    fit.residual_norm = best->residuals.norm();
    fit.covariance = best->covariance(!weighted);
    fit.iterations = best->iterations;
    return fit;
}

}  // namespace

double PowerLawFit::operator()(double x) const {
    return offset.value_or(0.0) + amplitude * std::pow(x, exponent);
}

PowerLawFit fit_power_law(std::span<const DataPoint> points, bool with_offset) {
    validate_points(points);
    if (!with_offset) {
        auto fit = fit_log_log(points);
        require(fit.amplitude > 0.0, "power-law fit: non-positive amplitude");
        return fit;
    }
    return fit_with_offset(points);
}

}  // namespace omc::bath
