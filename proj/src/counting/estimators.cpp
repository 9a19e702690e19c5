#include "omc/counting/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "omc/errors.hpp"

namespace omc::counting {

using detail::require;

Sb0Calibration calibrate_sb0(std::span<const double> counts, double bin_width, std::uint64_t n_pulses,
                             const DetectionChain& chain, std::size_t early_bins, double n_start) {
    chain.validate();
    require(early_bins >= 1 && early_bins <= counts.size(), "early_bins must lie within the histogram");
    require(bin_width > 0.0 && n_pulses > 0, "bin width and pulse count must be positive");
    require(n_start >= 0.0, "n_start must be non-negative");
    const double total = std::accumulate(counts.begin(), counts.begin() + static_cast<long>(early_bins), 0.0);
    const double exposure = static_cast<double>(early_bins) * bin_width * static_cast<double>(n_pulses);
    const double signal = total / exposure - chain.background();
    Sb0Calibration out;
    out.bins_used = early_bins;
    out.sb0 = signal / (1.0 + n_start);
    out.sigma = std::sqrt(std::max(total, 1.0)) / exposure / (1.0 + n_start);
    out.low_snr = signal <= chain.background() || signal <= 0.0;
    return out;
}

Sb0Calibration calibrate_sb0(const BinnedCounts& counts, const DetectionChain& chain, std::size_t early_bins,
                             double n_start) {
    const auto c = counts.as_double();
    return calibrate_sb0(c, counts.bin_width, counts.n_pulses, chain, early_bins, n_start);
}

OccupancyEstimate occupancy_from_counts(double counts, double exposure, double rate_per_phonon,
                                        const DetectionChain& chain, Detuning detuning) {
    chain.validate();
    require(counts >= 0.0 && std::isfinite(counts), "counts must be non-negative");
    require(exposure > 0.0, "exposure must be positive");
    require(rate_per_phonon > 0.0, "rate per phonon must be positive");
    const double signal = counts / exposure - chain.background();
    OccupancyEstimate out;
    out.n = signal / rate_per_phonon - (detuning == Detuning::blue ? 1.0 : 0.0);
    out.sigma = std::sqrt(std::max(counts, 1.0)) / exposure / rate_per_phonon;
    out.low_snr = chain.background() >= signal;
    return out;
}

namespace {

// Bin average of e^{-r t} over [t0, t0 + h].
double bin_decay(double r, double t0, double h) {
    const double rh = r * h;
    if (rh < 1e-12) return std::exp(-r * t0);
    return std::exp(-r * t0) * (-std::expm1(-rh)) / rh;
}

struct ProjectedFit {
    double n_0{0.0}, n_ss{0.0}, chi2{std::numeric_limits<double>::infinity()};
};

// Weighted linear fit of y = n_ss (1 - e) + n_0 e at fixed relaxation rate.
ProjectedFit project(std::span<const double> y, std::span<const double> w, double r, double h) {
    double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    std::vector<double> e(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        e[i] = bin_decay(r, static_cast<double>(i) * h, h);
        const double a1 = e[i], a2 = 1.0 - e[i];
        s11 += w[i] * a1 * a1;
        s12 += w[i] * a1 * a2;
        s22 += w[i] * a2 * a2;
        b1 += w[i] * a1 * y[i];
        b2 += w[i] * a2 * y[i];
    }
    const double det = s11 * s22 - s12 * s12;
    ProjectedFit out;
    if (!(std::abs(det) > 1e-300)) return out;
    out.n_0 = (s22 * b1 - s12 * b2) / det;
    out.n_ss = (s11 * b2 - s12 * b1) / det;
    out.chi2 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - out.n_ss * (1.0 - e[i]) - out.n_0 * e[i];
        out.chi2 += w[i] * d * d;
    }
    return out;
}

}  // namespace

BaseOccupancyResult estimate_base_occupancy(std::span<const double> counts, double bin_width,
                                            std::uint64_t n_pulses, double rate_per_phonon,
                                            const DetectionChain& chain, double omega_m,
                                            const BaseOccupancyOptions& options) {
    chain.validate();
    require(counts.size() >= 4, "base occupancy needs at least four bins");
    require(bin_width > 0.0 && n_pulses > 0, "bin width and pulse count must be positive");
    require(rate_per_phonon > 0.0, "rate per phonon must be positive");
    require(omega_m > 0.0, "omega_m must be positive");
    for (double c : counts) require(std::isfinite(c) && c >= 0.0, "counts must be non-negative");

    const double exposure = bin_width * static_cast<double>(n_pulses);
    const double bg = chain.background() * exposure;  // background counts per bin
    const double per_phonon = rate_per_phonon * exposure;
    const std::size_t m = counts.size();

    // y_i: occupancy per bin; w_i: inverse Poisson variance of y_i.
    std::vector<double> y(m), w(m);
    for (std::size_t i = 0; i < m; ++i) {
        y[i] = (counts[i] - bg) / per_phonon;
        w[i] = per_phonon * per_phonon / std::max(counts[i], 1.0);
    }

    BaseOccupancyResult out;
    const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) mean += w[i] * y[i];
    mean /= wsum;
    double chi2_flat = 0.0;
    for (std::size_t i = 0; i < m; ++i) chi2_flat += w[i] * (y[i] - mean) * (y[i] - mean);

    // Relaxation rates from a tenth of the window to ten per bin.
    const double r_lo = 0.1 / (static_cast<double>(m) * bin_width);
    const double r_hi = 10.0 / bin_width;
    constexpr int grid = 240;
    ProjectedFit best;
    double best_r = r_lo;
    for (int k = 0; k < grid; ++k) {
        const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(k) / (grid - 1));
        const auto fit = project(y, w, r, bin_width);
        if (fit.chi2 < best.chi2) {
            best = fit;
            best_r = r;
        }
    }

    const auto finish_temperature = [&] {
        if (out.n_0 > 0.0) {
            out.t_0 = temperature_from_occupancy(omega_m, out.n_0, options.conversion);
        } else {
            out.t_0 = 0.0;
            out.warnings.push_back("non-positive base occupancy; temperature set to 0");
        }
    };

    // No resolvable relaxation: the data are consistent with a flat trajectory.
    if (!(chi2_flat - best.chi2 > 4.0) && !(chi2_flat > 0.0 && best.chi2 < 1e-12 * chi2_flat)) {
        out.n_0 = mean;
        out.n_ss = mean;
        out.n_0_sigma = 1.0 / std::sqrt(wsum);
        out.warnings.push_back("no resolvable relaxation within the pulse; reporting the mean occupancy");
        finish_temperature();
        return out;
    }

    const auto residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd*) {
        const double rate = std::exp(p[2]);
        r.resize(static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i) {
            const double e = bin_decay(rate, static_cast<double>(i) * bin_width, bin_width);
            const double mu = bg + per_phonon * (p[1] + (p[0] - p[1]) * e);
            r[static_cast<Eigen::Index>(i)] = (counts[i] - mu) / std::sqrt(std::max(mu, 1e-3));
        }
    };
    numerics::DampedGaussNewtonOptions lm;
    lm.max_iterations = 300;
    const auto fit =
        numerics::damped_gauss_newton(residual, Eigen::Vector3d(best.n_0, best.n_ss, std::log(best_r)), lm);
    if (!fit.params.allFinite()) throw FitError("base occupancy fit diverged", fit.trace);
    out.iterations = fit.iterations;
    out.n_0 = fit.params[0];
    out.n_ss = fit.params[1];
    out.relaxation_rate = std::exp(fit.params[2]);
    const auto cov = fit.covariance(false);
    out.n_0_sigma = std::sqrt(std::max(cov(0, 0), 0.0));
    if (!fit.converged) out.warnings.push_back("relaxation fit stopped before convergence");

    if (1.0 / out.relaxation_rate < options.min_resolved_bins * bin_width) {
        // n(t) rises monotonically from n_0, so the first bin bounds it.
        out.is_upper_bound = true;
        out.n_0 = y[0] + 2.0 / std::sqrt(w[0]);
        out.n_0_sigma = 0.0;
        out.warnings.push_back("relaxation faster than the early-bin resolution; n_0 is an upper bound");
    }
    finish_temperature();
    return out;
}

BaseOccupancyResult estimate_base_occupancy(const BinnedCounts& counts, double rate_per_phonon,
                                            const DetectionChain& chain, double omega_m,
                                            const BaseOccupancyOptions& options) {
    const auto c = counts.as_double();
    return estimate_base_occupancy(c, counts.bin_width, counts.n_pulses, rate_per_phonon, chain, omega_m,
                                   options);
}

G0Estimate g0_from_backaction_slope(std::span<const double> n_c, std::span<const double> linewidth,
                                    const OpticalCavity& cavity, std::span<const double> sigma) {
    cavity.validate();
    require(n_c.size() == linewidth.size(), "n_c and linewidth sizes differ");
    require(n_c.size() >= 3, "g0 extraction needs at least three points");
    require(sigma.empty() || sigma.size() == n_c.size(), "sigma size mismatch");
    std::vector<double> weights;
    if (!sigma.empty()) {
        weights.reserve(sigma.size());
        for (double s : sigma) {
            require(s > 0.0, "linewidth sigma must be positive");
            weights.push_back(1.0 / (s * s));
        }
    }
    G0Estimate out;
    out.line = numerics::fit_line(n_c, linewidth, weights);
    if (!(out.line.slope > 0.0))
        throw FitError("back-action slope is not positive (" + std::to_string(out.line.slope) + " rad/s per photon)");
    out.g_0 = std::sqrt(out.line.slope * cavity.kappa / 4.0);
    out.g_0_sigma = 0.5 * out.g_0 * out.line.slope_sigma / out.line.slope;
    return out;
}

}  // namespace omc::counting
