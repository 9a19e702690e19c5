#include "omc/counting/ringdown.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <boost/math/distributions/students_t.hpp>

#include "omc/counting/dynamics.hpp"
#include "omc/counting/estimators.hpp"
#include "omc/errors.hpp"
#include "omc/numerics/least_squares.hpp"
#include "omc/parallel.hpp"

namespace omc::counting {

using detail::require;

void RingdownConfig::validate() const {
    device.validate();
    bath.validate();
    chain.validate();
    require(n_c_peak > 0.0, "n_c_peak must be positive");
    require(!tau_off.empty(), "ringdown needs at least one tau_off");
    for (double t : tau_off) require(std::isfinite(t) && t >= 0.0, "tau_off must be non-negative");
    PulseSchedule{tau_pulse, 0.0, tau_bin, n_pulses}.validate();
}

RingdownDataset simulate_ringdown(const RingdownConfig& config, std::uint64_t seed) {
    config.validate();
    const auto red =
        make_intra_pulse_model(config.device, config.bath, config.n_c_peak, Detuning::red, config.bath_rise_tau);
    const double tp = config.tau_pulse;

    // One pulse maps n_i affinely onto n_f = a n_i + b.
    double a = 0.0, b = 0.0;
    if (red.constant_coefficients()) {
        a = std::exp(-red.total_damping() * tp);
        b = relaxation_closed_form(red, 0.0, tp);
    } else {
        b = OccupancyPath(red, 0.0, tp).final_value();
        a = OccupancyPath(red, 1.0, tp).final_value() - b;
    }

    RingdownDataset out;
    out.omega_m = config.device.mode.omega_m;
    out.sb0_true = sideband_rate_per_phonon(config.chain, config.device, red.gamma_om);
    if (config.bath_rise_tau)
        out.bath_model = "single-exponential hot-bath ramp (phenomenological stand-in)";

    const double exposure_bin = config.tau_bin * static_cast<double>(config.n_pulses);
    const double bg = config.chain.background();

    out.sb0_used = out.sb0_true;
    if (config.calibrate_with_blue) {
        // Blue pulses after full thermalization; only the first bin is read.
        const auto blue = make_intra_pulse_model(config.device, config.bath, config.n_c_peak, Detuning::blue,
                                                 config.bath_rise_tau);
        const PulseSchedule cal{config.tau_bin, 0.0, config.tau_bin, config.n_pulses};
        const OccupancyPath path(blue, config.bath.n_0, config.tau_bin);
        const auto rate = [&](double t) { return bg + out.sb0_true * (path(t) + 1.0); };
        const auto means = expected_counts(rate, cal);
        const auto counts = config.noiseless ? means : sample_counts(means, cal, seed, 0).as_double();
        const auto calib = calibrate_sb0(counts, config.tau_bin, config.n_pulses, config.chain, 1, 0.0);
        if (calib.low_snr || !(calib.sb0 > 0.0))
            throw NumericError("blue-detuned calibration is background dominated");
        out.sb0_used = calib.sb0;
    }

    const std::size_t n = config.tau_off.size();
    out.points.resize(n);
    out.n_i_true.resize(n);
    out.n_f_true.resize(n);
    const PulseSchedule schedule{tp, 0.0, config.tau_bin, config.n_pulses};
    parallel_for(n, config.threads, [&](std::size_t k) {
        const double tau = config.tau_off[k];
        const double d = std::exp(-red.gamma_0 * tau);
        const double c = config.bath.n_0 * -std::expm1(-red.gamma_0 * tau);
        const double n_i = (d * b + c) / (1.0 - d * a);
        out.n_i_true[k] = n_i;
        out.n_f_true[k] = a * n_i + b;

        const OccupancyPath path(red, n_i, tp);
        const auto rate = [&](double t) { return bg + out.sb0_true * path(t); };
        const auto means = expected_counts(rate, schedule);
        const auto counts = config.noiseless ? means : sample_counts(means, schedule, seed, k + 1).as_double();
        const auto first = occupancy_from_counts(counts.front(), exposure_bin, out.sb0_used, config.chain,
                                                 Detuning::red);
        const auto last = occupancy_from_counts(counts.back(), exposure_bin, out.sb0_used, config.chain,
                                                Detuning::red);
        out.points[k] = {tau, first.n, config.noiseless ? 0.0 : first.sigma, last.n};
    });
    return out;
}

namespace {

struct LinearPart {
    double amplitude{0.0}, offset{0.0}, cost{std::numeric_limits<double>::infinity()};
};

LinearPart project(std::span<const RingdownPoint> pts, std::span<const double> w, double gamma) {
    double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double e = std::exp(-gamma * pts[i].tau_off);
        const double ww = w[i] * w[i];
        s11 += ww * e * e;
        s12 += ww * e;
        s22 += ww;
        b1 += ww * e * pts[i].n_i;
        b2 += ww * pts[i].n_i;
    }
    const double det = s11 * s22 - s12 * s12;
    LinearPart out;
    if (!(std::abs(det) > 1e-300 * std::max(1.0, s11 * s22))) return out;
    out.amplitude = (s22 * b1 - s12 * b2) / det;
    out.offset = (s11 * b2 - s12 * b1) / det;
    out.cost = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double r = w[i] * (pts[i].n_i - out.offset - out.amplitude * std::exp(-gamma * pts[i].tau_off));
        out.cost += r * r;
    }
    return out;
}

}  // namespace

RingdownResult fit_ringdown(std::span<const RingdownPoint> points, double omega_m, double confidence) {
    require(omega_m > 0.0, "omega_m must be positive");
    require(confidence > 0.0 && confidence < 1.0, "confidence must lie in (0, 1)");
    std::set<double> distinct;
    for (const auto& p : points) {
        require(std::isfinite(p.tau_off) && p.tau_off >= 0.0, "tau_off must be non-negative");
        require(std::isfinite(p.n_i), "n_i must be finite");
        distinct.insert(p.tau_off);
    }
    require(distinct.size() >= 4, "ringdown fit needs at least four distinct tau_off values");

    const bool weighted = std::all_of(points.begin(), points.end(), [](const auto& p) { return p.n_i_sigma > 0.0; });
    std::vector<double> w(points.size(), 1.0);
    if (weighted)
        for (std::size_t i = 0; i < points.size(); ++i) w[i] = 1.0 / points[i].n_i_sigma;

    const auto [lo_it, hi_it] =
        std::minmax_element(points.begin(), points.end(), [](const auto& x, const auto& y) { return x.n_i < y.n_i; });
    const double spread = hi_it->n_i - lo_it->n_i;
    if (!(spread > 1e-12 * std::max(std::abs(hi_it->n_i), std::abs(lo_it->n_i))))
        throw FitError("ringdown data do not decay: n_i is constant across tau_off");

    const double t_max = *distinct.rbegin();
    const double t_min = *std::find_if(distinct.begin(), distinct.end(), [](double t) { return t > 0.0; });
    const double g_lo = 0.01 / t_max;
    const double g_hi = 100.0 / t_min;
    constexpr int grid = 400;
    LinearPart best;
    double best_gamma = g_lo;
    int best_k = 0;
    for (int k = 0; k < grid; ++k) {
        const double g = g_lo * std::pow(g_hi / g_lo, static_cast<double>(k) / (grid - 1));
        const auto part = project(points, w, g);
        if (part.cost < best.cost) {
            best = part;
            best_gamma = g;
            best_k = k;
        }
    }
    if (!(best.amplitude > 0.0))
        throw FitError("ringdown data do not decay: best exponential amplitude is not positive");
    if (best_k == 0 || best_k == grid - 1)
        throw FitError("ringdown decay rate is not constrained by the tau_off range");

    const auto residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
        const double g = std::exp(p[2]);
        const auto m = static_cast<Eigen::Index>(points.size());
        r.resize(m);
        if (jac) jac->resize(m, 3);
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto& pt = points[static_cast<std::size_t>(i)];
            const double e = std::exp(-g * pt.tau_off);
            const double wi = w[static_cast<std::size_t>(i)];
            r[i] = wi * (pt.n_i - p[1] - p[0] * e);
            if (jac) {
                (*jac)(i, 0) = -wi * e;
                (*jac)(i, 1) = -wi;
                (*jac)(i, 2) = wi * p[0] * e * pt.tau_off * g;
            }
        }
    };
    const auto fit = numerics::damped_gauss_newton(residual, Eigen::Vector3d(best.amplitude, best.offset,
                                                                            std::log(best_gamma)));
    if (!fit.params.allFinite() || !(fit.params[0] > 0.0))
        throw FitError("ringdown fit failed to find a decaying exponential", fit.trace);

    RingdownResult out;
    out.amplitude = fit.params[0];
    out.offset = fit.params[1];
    out.gamma_0_hat = std::exp(fit.params[2]);
    out.iterations = fit.iterations;
    out.chi2 = 2.0 * fit.cost;
    out.points.assign(points.begin(), points.end());
    const auto cov = fit.covariance(!weighted);
    // Delta method: sigma_gamma = gamma sigma_{ln gamma}.
    out.gamma_0_sigma = out.gamma_0_hat * std::sqrt(std::max(cov(2, 2), 0.0));
    const double amp_sigma = std::sqrt(std::max(cov(0, 0), 0.0));
    if (amp_sigma > 0.0 && out.amplitude < 2.0 * amp_sigma)
        throw FitError("ringdown amplitude is not significant", fit.trace);

    const double dof = static_cast<double>(points.size()) - 3.0;
    double q = 1.959963984540054;
    if (dof >= 1.0) {
        const boost::math::students_t dist(dof);
        q = boost::math::quantile(boost::math::complement(dist, 0.5 * (1.0 - confidence)));
    }
    out.gamma_0_ci_low = out.gamma_0_hat - q * out.gamma_0_sigma;
    out.gamma_0_ci_high = out.gamma_0_hat + q * out.gamma_0_sigma;
    out.q_m_hat = omega_m / out.gamma_0_hat;
    out.q_m_ci_low = omega_m / out.gamma_0_ci_high;
    out.q_m_ci_high =
        out.gamma_0_ci_low > 0.0 ? omega_m / out.gamma_0_ci_low : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace omc::counting
