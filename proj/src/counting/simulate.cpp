#include "omc/counting/simulate.hpp"

#include <array>
#include <cmath>
#include <random>

#include "omc/errors.hpp"
#include "omc/numerics/rng.hpp"

namespace omc::counting {

using detail::require;

std::size_t PulseSchedule::bin_count() const {
    validate();
    // Tolerate tau_pulse being an integer multiple of tau_bin up to rounding.
    return static_cast<std::size_t>(std::floor(tau_pulse / tau_bin * (1.0 + 1e-12)));
}

void PulseSchedule::validate() const {
    require(std::isfinite(tau_pulse) && tau_pulse > 0.0, "tau_pulse must be positive");
    require(std::isfinite(tau_bin) && tau_bin > 0.0, "tau_bin must be positive");
    require(tau_bin <= tau_pulse * (1.0 + 1e-12), "tau_bin must not exceed tau_pulse");
    require(std::isfinite(tau_off) && tau_off >= 0.0, "tau_off must be non-negative");
    require(n_pulses > 0, "n_pulses must be positive");
}

double BinnedCounts::rate(std::size_t i) const {
    return static_cast<double>(counts.at(i)) / (bin_width * static_cast<double>(n_pulses));
}

std::vector<double> expected_counts(const RateFunction& rate, const PulseSchedule& schedule) {
    static constexpr std::array<double, 5> nodes{0.0, -0.5384693101056831, 0.5384693101056831,
                                                 -0.9061798459386640, 0.9061798459386640};
    static constexpr std::array<double, 5> weights{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                                   0.2369268850561891, 0.2369268850561891};
    const std::size_t bins = schedule.bin_count();
    const double h = schedule.tau_bin;
    const double pulses = static_cast<double>(schedule.n_pulses);
    std::vector<double> out(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        const double mid = (static_cast<double>(i) + 0.5) * h;
        double integral = 0.0;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const double r = rate(mid + 0.5 * h * nodes[k]);
            if (!(r >= 0.0) || !std::isfinite(r)) throw ValidationError("count rate must be finite and non-negative");
            integral += weights[k] * r;
        }
        out[i] = 0.5 * h * integral * pulses;
    }
    return out;
}

BinnedCounts sample_counts(std::span<const double> means, const PulseSchedule& schedule, std::uint64_t seed,
                           std::uint64_t stream) {
    auto rng = make_rng(seed, stream);
    BinnedCounts out;
    out.bin_width = schedule.tau_bin;
    out.n_pulses = schedule.n_pulses;
    out.counts.resize(means.size());
    for (std::size_t i = 0; i < means.size(); ++i) {
        require(std::isfinite(means[i]) && means[i] >= 0.0, "Poisson mean must be finite and non-negative");
        if (means[i] == 0.0) continue;
        std::poisson_distribution<std::uint64_t> draw(means[i]);
        out.counts[i] = draw(rng);
    }
    return out;
}

BinnedCounts simulate_counts(const RateFunction& rate, const PulseSchedule& schedule, std::uint64_t seed,
                             std::uint64_t stream) {
    const auto means = expected_counts(rate, schedule);
    return sample_counts(means, schedule, seed, stream);
}

}  // namespace omc::counting
