#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace omc::counting {

inline constexpr double kDefaultBinWidth = 25.6e-9;

struct PulseSchedule {
    double tau_pulse{10e-6};
    double tau_off{0.0};
    double tau_bin{kDefaultBinWidth};
    std::uint64_t n_pulses{1};

    double tau_per() const { return tau_pulse + tau_off; }
    // Whole bins inside the pulse window; a trailing partial bin is dropped.
    std::size_t bin_count() const;
    void validate() const;
};

// TCSPC-style histogram: counts per bin summed over all pulses.
struct BinnedCounts {
    std::vector<std::uint64_t> counts;
    double bin_width{kDefaultBinWidth};
    std::uint64_t n_pulses{0};

    double bin_start(std::size_t i) const { return static_cast<double>(i) * bin_width; }
    double integration_time() const {
        return static_cast<double>(counts.size()) * bin_width * static_cast<double>(n_pulses);
    }
    // Mean count rate in bin i (counts/s).
    double rate(std::size_t i) const;
    std::vector<double> as_double() const { return {counts.begin(), counts.end()}; }
};

// Count rate in counts/s as a function of time since the pulse start.
using RateFunction = std::function<double(double)>;

// n_pulses times the integral of rate over each bin (5-point Gauss-Legendre).
std::vector<double> expected_counts(const RateFunction& rate, const PulseSchedule& schedule);

// Poisson histogram with per-bin means from expected_counts. The draws come
// from the (seed, stream) substream only.
BinnedCounts simulate_counts(const RateFunction& rate, const PulseSchedule& schedule, std::uint64_t seed,
                             std::uint64_t stream = 0);
BinnedCounts sample_counts(std::span<const double> means, const PulseSchedule& schedule, std::uint64_t seed,
                           std::uint64_t stream = 0);

}  // namespace omc::counting
