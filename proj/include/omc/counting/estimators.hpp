#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "omc/core/model.hpp"
#include "omc/counting/rates.hpp"
#include "omc/counting/simulate.hpp"
#include "omc/numerics/least_squares.hpp"

namespace omc::counting {

struct Sb0Calibration {
    double sb0{0.0};
    double sigma{0.0};
    bool low_snr{false};
    std::size_t bins_used{0};
};

// Gamma_SB0 from the first `early_bins` bins of blue-detuned pulses that start
// near the ground state: (early rate - backgrounds) / (1 + n_start).
Sb0Calibration calibrate_sb0(std::span<const double> counts, double bin_width, std::uint64_t n_pulses,
                             const DetectionChain& chain, std::size_t early_bins = 1, double n_start = 0.0);
Sb0Calibration calibrate_sb0(const BinnedCounts& counts, const DetectionChain& chain, std::size_t early_bins = 1,
                             double n_start = 0.0);

struct OccupancyEstimate {
    double n{0.0};
    double sigma{0.0};
    bool low_snr{false};  // backgrounds at or above the sideband signal
};

// n = (Gamma - bg) / rate_per_phonon, minus 1 for blue detuning. `counts` were
// collected over `exposure` seconds (bin width x bins x pulses).
OccupancyEstimate occupancy_from_counts(double counts, double exposure, double rate_per_phonon,
                                        const DetectionChain& chain, Detuning detuning);

struct BaseOccupancyOptions {
    // Fewer resolved bins than this inside 1/relaxation-rate yields a bound.
    double min_resolved_bins{3.0};
    TemperatureConversion conversion{TemperatureConversion::exact};
};

struct BaseOccupancyResult {
    double n_0{0.0};
    double n_0_sigma{0.0};
    double t_0{0.0};
    bool is_upper_bound{false};
    double n_ss{0.0};
    double relaxation_rate{0.0};
    int iterations{0};
    std::vector<std::string> warnings;
};

// Fits red-detuned pulse histograms with the bin-averaged relaxation
// n(t) = n_ss + (n_0 - n_ss) e^{-r t} (Poisson-weighted), extrapolates to
// t = 0, and converts n_0 to a temperature.
BaseOccupancyResult estimate_base_occupancy(std::span<const double> counts, double bin_width,
                                            std::uint64_t n_pulses, double rate_per_phonon,
                                            const DetectionChain& chain, double omega_m,
                                            const BaseOccupancyOptions& options = {});
BaseOccupancyResult estimate_base_occupancy(const BinnedCounts& counts, double rate_per_phonon,
                                            const DetectionChain& chain, double omega_m,
                                            const BaseOccupancyOptions& options = {});

struct G0Estimate {
    double g_0{0.0};
    double g_0_sigma{0.0};
    numerics::LinearFit line;  // linewidth (rad/s) vs n_c
};

// Linewidth grows as 4 g0^2 n_c / kappa in the back-action-dominated regime;
// g0 = sqrt(slope kappa / 4).
G0Estimate g0_from_backaction_slope(std::span<const double> n_c, std::span<const double> linewidth,
                                    const OpticalCavity& cavity, std::span<const double> sigma = {});

}  // namespace omc::counting
