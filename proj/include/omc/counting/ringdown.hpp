#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "omc/core/model.hpp"
#include "omc/counting/rates.hpp"
#include "omc/counting/simulate.hpp"

namespace omc::counting {

struct RingdownPoint {
    double tau_off{0.0};
    double n_i{0.0};
    double n_i_sigma{0.0};  // 0 when noiseless
    double n_f{0.0};
};

struct RingdownConfig {
    Device device;
    HotBathModel bath;
    DetectionChain chain;
    double n_c_peak{60.0};
    double tau_pulse{10e-6};
    double tau_bin{kDefaultBinWidth};
    std::uint64_t n_pulses{10'000'000};
    std::vector<double> tau_off;
    std::optional<double> bath_rise_tau;
    // Calibrate Gamma_SB0 from blue-detuned pulses; otherwise use the true value.
    bool calibrate_with_blue{true};
    // Use expected counts instead of Poisson draws.
    bool noiseless{false};
    unsigned threads{1};

    void validate() const;
};

struct RingdownDataset {
    std::vector<RingdownPoint> points;
    double omega_m{0.0};
    double sb0_true{0.0};
    double sb0_used{0.0};
    // Generator values per point (periodic steady state), same order.
    std::vector<double> n_i_true, n_f_true;
    std::string bath_model;
};

// Red-detuned pulse pairs at every tau_off. Each point is the periodic steady
// state of pulse heating followed by free decay toward n_0 at gamma_0; n_i and
// n_f are re-estimated from the first and last bins of the simulated histogram.
// Point k draws from substream k + 1 (substream 0 is the blue calibration).
RingdownDataset simulate_ringdown(const RingdownConfig& config, std::uint64_t seed);

struct RingdownResult {
    double gamma_0_hat{0.0};
    double gamma_0_sigma{0.0};
    double gamma_0_ci_low{0.0};
    double gamma_0_ci_high{0.0};
    double q_m_hat{0.0};
    double q_m_ci_low{0.0};
    double q_m_ci_high{0.0};
    double amplitude{0.0};
    double offset{0.0};
    double chi2{0.0};
    int iterations{0};
    std::vector<RingdownPoint> points;
};

// Weighted fit of n_i = offset + amplitude e^{-gamma_0 tau_off}. Uses n_i_sigma
// as weights when every point has one; confidence intervals are two-sided at
// `confidence` with Student-t quantiles.
RingdownResult fit_ringdown(std::span<const RingdownPoint> points, double omega_m, double confidence = 0.95);

}  // namespace omc::counting
