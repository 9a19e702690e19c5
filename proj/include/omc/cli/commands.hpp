#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "omc/core/model.hpp"
#include "omc/counting/rates.hpp"
#include "omc/design/design.hpp"
#include "omc/io/config.hpp"

namespace omc::cli {

// Everything a subcommand may read, with SI units (frequencies in Hz at the
// file boundary, converted to rad/s here).
struct RunConfig {
    Device device;
    HotBathModel bath;
    BathOptions bath_options;

    // [sweep]
    double nc_min{0.1}, nc_max{1e4};
    std::size_t nc_count{121};
    double qc_min{1e5}, qc_max{1e7};
    std::size_t qc_count{41};
    std::vector<double> levels{0.5, 1.0, 2.0, 5.0};

    // [photons]
    double p_min_w{1e-9}, p_max_w{1e-3};
    std::size_t p_count{61};
    std::optional<double> photons_detuning_hz;  // default: +f_m

    // [detection]
    counting::DetectionChain chain{0.05, 0.6, 0.0};

    // [pulse]
    double pulse_n_c{10.0};
    double pulse_tau{10e-6};
    double pulse_tau_bin{25.6e-9};
    std::uint64_t pulse_count{1'000'000};
    counting::Detuning pulse_detuning{counting::Detuning::red};
    std::optional<double> pulse_n_start;  // default: bath n_0
    std::optional<double> bath_rise_tau;
    bool pulse_noiseless{false};

    // [ringdown]
    double rd_n_c{60.0};
    double rd_tau_pulse{10e-6};
    double rd_tau_bin{25.6e-9};
    std::uint64_t rd_pulses{10'000'000};
    double rd_tau_off_min{1e-3}, rd_tau_off_max{0.1};
    std::size_t rd_tau_off_count{16};
    bool rd_calibrate{true};
    bool rd_noiseless{false};

    // [optimize]
    std::size_t restarts{8};
    std::size_t max_evaluations{2000};
    double tol_f{1e-4}, tol_x{1e-3}, initial_step{0.1};
    double min_gap{60.0};
    double q_threshold{design::kDefaultQThreshold};
    double target_hz{193.4e12};  // 0 disables rescaling
    double noise_sigma{0.0};

    // [spectrum]
    double spectrum_n_c{100.0};
    double spectrum_span{10.0};  // half-width of the grid in linewidths
    std::size_t spectrum_points{401};

    // [fit]
    std::string fit_kind{"linewidth"};

    std::uint64_t seed{0};
    unsigned threads{1};
};

struct KeyDoc {
    std::string key;
    std::string doc;
};
// Every accepted config key with its unit.
const std::vector<KeyDoc>& config_keys();

// Applies presets, then every key; unknown keys and invalid values throw
// ValidationError naming the key. The result is fully validated.
RunConfig build_config(const io::IniFile& ini);

struct CommandContext {
    RunConfig config;
    std::string command;
    std::string manifest;           // leading '#' line
    std::optional<std::string> input;     // bath-fit / ringdown input CSV
    std::optional<std::string> contours;  // map: contour CSV path
};

void cmd_photons(const CommandContext& ctx, std::ostream& out);
void cmd_cool(const CommandContext& ctx, std::ostream& out);
void cmd_ceff(const CommandContext& ctx, std::ostream& out);
void cmd_map(const CommandContext& ctx, std::ostream& out);
void cmd_bath_fit(const CommandContext& ctx, std::ostream& out);
void cmd_ringdown(const CommandContext& ctx, std::ostream& out);
void cmd_counts(const CommandContext& ctx, std::ostream& out);
void cmd_optimize(const CommandContext& ctx, std::ostream& out);
void cmd_spectrum(const CommandContext& ctx, std::ostream& out);

}  // namespace omc::cli
