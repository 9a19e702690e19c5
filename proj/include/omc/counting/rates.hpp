#pragma once

#include <string_view>

#include "omc/core/model.hpp"

namespace omc::counting {

// Pump detuning relative to the cavity, Delta = omega_c - omega_p.
enum class Detuning {
    resonant,  // Delta = 0
    red,       // Delta = +omega_m, anti-Stokes readout
    blue,      // Delta = -omega_m, Stokes readout
};

std::string_view to_string(Detuning detuning);
Detuning parse_detuning(std::string_view text);
double detuning_value(Detuning detuning, const MechanicalMode& mode);
// Maps an angular detuning onto one of the three supported cases; anything
// else (beyond a 1e-9 relative tolerance) is rejected.
Detuning classify_detuning(double detuning, const MechanicalMode& mode);

struct DetectionChain {
    double eta_det{1.0};          // off-chip detection efficiency incl. detector QE
    double dark_rate{0.0};        // counts/s
    double pump_bleed_rate{0.0};  // counts/s

    double background() const { return dark_rate + pump_bleed_rate; }
    void validate() const;
};

// Gamma_SB0 = eta_det eta_cpl eta_kappa gamma_OM: detected sideband photons
// per second per phonon at Delta = +-omega_m.
double sideband_rate_per_phonon(const DetectionChain& chain, const Device& device, double gamma_om);

// Count rate per phonon for the given case; at Delta = 0 the sideband is
// suppressed by (kappa / 2 omega_m)^2.
double per_phonon_rate(const DetectionChain& chain, const Device& device, double gamma_om,
                       Detuning detuning);

// Detected count rate (counts/s) for occupancy n_avg, backgrounds included.
// Red:  bg + Gamma_SB0 n; blue: bg + Gamma_SB0 (n + 1); resonant:
// bg + eta (kappa / 2 omega_m)^2 gamma_OM n.
double sideband_count_rate(const DetectionChain& chain, const Device& device, double gamma_om,
                           double n_avg, Detuning detuning);

}  // namespace omc::counting
