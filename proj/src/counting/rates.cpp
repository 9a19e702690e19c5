#include "omc/counting/rates.hpp"

#include <cmath>
#include <string>

#include "omc/errors.hpp"

namespace omc::counting {

using detail::require;

std::string_view to_string(Detuning detuning) {
    switch (detuning) {
        case Detuning::resonant: return "resonant";
        case Detuning::red: return "red";
        case Detuning::blue: return "blue";
    }
    throw ValidationError("invalid detuning case");
}

Detuning parse_detuning(std::string_view text) {
    if (text == "resonant" || text == "0") return Detuning::resonant;
    if (text == "red") return Detuning::red;
    if (text == "blue") return Detuning::blue;
    throw ValidationError("invalid detuning case '" + std::string(text) + "' (expected resonant, red or blue)");
}

double detuning_value(Detuning detuning, const MechanicalMode& mode) {
    switch (detuning) {
        case Detuning::resonant: return 0.0;
        case Detuning::red: return mode.omega_m;
        case Detuning::blue: return -mode.omega_m;
    }
    throw ValidationError("invalid detuning case");
}

Detuning classify_detuning(double detuning, const MechanicalMode& mode) {
    const double tol = 1e-9 * mode.omega_m;
    if (std::abs(detuning) <= tol) return Detuning::resonant;
    if (std::abs(detuning - mode.omega_m) <= tol) return Detuning::red;
    if (std::abs(detuning + mode.omega_m) <= tol) return Detuning::blue;
    throw ValidationError("detuning must be 0 or +-omega_m for sideband counting");
}

void DetectionChain::validate() const {
    require(eta_det > 0.0 && eta_det <= 1.0, "eta_det must lie in (0, 1]");
    require(std::isfinite(dark_rate) && dark_rate >= 0.0, "dark_rate must be non-negative");
    require(std::isfinite(pump_bleed_rate) && pump_bleed_rate >= 0.0, "pump_bleed_rate must be non-negative");
}

double sideband_rate_per_phonon(const DetectionChain& chain, const Device& device, double gamma_om) {
    chain.validate();
    device.validate();
    require(gamma_om >= 0.0, "gamma_om must be non-negative");
    return chain.eta_det * device.eta_cpl * device.cavity.eta_kappa() * gamma_om;
}

double per_phonon_rate(const DetectionChain& chain, const Device& device, double gamma_om, Detuning detuning) {
    const double sb0 = sideband_rate_per_phonon(chain, device, gamma_om);
    switch (detuning) {
        case Detuning::red:
        case Detuning::blue: return sb0;
        case Detuning::resonant: {
            const double s = device.cavity.kappa / (2.0 * device.mode.omega_m);
            return sb0 * s * s;
        }
    }
    throw ValidationError("invalid detuning case");
}

double sideband_count_rate(const DetectionChain& chain, const Device& device, double gamma_om, double n_avg,
                           Detuning detuning) {
    require(std::isfinite(n_avg) && n_avg >= 0.0, "n_avg must be non-negative");
    const double per_phonon = per_phonon_rate(chain, device, gamma_om, detuning);
    const double spontaneous = detuning == Detuning::blue ? 1.0 : 0.0;
    return chain.background() + per_phonon * (n_avg + spontaneous);
}

}  // namespace omc::counting
