#include "omc/core/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "omc/errors.hpp"
#include "omc/numerics/roots.hpp"

namespace omc {

using detail::require;

namespace {

bool finite(double v) { return std::isfinite(v); }

void require_finite(double v, const char* name) {
    if (!finite(v)) throw ValidationError(std::string(name) + " must be finite");
}

}  // namespace

OpticalCavity OpticalCavity::from_hz(double f_c, double kappa_hz, double kappa_e_hz) {
    OpticalCavity c{to_angular(f_c), to_angular(kappa_hz), to_angular(kappa_e_hz)};
    c.validate();
    return c;
}

OpticalCavity OpticalCavity::from_quality(double omega_c, double q_c, double eta_kappa) {
    require(q_c > 0.0, "optical Q must be positive");
    const double kappa = omega_c / q_c;
    OpticalCavity c{omega_c, kappa, eta_kappa * kappa};
    c.validate();
    return c;
}

void OpticalCavity::validate() const {
    require_finite(omega_c, "cavity.omega_c");
    require_finite(kappa, "cavity.kappa");
    require_finite(kappa_e, "cavity.kappa_e");
    require(omega_c > 0.0, "cavity.omega_c must be positive");
    require(kappa_e > 0.0, "cavity.kappa_e must be positive");
    require(kappa_e <= kappa, "cavity.kappa_e must not exceed cavity.kappa");
}

MechanicalMode MechanicalMode::from_hz(double f_m, double gamma_0_hz, double gamma_phi_hz,
                                       double g_0_hz) {
    MechanicalMode m{to_angular(f_m), to_angular(gamma_0_hz), to_angular(gamma_phi_hz),
                     to_angular(g_0_hz)};
    m.validate();
    return m;
}

void MechanicalMode::validate() const {
    require_finite(omega_m, "mode.omega_m");
    require_finite(gamma_0, "mode.gamma_0");
    require_finite(gamma_phi, "mode.gamma_phi");
    require_finite(g_0, "mode.g_0");
    require(omega_m > 0.0, "mode.omega_m must be positive");
    require(gamma_0 >= 0.0, "mode.gamma_0 must be non-negative");
    require(gamma_phi >= 0.0, "mode.gamma_phi must be non-negative");
    require(g_0 >= 0.0, "mode.g_0 must be non-negative");
}

void DriveCondition::validate(const OpticalCavity& cavity) const {
    require_finite(p_in, "drive.p_in");
    require_finite(detuning, "drive.detuning");
    require_finite(eta_cpl, "drive.eta_cpl");
    require(p_in >= 0.0, "drive.p_in must be non-negative");
    require(eta_cpl > 0.0 && eta_cpl <= 1.0, "drive.eta_cpl must lie in (0, 1]");
    require(pump_frequency(cavity) > 0.0, "pump frequency omega_c - detuning must be positive");
}

void Device::validate() const {
    cavity.validate();
    mode.validate();
    require(eta_cpl > 0.0 && eta_cpl <= 1.0, "device.eta_cpl must lie in (0, 1]");
}

double HotBathModel::occupancy(double x) const {
    if (x <= 0.0) return 0.0;
    return occ_amplitude * std::pow(x, occ_exponent);
}

double HotBathModel::damping_crossover() const {
    if (!has_high_branch()) return std::numeric_limits<double>::infinity();
    const auto difference = [this](double log_x) {
        const double x = std::exp(log_x);
        const double low = damp_dephasing + damp_low_amplitude * std::pow(x, damp_low_exponent);
        const double high = damp_high_offset + damp_high_amplitude * std::pow(x, damp_high_exponent);
        return low - high;
    };
    const auto root = numerics::bracketed_root(difference, std::log(1e-12), std::log(1e24), 1e-15);
    if (!root) return std::numeric_limits<double>::infinity();
    return std::exp(*root);
}

double HotBathModel::damping(double x) const {
    if (x <= 0.0) return 0.0;
    if (x < damping_crossover())
        return damp_low_amplitude * std::pow(x, damp_low_exponent);
    return (damp_high_offset - damp_dephasing) + damp_high_amplitude * std::pow(x, damp_high_exponent);
}

void HotBathModel::validate() const {
    for (auto [v, name] : {std::pair{occ_amplitude, "bath.occ_amplitude"},
                           {occ_exponent, "bath.occ_exponent"},
                           {damp_low_amplitude, "bath.damp_low_amplitude"},
                           {damp_low_exponent, "bath.damp_low_exponent"},
                           {damp_high_offset, "bath.damp_high_offset"},
                           {damp_high_amplitude, "bath.damp_high_amplitude"},
                           {damp_high_exponent, "bath.damp_high_exponent"},
                           {damp_dephasing, "bath.damp_dephasing"},
                           {beta, "bath.beta"},
                           {n_0, "bath.n_0"},
                           {t_0, "bath.t_0"}})
        require_finite(v, name);
    require(occ_amplitude >= 0.0, "bath.occ_amplitude must be non-negative");
    require(damp_low_amplitude >= 0.0, "bath.damp_low_amplitude must be non-negative");
    require(damp_high_amplitude >= 0.0, "bath.damp_high_amplitude must be non-negative");
    require(occ_exponent > 0.0 && occ_exponent < 1.0, "bath.occ_exponent must lie in (0, 1)");
    require(damp_low_exponent > 0.0 && damp_low_exponent < 1.0,
            "bath.damp_low_exponent must lie in (0, 1)");
    require(beta >= 0.0, "bath.beta must be non-negative");
    require(n_0 >= 0.0, "bath.n_0 must be non-negative");
    require(t_0 >= 0.0, "bath.t_0 must be non-negative");
    require(damp_dephasing >= 0.0, "bath.damp_dephasing must be non-negative");
    if (has_high_branch()) {
        require(damp_high_exponent > 0.0 && damp_high_exponent < 1.0,
                "bath.damp_high_exponent must lie in (0, 1)");
        require(damp_high_offset >= damp_dephasing,
                "bath.damp_high_offset must be at least bath.damp_dephasing (gamma_p >= 0 on the high branch)");
    }
}

double intracavity_photons(const OpticalCavity& cavity, const DriveCondition& drive) {
    cavity.validate();
    drive.validate(cavity);
    const double photon_flux = drive.p_in / (kHbar * drive.pump_frequency(cavity));
    const double half_kappa = 0.5 * cavity.kappa;
    return photon_flux * cavity.kappa_e / (drive.detuning * drive.detuning + half_kappa * half_kappa);
}

double input_power_for_photons(const OpticalCavity& cavity, double detuning, double n_c) {
    cavity.validate();
    require_finite(detuning, "detuning");
    require_finite(n_c, "n_c");
    require(n_c >= 0.0, "n_c must be non-negative");
    const double omega_p = cavity.omega_c - detuning;
    require(omega_p > 0.0, "pump frequency omega_c - detuning must be positive");
    const double half_kappa = 0.5 * cavity.kappa;
    return n_c * kHbar * omega_p * (detuning * detuning + half_kappa * half_kappa) / cavity.kappa_e;
}

double parametric_rate(const MechanicalMode& mode, const OpticalCavity& cavity, double n_c) {
    require_finite(n_c, "n_c");
    require(n_c >= 0.0, "n_c must be non-negative");
    require(cavity.kappa > 0.0, "cavity.kappa must be positive");
    return 4.0 * mode.g_0 * mode.g_0 * n_c / cavity.kappa;
}

BathState hot_bath(const MechanicalMode& mode, const HotBathModel& model, double n_c, double p_in,
                   const BathOptions& options) {
    require_finite(n_c, "n_c");
    require_finite(p_in, "p_in");
    require(n_c >= 0.0, "n_c must be non-negative");
    require(p_in >= 0.0, "p_in must be non-negative");

    BathState s;
    s.n_wg = model.beta * p_in;
    s.x_eff = n_c + s.n_wg;
    s.n_p = model.occupancy(s.x_eff);
    s.gamma_p = model.damping(s.x_eff);

    s.heating_flux = mode.gamma_0 * model.n_0 + s.gamma_p * s.n_p;
    s.gamma_b = mode.gamma_0 + s.gamma_p;
    if (options.include_dephasing) {
        s.heating_flux += mode.gamma_phi * s.n_p;
        s.gamma_b += mode.gamma_phi;
    }
    // gamma_b n_b = gamma_0 (n_0 + 1) + gamma_p (n_p + 1). With no bath
    // coupling at all the mode sits at the base occupancy.
    s.n_b = s.gamma_b > 0.0 ? (s.heating_flux + s.gamma_b) / s.gamma_b : model.n_0 + 1.0;
    return s;
}

CoolingResult cooled_occupancy(const MechanicalMode& mode, const BathState& bath, double gamma_om) {
    require_finite(gamma_om, "gamma_om");
    require(gamma_om >= 0.0 && mode.gamma_0 >= 0.0 && bath.gamma_p >= 0.0 && bath.gamma_b >= 0.0,
            "cooled_occupancy: rates must be non-negative");
    // gamma_b == gamma_0 + gamma_p unless the dephasing channel was folded in.
    const double denominator = bath.gamma_b + gamma_om;
    require(denominator > 0.0, "cooled_occupancy: gamma_0 + gamma_om + gamma_p is zero");

    CoolingResult r;
    r.bath = bath;
    r.gamma_om = gamma_om;
    r.n_avg = bath.heating_flux / denominator;
    r.c = bath.gamma_b > 0.0 ? gamma_om / bath.gamma_b : std::numeric_limits<double>::infinity();
    r.c_eff = gamma_om == 0.0 ? 0.0 : r.c / bath.n_b;
    return r;
}

double total_linewidth(const MechanicalMode& mode, const BathState& bath, double gamma_om) {
    return mode.gamma_0 + mode.gamma_phi + bath.gamma_p + gamma_om;
}

double bose_occupancy(double omega, double temperature, TemperatureConversion conversion) {
    require(omega > 0.0, "frequency must be positive");
    require(temperature > 0.0 && std::isfinite(temperature), "temperature must be positive");
    const double ratio = kHbar * omega / (kBoltzmann * temperature);
    if (conversion == TemperatureConversion::linearized) return 1.0 / ratio;
    return 1.0 / std::expm1(ratio);
}

double temperature_from_occupancy(double omega, double occupancy, TemperatureConversion conversion) {
    require(omega > 0.0, "frequency must be positive");
    require(occupancy > 0.0 && std::isfinite(occupancy), "occupancy must be positive");
    const double quantum = kHbar * omega / kBoltzmann;
    if (conversion == TemperatureConversion::linearized) return quantum * occupancy;
    return quantum / std::log1p(1.0 / occupancy);
}

ThermalNoiseSpectrum thermal_noise_spectrum(const MechanicalMode& mode, double linewidth, double n_avg,
                                            std::span<const double> grid_hz) {
    require(!grid_hz.empty(), "thermal_noise_spectrum: frequency grid is empty");
    require(linewidth > 0.0 && std::isfinite(linewidth), "thermal_noise_spectrum: linewidth must be positive");
    require(n_avg >= 0.0 && std::isfinite(n_avg), "thermal_noise_spectrum: n_avg must be non-negative");

    ThermalNoiseSpectrum s;
    s.center_hz = to_hz(mode.omega_m);
    s.fwhm_hz = to_hz(linewidth);
    s.area = n_avg;
    const double half_width = 0.5 * s.fwhm_hz;
    s.frequency_hz.assign(grid_hz.begin(), grid_hz.end());
    s.density.reserve(grid_hz.size());
    for (double f : grid_hz) {
        const double d = f - s.center_hz;
        s.density.push_back(n_avg * (half_width / std::numbers::pi) / (d * d + half_width * half_width));
    }
    std::ostringstream note;
    note.precision(17);
    note << "S(f) = n_avg * (w/pi) / ((f - f_m)^2 + w^2), w = fwhm/2; integral over f equals n_avg"
         << "; n_avg=" << n_avg << " f_m_hz=" << s.center_hz << " fwhm_hz=" << s.fwhm_hz;
    s.normalization = note.str();
    return s;
}

}  // namespace omc
