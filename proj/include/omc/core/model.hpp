#pragma once

#include <span>
#include <string>
#include <vector>

#include "omc/units.hpp"

namespace omc {

// All rates below are angular (rad/s); powers in W; temperatures in K.

struct OpticalCavity {
    double omega_c{0.0};  // optical resonance
    double kappa{0.0};    // total energy decay rate
    double kappa_e{0.0};  // extrinsic (coupling-waveguide) decay rate

    static OpticalCavity from_hz(double f_c, double kappa_hz, double kappa_e_hz);
    // Loaded Q_c at fixed resonance and fixed extrinsic fraction eta_kappa.
    static OpticalCavity from_quality(double omega_c, double q_c, double eta_kappa);

    double kappa_i() const { return kappa - kappa_e; }
    double eta_kappa() const { return kappa_e / kappa; }
    double q_c() const { return omega_c / kappa; }
    double q_ci() const { return omega_c / kappa_i(); }

    void validate() const;
};

struct MechanicalMode {
    double omega_m{0.0};    // acoustic resonance
    double gamma_0{0.0};    // intrinsic energy decay
    double gamma_phi{0.0};  // pure dephasing
    double g_0{0.0};        // vacuum optomechanical coupling

    static MechanicalMode from_hz(double f_m, double gamma_0_hz, double gamma_phi_hz, double g_0_hz);

    double q_m() const { return omega_m / gamma_0; }

    void validate() const;
};

struct DriveCondition {
    double p_in{0.0};      // on-chip power in the coupling waveguide
    double detuning{0.0};  // omega_c - omega_p
    double eta_cpl{1.0};   // single-pass fiber-to-waveguide efficiency

    double pump_frequency(const OpticalCavity& cavity) const { return cavity.omega_c - detuning; }

    void validate(const OpticalCavity& cavity) const;
};

// Optical-absorption hot bath, parameterised by the effective photon number
// x = n_c + beta * P_in that drives it.
//
// Occupancy: n_p(x) = A x^p.
// Damping: the measured linewidth has two power-law branches,
//   low:  gamma_phi + B1 x^q1
//   high: c2        + B2 x^q2
// and gamma_p is the linewidth minus gamma_phi, switching branches where the
// two linewidth curves intersect (x*). The composite is continuous there.
struct HotBathModel {
    double occ_amplitude{0.0};         // A
    double occ_exponent{0.0};          // p
    double damp_low_amplitude{0.0};    // B1 (rad/s)
    double damp_low_exponent{0.0};     // q1
    double damp_high_offset{0.0};      // c2 (rad/s); 0 together with B2 = 0 disables the branch
    double damp_high_amplitude{0.0};   // B2 (rad/s)
    double damp_high_exponent{0.0};    // q2
    double damp_dephasing{0.0};        // gamma_phi the linewidth law was decomposed against (rad/s)
    double beta{0.0};                  // waveguide heating, photons per W of on-chip power
    double n_0{4e-4};                  // base bath occupancy
    double t_0{0.063};                 // base temperature (K)

    bool has_high_branch() const { return damp_high_amplitude > 0.0 || damp_high_offset > 0.0; }

    double occupancy(double x) const;
    double damping(double x) const;
    // Intersection of the two linewidth branches; +inf without a high branch
    // or when the low branch stays below it everywhere.
    double damping_crossover() const;
    // gamma_phi + gamma_p(x): the resonant-drive linewidth law itself.
    double linewidth_law(double x) const { return damp_dephasing + damping(x); }

    void validate() const;
};

struct BathOptions {
    // Count gamma_phi as an extra bath channel at the hot-bath occupancy when
    // aggregating gamma_b and n_b. Off by default.
    bool include_dephasing{false};
};

struct BathState {
    double x_eff{0.0};     // n_c + n_wg
    double n_wg{0.0};      // beta * P_in
    double n_p{0.0};
    double gamma_p{0.0};
    double n_b{0.0};       // total effective bath occupancy (includes the spontaneous +1)
    double gamma_b{0.0};
    double heating_flux{0.0};  // gamma_b * (n_b - 1): gamma_0 n_0 + gamma_p n_p (+ dephasing channel)
};

struct CoolingResult {
    double gamma_om{0.0};
    double n_avg{0.0};
    double c{0.0};      // gamma_om / gamma_b
    double c_eff{0.0};  // c / n_b
    BathState bath;
};

// Cavity, acoustic mode and fiber coupling of one physical device.
struct Device {
    OpticalCavity cavity;
    MechanicalMode mode;
    double eta_cpl{1.0};

    void validate() const;
};

double intracavity_photons(const OpticalCavity& cavity, const DriveCondition& drive);
double input_power_for_photons(const OpticalCavity& cavity, double detuning, double n_c);

// gamma_OM = 4 g0^2 n_c / kappa
double parametric_rate(const MechanicalMode& mode, const OpticalCavity& cavity, double n_c);

BathState hot_bath(const MechanicalMode& mode, const HotBathModel& model, double n_c, double p_in,
                   const BathOptions& options = {});

CoolingResult cooled_occupancy(const MechanicalMode& mode, const BathState& bath, double gamma_om);

// gamma_0 + gamma_phi + gamma_p + gamma_om
double total_linewidth(const MechanicalMode& mode, const BathState& bath, double gamma_om);

enum class TemperatureConversion {
    exact,       // Bose-Einstein
    linearized,  // k_B T / (hbar omega), valid for k_B T >> hbar omega
};

double bose_occupancy(double omega, double temperature,
                      TemperatureConversion conversion = TemperatureConversion::exact);
double temperature_from_occupancy(double omega, double occupancy,
                                  TemperatureConversion conversion = TemperatureConversion::exact);

struct ThermalNoiseSpectrum {
    std::vector<double> frequency_hz;
    std::vector<double> density;  // per Hz
    double center_hz{0.0};
    double fwhm_hz{0.0};
    double area{0.0};             // integral over all frequency == n_avg
    std::string normalization;
};

// Lorentzian summary of the heterodyne thermal-noise peak: centred at
// omega_m, full width `linewidth`, integrated area n_avg.
ThermalNoiseSpectrum thermal_noise_spectrum(const MechanicalMode& mode, double linewidth, double n_avg,
                                            std::span<const double> grid_hz);

}  // namespace omc
