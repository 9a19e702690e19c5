#pragma once

#include "omc/core/model.hpp"

namespace omc::presets {

inline constexpr double kTelecomResonanceHz = 193.4e12;
inline constexpr double kWaveguideBetaPerWatt = 15.0e6;  // 15 per microwatt
inline constexpr double kBaseTemperature = 0.063;
inline constexpr double kBaseOccupancy = 4e-4;

// Butt-coupled quasi-2D cavity with eight cross-shield periods, the device
// behind the hot-bath and cooling measurements.
inline Device eight_shield_device() {
    Device d;
    d.cavity = OpticalCavity::from_hz(kTelecomResonanceHz, 1.187e9, 181e6);
    d.mode = MechanicalMode::from_hz(10.02e9, 8.28, 14.54e3, 1.182e6);
    d.eta_cpl = 0.6;
    return d;
}

// Shield-free device used for base-temperature thermalization.
inline Device zero_shield_device() {
    Device d;
    d.cavity = OpticalCavity::from_hz(kTelecomResonanceHz, 1.11e9, 455e6);
    d.mode = MechanicalMode::from_hz(10.238e9, 21.8e3, 0.0, 1.18e6);
    d.eta_cpl = 0.6;
    return d;
}

// Power-law fits of the eight-shield hot bath. beta defaults to zero
// (cavity photons only); pass kWaveguideBetaPerWatt to add waveguide heating.
inline HotBathModel measured_hot_bath(double beta = 0.0) {
    HotBathModel m;
    m.occ_amplitude = 1.1;
    m.occ_exponent = 0.3;
    m.damp_low_amplitude = to_angular(1.1e3);
    m.damp_low_exponent = 0.61;
    m.damp_high_offset = to_angular(23.91e3);
    m.damp_high_amplitude = to_angular(9.01e3);
    m.damp_high_exponent = 0.29;
    m.damp_dephasing = to_angular(14.54e3);
    m.beta = beta;
    m.n_0 = kBaseOccupancy;
    m.t_0 = kBaseTemperature;
    return m;
}

}  // namespace omc::presets
