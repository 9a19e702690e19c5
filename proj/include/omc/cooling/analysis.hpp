#pragma once

#include <optional>
#include <span>
#include <vector>

#include "omc/core/model.hpp"

namespace omc::cooling {

// Sweeps always pump on the red sideband (Delta = omega_m).
struct SweepSpec {
    std::vector<double> n_c;  // strictly increasing, > 0
    std::vector<double> q_c;  // map only; strictly increasing, > 0
    // Replaces the bath model's beta. Maps default to beta = 0 when unset.
    std::optional<double> beta;
    BathOptions bath_options;
    unsigned threads{1};

    void validate(bool need_q_c = false) const;
};

std::vector<double> log_space(double lo, double hi, std::size_t count);

struct CurvePoint {
    double n_c{0.0};
    double p_in{0.0};  // on-chip power in the coupling waveguide (W)
    CoolingResult result;
};

// One composed evaluation: P_in from n_c, bath at x = n_c + beta P_in,
// back-action rate, cooled occupancy.
CurvePoint cooling_point(const Device& device, const HotBathModel& bath, double n_c,
                         const BathOptions& options = {});

std::vector<CurvePoint> cooling_curve(const Device& device, const HotBathModel& bath, const SweepSpec& sweep);

struct CeffCurve {
    std::vector<CurvePoint> points;
    // n_c where C_eff first exceeds 1 (refined between grid points).
    std::optional<double> first_crossing;
    double peak_c_eff{0.0};
    double peak_n_c{0.0};
};

CeffCurve ceff_curve(const Device& device, const HotBathModel& bath, const SweepSpec& sweep);

// Same device with kappa rescaled to the loaded quality q_c at fixed omega_c
// and fixed kappa_e / kappa; g0 unchanged.
Device device_with_quality(const Device& device, double q_c);

struct MapPoint {
    double q_c{0.0};
    CurvePoint point;
};

// Polyline in (q_c, n_c).
struct ContourLine {
    double level{0.0};
    std::vector<std::vector<std::pair<double, double>>> polylines;
};

struct CeffMap {
    std::vector<double> q_c;
    std::vector<double> n_c;
    std::vector<MapPoint> cells;  // q_c-major: index = i_q * n_c.size() + i_n
    std::vector<ContourLine> contours;

    const MapPoint& at(std::size_t i_q, std::size_t i_n) const { return cells.at(i_q * n_c.size() + i_n); }
};

// Dense (Q_c, n_c) map plus iso-C_eff contours at `levels`.
CeffMap ceff_map(const Device& device, const HotBathModel& bath, const SweepSpec& sweep,
                 std::span<const double> levels = {});

}  // namespace omc::cooling
