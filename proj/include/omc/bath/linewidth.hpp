#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "omc/bath/power_law.hpp"
#include "omc/core/model.hpp"

namespace omc::bath {

struct LinewidthFitOptions {
    // Points whose x lies below the first power of ten above min(x) form the
    // saturation plateau.
    std::size_t min_points_per_regime{3};
    // Data that never rises more than this fraction above the plateau is
    // treated as plateau-only.
    double min_rise{0.1};
};

struct PiecewiseLinewidthFit {
    double gamma_phi{0.0};
    bool gamma_phi_is_upper_bound{false};
    std::size_t plateau_points{0};
    std::optional<PowerLawFit> low;   // gamma = gamma_phi + B1 x^q1
    std::optional<PowerLawFit> high;  // gamma = c2 + B2 x^q2
    std::optional<double> crossover;
    std::vector<std::string> warnings;
    std::string decomposition;

    // Fitted total linewidth (composite of the two branches).
    double operator()(double x) const;
    // Damping-law fields of a HotBathModel (occupancy, beta and base bath are
    // left as in `base`).
    HotBathModel to_bath_model(HotBathModel base = {}) const;
};

// Fits the saturation/low/high-power structure of a linewidth-vs-n_c sweep.
// Each candidate split of the sorted data into a low branch (plateau included)
// and a high branch gets two offset power-law fits; the split with the lowest
// total weighted residual wins, and the crossover is where the branches meet.
PiecewiseLinewidthFit fit_piecewise_linewidth(std::span<const DataPoint> points,
                                              const LinewidthFitOptions& options = {});

}  // namespace omc::bath
