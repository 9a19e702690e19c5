#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "omc/design/design.hpp"
#include "omc/units.hpp"

namespace omc::design {

// Cheap stand-in for the FEM mode solver with the same contract.
//
// g0(x) = max_k G_k / (1 + sum_i ((x_i - c_ki) / s_ki)^2) over three wells, so
// each well owns a basin. The global well's centre sits 30 nm beyond the
// h_oc - h_ic = 60 face; its constrained optimum is on that face (see
// known_optimum). omega_o = target * d_ref / d (exactly inverse-length),
// omega_m = omega_m_ref * h_ic_ref / h_ic, q_scat = q_peak exp(-((w_oc - w_ref)/80)^2)
// drops below the filter threshold far from w_ref, and designs with
// w_o > failure_w_o fail to solve.
struct SurrogateWell {
    DesignVector center;
    DesignVector width;
    double depth{0.0};  // rad/s
};

struct SurrogateOptions {
    double target_omega{kTwoPi * 193.4e12};
    double omega_m_ref{kTwoPi * 10.0e9};
    double d_ref{500.0};
    double h_ic_ref{200.0};
    double q_peak{2.1e7};
    double w_oc_ref{450.0};
    double q_width{80.0};
    double failure_w_o{660.0};
    // Multiplicative Gaussian noise on g0 (relative sigma), a deterministic
    // function of (design, noise_seed).
    double noise_sigma{0.0};
    std::uint64_t noise_seed{0};
};

class SurrogateFitness {
public:
    explicit SurrogateFitness(SurrogateOptions options = {});
    SurrogateFitness(SurrogateOptions options, std::vector<SurrogateWell> wells);

    std::optional<ModeSolution> operator()(const DesignVector& x) const;

    const std::vector<SurrogateWell>& wells() const { return wells_; }
    const SurrogateOptions& options() const { return options_; }
    // Index of the well whose term is largest at x.
    std::size_t basin_of(const DesignVector& x) const;
    // Constrained optimum of the noiseless global well and its g0.
    DesignVector known_optimum() const;
    double known_optimum_g0() const;

private:
    double well_value(std::size_t k, const DesignVector& x) const;

    SurrogateOptions options_;
    std::vector<SurrogateWell> wells_;
};

// Convex test function: g0 = g_peak - sum_i a_i ((x_i - c_i)/scale)^2 with
// g_peak large enough that g0 > 0 on the box, so F = -|g0| is a convex
// quadratic. g_peak stays small so the quadratic term is resolvable in double
// precision near the optimum. Constant q_scat and omega_o = target.
struct QuadraticSurrogate {
    DesignVector center;
    std::array<double, kDesignDim> curvature{1, 1, 1, 1, 1, 1, 1, 1, 1};
    double scale{100.0};
    double g_peak{1e3};
    double q_scat{1e7};
    double omega_o{kTwoPi * 193.4e12};

    std::optional<ModeSolution> operator()(const DesignVector& x) const;
};

}  // namespace omc::design
