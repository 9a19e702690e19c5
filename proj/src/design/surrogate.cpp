#include "omc/design/surrogate.hpp"

#include <bit>
#include <cmath>

#include "omc/errors.hpp"
#include "omc/numerics/rng.hpp"

namespace omc::design {

namespace {

std::vector<SurrogateWell> default_wells() {
    const DesignVector width{60, 80, 80, 80, 80, 80, 80, 80, 80};
    return {
        // Global well; its centre has h_oc - h_ic = 30, beyond the 60 nm face.
        {{500, 180, 220, 330, 480, 190, 240, 220, 450}, width, to_angular(1.4e6)},
        {{500, 130, 150, 420, 420, 140, 330, 400, 420}, width, to_angular(1.2e6)},
        {{500, 250, 320, 450, 600, 260, 150, 450, 480}, width, to_angular(1.0e6)},
    };
}

// Standard normal deviate fixed by the design's bit pattern and the seed.
double hashed_normal(const DesignVector& x, std::uint64_t seed) {
    std::uint64_t h = mix64(seed ^ 0x5bd1e995ULL);
    for (double v : x.to_array()) h = mix64(h ^ std::bit_cast<std::uint64_t>(v));
    const std::uint64_t h2 = mix64(h ^ 0x9e3779b97f4a7c15ULL);
    const double u1 = (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = static_cast<double>(h2 >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace

SurrogateFitness::SurrogateFitness(SurrogateOptions options) : SurrogateFitness(options, default_wells()) {}

SurrogateFitness::SurrogateFitness(SurrogateOptions options, std::vector<SurrogateWell> wells)
    : options_(options), wells_(std::move(wells)) {
    detail::require(!wells_.empty(), "surrogate needs at least one well");
    detail::require(options_.noise_sigma >= 0.0, "noise sigma must be non-negative");
    for (const auto& w : wells_)
        for (double s : w.width.to_array()) detail::require(s > 0.0, "well widths must be positive");
}

double SurrogateFitness::well_value(std::size_t k, const DesignVector& x) const {
    const auto& w = wells_[k];
    const auto v = x.to_array(), c = w.center.to_array(), s = w.width.to_array();
    double r2 = 0.0;
    for (std::size_t i = 0; i < kDesignDim; ++i) r2 += ((v[i] - c[i]) / s[i]) * ((v[i] - c[i]) / s[i]);
    return w.depth / (1.0 + r2);
}

std::size_t SurrogateFitness::basin_of(const DesignVector& x) const {
    std::size_t best = 0;
    for (std::size_t k = 1; k < wells_.size(); ++k)
        if (well_value(k, x) > well_value(best, x)) best = k;
    return best;
}

std::optional<ModeSolution> SurrogateFitness::operator()(const DesignVector& x) const {
    if (x.w_o > options_.failure_w_o || !(x.d > 0.0) || !(x.h_ic > 0.0)) return std::nullopt;
    ModeSolution s;
    s.omega_o = options_.target_omega * options_.d_ref / x.d;
    s.omega_m = options_.omega_m_ref * options_.h_ic_ref / x.h_ic;
    s.g0 = well_value(basin_of(x), x);
    if (options_.noise_sigma > 0.0) s.g0 *= 1.0 + options_.noise_sigma * hashed_normal(x, options_.noise_seed);
    const double dq = (x.w_oc - options_.w_oc_ref) / options_.q_width;
    s.q_scat = options_.q_peak * std::exp(-dq * dq);
    return s;
}

DesignVector SurrogateFitness::known_optimum() const {
    // Minimise the scaled distance to the global centre on h_oc - h_ic = 60.
    const auto& w = wells_.front();
    DesignVector x = w.center;
    const double deficit = 60.0 - (w.center.h_oc - w.center.h_ic);
    if (deficit > 0.0) {
        const double s1 = w.width.h_ic * w.width.h_ic, s2 = w.width.h_oc * w.width.h_oc;
        x.h_ic -= deficit * s1 / (s1 + s2);
        x.h_oc += deficit * s2 / (s1 + s2);
    }
    return x;
}

double SurrogateFitness::known_optimum_g0() const { return well_value(0, known_optimum()); }

std::optional<ModeSolution> QuadraticSurrogate::operator()(const DesignVector& x) const {
    const auto v = x.to_array(), c = center.to_array();
    double q = 0.0;
    for (std::size_t i = 0; i < kDesignDim; ++i) q += curvature[i] * ((v[i] - c[i]) / scale) * ((v[i] - c[i]) / scale);
    ModeSolution s;
    s.omega_o = omega_o;
    s.omega_m = to_angular(10e9);
    s.g0 = g_peak - q;
    s.q_scat = q_scat;
    return s;
}

}  // namespace omc::design
