#include "omc/bath/conductance.hpp"

#include <cmath>

#include "omc/errors.hpp"
#include "omc/numerics/roots.hpp"

namespace omc::bath {

using detail::require;

void ConductanceModel::validate() const {
    require(std::isfinite(epsilon) && epsilon > 0.0, "conductance epsilon must be positive");
    require(std::isfinite(alpha) && alpha > 0.0, "conductance alpha must be positive");
    require(eta_abs > 0.0 && eta_abs <= 1.0, "conductance eta_abs must lie in (0, 1]");
}

namespace {

bool uses_approximation(double t_p, double t_0) { return t_0 <= 0.0 || t_p > 5.0 * t_0; }

}  // namespace

double thermal_power(const ConductanceModel& model, double t_p, double t_0) {
    model.validate();
    require(t_p >= 0.0 && t_0 >= 0.0, "temperatures must be non-negative");
    if (uses_approximation(t_p, t_0)) return model.epsilon * std::pow(t_p, model.alpha + 1.0);
    return model.epsilon * std::pow(t_p, model.alpha) * (t_p - t_0);
}

double bath_temperature_from_power(const ConductanceModel& model, double p_in, double t_0) {
    model.validate();
    require(std::isfinite(p_in) && p_in >= 0.0, "p_in must be non-negative");
    require(t_0 >= 0.0, "t_0 must be non-negative");
    const double p_th = model.eta_abs * p_in;
    const double approx = std::pow(p_th / model.epsilon, 1.0 / (model.alpha + 1.0));
    if (uses_approximation(approx, t_0)) return approx;

    // epsilon T^alpha (T - T0) = P is increasing in T above T0.
    const auto excess = [&](double t) { return model.epsilon * std::pow(t, model.alpha) * (t - t_0) - p_th; };
    double hi = std::max(approx, t_0) * 2.0 + t_0;
    while (excess(hi) < 0.0) hi *= 2.0;
    const auto root = numerics::bracketed_root(excess, t_0, hi, 1e-15);
    if (!root) throw NumericError("bath temperature root not bracketed");
    return *root;
}

double occupancy_ratio_1d_2d(double epsilon_ratio, double alpha_0, double omega_ratio) {
    require(epsilon_ratio > 0.0 && alpha_0 > 0.0 && omega_ratio > 0.0,
            "occupancy ratio inputs must be positive");
    return omega_ratio * std::pow(epsilon_ratio, 1.0 / (alpha_0 + 1.0));
}

}  // namespace omc::bath
