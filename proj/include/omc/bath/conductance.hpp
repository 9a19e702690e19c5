#pragma once

namespace omc::bath {

// Ballistic hot-bath conductance C_th = epsilon T^alpha, so the absorbed power
// eta_abs P_in leaves through P_th = epsilon T_p^(alpha+1).
struct ConductanceModel {
    double epsilon{0.0};  // W / K^(alpha+1)
    double alpha{0.0};
    double eta_abs{1.0};  // absorbed fraction of the input power

    void validate() const;
};

// P_th for a hot bath at t_p. With t_0 > 0 the exact drop Delta T = t_p - t_0
// is used unless t_p > 5 t_0, where Delta T ~ t_p.
double thermal_power(const ConductanceModel& model, double t_p, double t_0 = 0.0);

// Inverse of thermal_power for P_th = eta_abs * p_in.
double bath_temperature_from_power(const ConductanceModel& model, double p_in, double t_0 = 0.0);

// n_p scales as n_c^(1/(alpha+1)) once k_B T_p >> hbar omega_m.
constexpr double occupancy_exponent(double alpha) { return 1.0 / (alpha + 1.0); }

// n_p,1D / n_p,2D = (omega_m,2D / omega_m,1D) (epsilon_2D / epsilon_1D)^(1/(alpha_0+1)),
// from equal absorbed power and the linearised occupancy n ~ k_B T / hbar omega.
double occupancy_ratio_1d_2d(double epsilon_ratio, double alpha_0, double omega_ratio);

}  // namespace omc::bath
