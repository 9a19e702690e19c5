#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "omc/core/model.hpp"
#include "omc/counting/rates.hpp"
#include "omc/numerics/ode.hpp"

namespace omc::counting {

// Rate equation for the acoustic occupancy while the pump is on:
//   dn/dt = gamma_0 (n_0 - n) + gamma_p(t) (n_p(t) - n) + back-action
// with back-action -gamma_OM n (red), +gamma_OM (n + 1) (blue), none (resonant).
// With bath_rise_tau set, gamma_p and n_p ramp as (1 - e^{-t/tau}) toward their
// steady values. The ramp is a single-exponential stand-in for the unmodelled
// hot-bath build-up.
struct IntraPulseModel {
    double gamma_0{0.0};
    double n_0{0.0};
    double gamma_p{0.0};
    double n_p{0.0};
    double gamma_om{0.0};
    Detuning detuning{Detuning::red};
    std::optional<double> bath_rise_tau;

    double derivative(double t, double n) const;
    // Net damping once the bath is fully on; negative means blue-detuned
    // anti-damping wins and the occupancy grows without bound.
    double total_damping() const;
    double steady_state() const;
    bool unstable() const { return total_damping() <= 0.0; }
    bool constant_coefficients() const { return !bath_rise_tau.has_value(); }
    void validate() const;
};

// Builds the intra-pulse model for a device driven at n_c with its hot bath
// in steady state at that power.
IntraPulseModel make_intra_pulse_model(const Device& device, const HotBathModel& bath, double n_c,
                                       Detuning detuning, std::optional<double> bath_rise_tau = std::nullopt);

// n(t) = n_ss + (n_start - n_ss) e^{-gamma_tot t}; only for constant coefficients.
double relaxation_closed_form(const IntraPulseModel& model, double n_start, double t);

enum class DynamicsMethod { automatic, closed_form, integrate };

struct OccupancyTrajectory {
    std::vector<double> time;
    std::vector<double> occupancy;
    bool unstable{false};
    bool closed_form{false};
    std::string bath_model;  // labels the ramp stand-in when active
};

// Samples n(t) at `times` (non-decreasing, >= 0) starting from n_start at t = 0.
// `automatic` uses the closed form when coefficients are constant.
OccupancyTrajectory pulse_occupancy_dynamics(const IntraPulseModel& model, double n_start,
                                             std::span<const double> times,
                                             DynamicsMethod method = DynamicsMethod::automatic,
                                             const numerics::OdeOptions& ode = {});
// Evenly sampled over [0, duration] with `samples` points.
OccupancyTrajectory pulse_occupancy_dynamics(const IntraPulseModel& model, double n_start, double duration,
                                             std::size_t samples,
                                             DynamicsMethod method = DynamicsMethod::automatic);

// Continuous n(t) on [0, duration]: exact for constant coefficients, otherwise
// a cubic Hermite interpolant of an adaptive integration using the exact slope.
class OccupancyPath {
public:
    OccupancyPath(const IntraPulseModel& model, double n_start, double duration, std::size_t knots = 2049);

    double operator()(double t) const;
    double final_value() const { return (*this)(duration_); }
    bool unstable() const { return model_.unstable(); }

private:
    IntraPulseModel model_;
    double n_start_;
    double duration_;
    std::vector<double> t_, n_;
};

}  // namespace omc::counting
