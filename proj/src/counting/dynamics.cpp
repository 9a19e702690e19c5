#include "omc/counting/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "omc/errors.hpp"

namespace omc::counting {

using detail::require;

namespace {

constexpr const char* kRampLabel =
    "single-exponential hot-bath ramp (phenomenological stand-in, not a derived intra-pulse model)";

double ramp(const IntraPulseModel& m, double t) {
    return m.bath_rise_tau ? -std::expm1(-t / *m.bath_rise_tau) : 1.0;
}

double source(const IntraPulseModel& m) {
    return m.gamma_0 * m.n_0 + m.gamma_p * m.n_p + (m.detuning == Detuning::blue ? m.gamma_om : 0.0);
}

}  // namespace

double IntraPulseModel::derivative(double t, double n) const {
    const double r = ramp(*this, t);
    double dn = gamma_0 * (n_0 - n) + gamma_p * r * (n_p * r - n);
    switch (detuning) {
        case Detuning::red: dn -= gamma_om * n; break;
        case Detuning::blue: dn += gamma_om * (n + 1.0); break;
        case Detuning::resonant: break;
    }
    return dn;
}

double IntraPulseModel::total_damping() const {
    const double backaction =
        detuning == Detuning::red ? gamma_om : (detuning == Detuning::blue ? -gamma_om : 0.0);
    return gamma_0 + gamma_p + backaction;
}

double IntraPulseModel::steady_state() const {
    if (unstable()) throw NumericError("blue-detuned anti-damping exceeds total damping: no steady state");
    return source(*this) / total_damping();
}

void IntraPulseModel::validate() const {
    require(gamma_0 >= 0.0 && gamma_p >= 0.0 && gamma_om >= 0.0, "intra-pulse rates must be non-negative");
    require(n_0 >= 0.0 && n_p >= 0.0, "intra-pulse occupancies must be non-negative");
    require(!bath_rise_tau || *bath_rise_tau > 0.0, "bath_rise_tau must be positive");
}

IntraPulseModel make_intra_pulse_model(const Device& device, const HotBathModel& bath, double n_c,
                                       Detuning detuning, std::optional<double> bath_rise_tau) {
    device.validate();
    const double p_in = input_power_for_photons(device.cavity, detuning_value(detuning, device.mode), n_c);
    const auto state = hot_bath(device.mode, bath, n_c, p_in);
    IntraPulseModel m;
    m.gamma_0 = device.mode.gamma_0;
    m.n_0 = bath.n_0;
    m.gamma_p = state.gamma_p;
    m.n_p = state.n_p;
    m.gamma_om = parametric_rate(device.mode, device.cavity, n_c);
    m.detuning = detuning;
    m.bath_rise_tau = bath_rise_tau;
    m.validate();
    return m;
}

double relaxation_closed_form(const IntraPulseModel& model, double n_start, double t) {
    require(model.constant_coefficients(), "closed form needs constant coefficients");
    const double g = model.total_damping();
    const double s = source(model);
    if (g == 0.0) return n_start + s * t;
    // n_start e^{-g t} + (s / g)(1 - e^{-g t})
    return n_start * std::exp(-g * t) - s * std::expm1(-g * t) / g;
}

OccupancyTrajectory pulse_occupancy_dynamics(const IntraPulseModel& model, double n_start,
                                             std::span<const double> times, DynamicsMethod method,
                                             const numerics::OdeOptions& ode) {
    model.validate();
    require(std::isfinite(n_start) && n_start >= 0.0, "n_start must be non-negative");
    require(std::is_sorted(times.begin(), times.end()), "times must be non-decreasing");
    require(times.empty() || times.front() >= 0.0, "times must be non-negative");

    OccupancyTrajectory out;
    out.time.assign(times.begin(), times.end());
    out.unstable = model.unstable();
    if (model.bath_rise_tau) out.bath_model = kRampLabel;

    const bool closed = method == DynamicsMethod::closed_form ||
                        (method == DynamicsMethod::automatic && model.constant_coefficients());
    if (closed) {
        out.closed_form = true;
        out.occupancy.reserve(times.size());
        for (double t : times) out.occupancy.push_back(relaxation_closed_form(model, n_start, t));
        return out;
    }
    out.occupancy = numerics::integrate_scalar([&model](double t, double n) { return model.derivative(t, n); },
                                               0.0, n_start, times, ode);
    return out;
}

OccupancyTrajectory pulse_occupancy_dynamics(const IntraPulseModel& model, double n_start, double duration,
                                             std::size_t samples, DynamicsMethod method) {
    require(duration >= 0.0, "duration must be non-negative");
    require(samples >= 2, "need at least two samples");
    std::vector<double> times(samples);
    for (std::size_t i = 0; i < samples; ++i)
        times[i] = duration * static_cast<double>(i) / static_cast<double>(samples - 1);
    times.back() = duration;
    return pulse_occupancy_dynamics(model, n_start, times, method);
}

OccupancyPath::OccupancyPath(const IntraPulseModel& model, double n_start, double duration, std::size_t knots)
    : model_(model), n_start_(n_start), duration_(duration) {
    model_.validate();
    require(duration > 0.0, "duration must be positive");
    require(n_start >= 0.0, "n_start must be non-negative");
    if (model_.constant_coefficients()) return;
    knots = std::max<std::size_t>(knots, 3);
    const auto traj = pulse_occupancy_dynamics(model_, n_start, duration, knots, DynamicsMethod::integrate);
    t_ = traj.time;
    n_ = traj.occupancy;
}

double OccupancyPath::operator()(double t) const {
    if (t_.empty()) return relaxation_closed_form(model_, n_start_, t);
    t = std::clamp(t, 0.0, duration_);
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const std::size_t i = std::min<std::size_t>(t_.size() - 2, it == t_.begin() ? 0 : (it - t_.begin()) - 1);
    const double h = t_[i + 1] - t_[i];
    const double s = (t - t_[i]) / h;
    const double d0 = model_.derivative(t_[i], n_[i]) * h;
    const double d1 = model_.derivative(t_[i + 1], n_[i + 1]) * h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * n_[i] + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * n_[i + 1] +
           (s3 - s2) * d1;
}

}  // namespace omc::counting
