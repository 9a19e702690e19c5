#include "omc/numerics/ode.hpp"

#include <boost/numeric/odeint.hpp>

#include "omc/errors.hpp"

namespace omc::numerics {

std::vector<double> integrate_scalar(const std::function<double(double, double)>& f, double t0,
                                     double y0, std::span<const double> times,
                                     const OdeOptions& options) {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 1>;

    std::vector<double> out;
    out.reserve(times.size());
    if (times.empty()) return out;
    detail::require(times.front() >= t0, "integrate_scalar: sample times precede t0");
    for (std::size_t i = 1; i < times.size(); ++i)
        detail::require(times[i] >= times[i - 1], "integrate_scalar: sample times must be sorted");

    auto stepper = odeint::make_dense_output(options.absolute_tol, options.relative_tol,
                                             odeint::runge_kutta_dopri5<State>());
    const auto rhs = [&f](const State& y, State& dydt, double t) { dydt[0] = f(t, y[0]); };

    // integrate_times wants a strictly increasing grid that starts at t0;
    // repeated sample times reuse the value of their first occurrence.
    std::vector<double> grid{t0};
    for (double t : times)
        if (t > grid.back()) grid.push_back(t);

    State y{y0};
    std::vector<double> sampled;
    sampled.reserve(grid.size());
    if (grid.size() > 1)
        odeint::integrate_times(stepper, rhs, y, grid.begin(), grid.end(), options.initial_step,
                                [&sampled](const State& s, double) { sampled.push_back(s[0]); });
    else
        sampled.push_back(y0);
    std::size_t k = 0;
    for (double t : times) {
        while (grid[k] < t) ++k;
        out.push_back(sampled[k]);
    }
    return out;
}

}  // namespace omc::numerics
