#pragma once

#include <functional>
#include <span>
#include <vector>

namespace omc::numerics {

struct OdeOptions {
    double relative_tol{1e-9};
    double absolute_tol{1e-14};
    double initial_step{1e-9};
};

// Integrates the scalar ODE dy/dt = f(t, y) from (t0, y0) with an adaptive
// Dormand-Prince 5(4) stepper and returns y at each requested time. `times`
// must be non-decreasing and start at or after t0.
std::vector<double> integrate_scalar(const std::function<double(double, double)>& f, double t0,
                                     double y0, std::span<const double> times,
                                     const OdeOptions& options = {});

}  // namespace omc::numerics
