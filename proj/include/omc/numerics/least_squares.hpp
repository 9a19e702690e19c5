#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "omc/errors.hpp"

namespace omc::numerics {

// Fills the weighted residual vector r(p). When `jacobian` is non-null the
// callee may fill it with dr/dp; leaving it empty (0x0) requests a
// finite-difference Jacobian.
using ResidualFn =
    std::function<void(const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* jacobian)>;

struct DampedGaussNewtonOptions {
    int max_iterations{200};
    double initial_damping{1e-3};
    double relative_step_tol{1e-12};
    double relative_cost_tol{1e-15};
    double gradient_tol{1e-14};
    double fd_relative_step{1e-7};
    // Called after each accepted step; returning false rejects p (e.g. to keep
    // an exponent inside its domain). Rejected steps raise the damping.
    std::function<bool(const Eigen::VectorXd&)> admissible;
};

struct DampedGaussNewtonResult {
    Eigen::VectorXd params;
    Eigen::VectorXd residuals;
    Eigen::MatrixXd jacobian;
    double cost{0.0};  // 0.5 * |r|^2
    int iterations{0};
    bool converged{false};
    std::vector<IterationRecord> trace;

    // (J^T J)^-1, optionally scaled by the reduced chi-square.
    Eigen::MatrixXd covariance(bool scale_by_reduced_chi2) const;
};

// Levenberg-Marquardt style damped Gauss-Newton on 0.5*|r(p)|^2.
DampedGaussNewtonResult damped_gauss_newton(const ResidualFn& residual, Eigen::VectorXd p0,
                                            const DampedGaussNewtonOptions& options = {});

struct LinearFit {
    double slope{0.0};
    double intercept{0.0};
    double slope_sigma{0.0};
    double intercept_sigma{0.0};
    double covariance{0.0};  // cov(slope, intercept)
    double chi2{0.0};
    std::size_t points{0};
};

// Weighted least-squares straight line. Empty weights mean unit weights; the
// parameter uncertainties are then scaled by the residual variance.
LinearFit fit_line(std::span<const double> x, std::span<const double> y,
                   std::span<const double> weights = {});

}  // namespace omc::numerics
