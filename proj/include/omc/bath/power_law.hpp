#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "omc/errors.hpp"

namespace omc::bath {

struct DataPoint {
    double x{0.0};
    double y{0.0};
    double sigma{0.0};  // 0 when unknown
};

// y = offset + amplitude * x^exponent (offset absent for a pure power law).
struct PowerLawFit {
    double amplitude{0.0};
    double exponent{0.0};
    std::optional<double> offset;
    double residual_norm{0.0};
    // Parameter covariance in (amplitude, exponent[, offset]) order.
    Eigen::MatrixXd covariance;
    int iterations{0};

    double operator()(double x) const;
};

// Least-squares power law. Without an offset the fit is linear regression of
// ln y on ln x. With an offset it is a damped Gauss-Newton fit in linear space,
// seeded from log-log fits of the upper half of the data. Points without
// sigma are weighted as relative (multiplicative) errors in both modes;
// residual_norm is the root sum of squares of those weighted residuals.
PowerLawFit fit_power_law(std::span<const DataPoint> points, bool with_offset);

}  // namespace omc::bath
