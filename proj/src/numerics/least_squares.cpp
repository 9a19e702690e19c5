#include "omc/numerics/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace omc::numerics {
namespace {

void evaluate(const ResidualFn& fn, const Eigen::VectorXd& p, Eigen::VectorXd& r,
              Eigen::MatrixXd& jac, double fd_step) {
    jac.resize(0, 0);
    fn(p, r, &jac);
    if (jac.size() != 0) return;

    const auto n = p.size();
    jac.resize(r.size(), n);
    Eigen::VectorXd rp, rm, shifted = p;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double h = fd_step * std::max(std::abs(p[j]), 1e-6);
        shifted[j] = p[j] + h;
        fn(shifted, rp, nullptr);
        shifted[j] = p[j] - h;
        fn(shifted, rm, nullptr);
        shifted[j] = p[j];
        jac.col(j) = (rp - rm) / (2.0 * h);
    }
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

Eigen::MatrixXd DampedGaussNewtonResult::covariance(bool scale_by_reduced_chi2) const {
    const Eigen::MatrixXd jtj = jacobian.transpose() * jacobian;
    Eigen::MatrixXd cov = jtj.completeOrthogonalDecomposition().pseudoInverse();
    if (scale_by_reduced_chi2) {
        const auto dof = residuals.size() - params.size();
        if (dof > 0) cov *= residuals.squaredNorm() / static_cast<double>(dof);
    }
    return cov;
}

DampedGaussNewtonResult damped_gauss_newton(const ResidualFn& residual, Eigen::VectorXd p0,
                                            const DampedGaussNewtonOptions& options) {
    DampedGaussNewtonResult out;
    Eigen::VectorXd p = std::move(p0);
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    evaluate(residual, p, r, jac, options.fd_relative_step);
    if (!all_finite(r)) throw FitError("residuals are not finite at the initial guess");

    double cost = 0.5 * r.squaredNorm();
    double lambda = options.initial_damping;
    const auto record = [&](int it) {
        out.trace.push_back({it, cost, lambda, std::vector<double>(p.data(), p.data() + p.size())});
    };
    record(0);

    int it = 0;
    for (; it < options.max_iterations; ++it) {
        if (cost == 0.0) {
            out.converged = true;
            break;
        }
        const Eigen::VectorXd grad = jac.transpose() * r;
        if (grad.lpNorm<Eigen::Infinity>() <= options.gradient_tol * std::max(cost, 1e-300)) {
            out.converged = true;
            break;
        }
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        Eigen::VectorXd diag = jtj.diagonal();
        const double diag_floor = std::max(diag.maxCoeff(), 1e-300) * 1e-12;
        for (Eigen::Index i = 0; i < diag.size(); ++i) diag[i] = std::max(diag[i], diag_floor);

        bool accepted = false;
        bool small_step = false;
        for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
            Eigen::MatrixXd a = jtj;
            a.diagonal() += lambda * diag;
            Eigen::VectorXd step = a.ldlt().solve(-grad);
            if (!all_finite(step)) step = a.completeOrthogonalDecomposition().solve(-grad);

            const Eigen::VectorXd candidate = p + step;
            small_step = step.norm() <= options.relative_step_tol * (p.norm() + options.relative_step_tol);

            Eigen::VectorXd r_new;
            bool ok = all_finite(candidate) && (!options.admissible || options.admissible(candidate));
            if (ok) {
                residual(candidate, r_new, nullptr);
                ok = all_finite(r_new);
            }
            const double new_cost = ok ? 0.5 * r_new.squaredNorm() : std::numeric_limits<double>::infinity();
            if (ok && new_cost <= cost) {
                const double drop = cost - new_cost;
                p = candidate;
                evaluate(residual, p, r, jac, options.fd_relative_step);
                cost = 0.5 * r.squaredNorm();
                lambda = std::max(lambda / 10.0, 1e-15);
                accepted = true;
                if (drop <= options.relative_cost_tol * cost || small_step) out.converged = true;
            } else {
                lambda *= 10.0;
                if (small_step) break;
            }
        }
        record(it + 1);
        if (!accepted) {
            // No downhill step exists at any damping: p is a stationary point to
            // working precision.
            out.converged = small_step || lambda > 1e20;
            break;
        }
        if (out.converged) break;
    }

    out.params = p;
    out.residuals = r;
    out.jacobian = jac;
    out.cost = cost;
    out.iterations = it;
    return out;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y,
                   std::span<const double> weights) {
    detail::require(x.size() == y.size(), "fit_line: x and y sizes differ");
    detail::require(weights.empty() || weights.size() == x.size(), "fit_line: weight size mismatch");
    detail::require(x.size() >= 2, "fit_line: need at least two points");

    double sw = 0, sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        sw += w;
        sx += w * x[i];
        sy += w * y[i];
    }
    const double xm = sx / sw, ym = sy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        sxx += w * (x[i] - xm) * (x[i] - xm);
        sxy += w * (x[i] - xm) * (y[i] - ym);
    }
    if (!(sxx > 0.0)) throw ValidationError("fit_line: all x values are equal");

    LinearFit fit;
    fit.points = x.size();
    fit.slope = sxy / sxx;
    fit.intercept = ym - fit.slope * xm;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        const double e = y[i] - fit.intercept - fit.slope * x[i];
        fit.chi2 += w * e * e;
    }
    double var_slope = 1.0 / sxx;
    double var_intercept = 1.0 / sw + xm * xm / sxx;
    double cov = -xm / sxx;
    if (weights.empty()) {
        const double s2 = x.size() > 2 ? fit.chi2 / static_cast<double>(x.size() - 2) : 0.0;
        var_slope *= s2;
        var_intercept *= s2;
        cov *= s2;
    }
    fit.slope_sigma = std::sqrt(var_slope);
    fit.intercept_sigma = std::sqrt(var_intercept);
    fit.covariance = cov;
    return fit;
}

}  // namespace omc::numerics
