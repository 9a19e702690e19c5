#include "omc/numerics/roots.hpp"

#include <cmath>
#include <cstdint>

#include <boost/math/tools/roots.hpp>

namespace omc::numerics {

std::optional<double> bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                                     double relative_tol) {
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (!std::isfinite(flo) || !std::isfinite(fhi) || std::signbit(flo) == std::signbit(fhi))
        return std::nullopt;
    std::uintmax_t max_iter = 200;
    const auto tol = [relative_tol](double a, double b) {
        return std::abs(b - a) <= relative_tol * std::min(std::abs(a), std::abs(b));
    };
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
    return 0.5 * (a + b);
}

std::optional<double> first_root_log(const std::function<double(double)>& f, double lo, double hi,
                                     int probes, double relative_tol) {
    if (!(lo > 0.0) || !(hi > lo) || probes < 2) return std::nullopt;
    const double step = std::log(hi / lo) / (probes - 1);
    double prev_x = lo;
    double prev_f = f(lo);
    if (prev_f == 0.0) return lo;
    for (int i = 1; i < probes; ++i) {
        const double x = lo * std::exp(step * i);
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (std::signbit(fx) != std::signbit(prev_f)) {
            const auto u = bracketed_root([&f](double v) { return f(std::exp(v)); },
                                          std::log(prev_x), std::log(x), relative_tol * 1e-3);
            if (!u) return std::nullopt;
            return std::exp(*u);
        }
        prev_x = x;
        prev_f = fx;
    }
    return std::nullopt;
}

}  // namespace omc::numerics
