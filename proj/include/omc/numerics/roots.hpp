#pragma once

#include <functional>
#include <optional>

namespace omc::numerics {

// Root of f on [lo, hi] when f changes sign there; nullopt otherwise.
std::optional<double> bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                                     double relative_tol = 1e-14);

// Same, but searches geometrically in log(x) for x in [lo, hi] (both > 0),
// scanning `probes` points for the first sign change.
std::optional<double> first_root_log(const std::function<double(double)>& f, double lo, double hi,
                                     int probes = 200, double relative_tol = 1e-14);

}  // namespace omc::numerics
