#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace omc {

// Input or configuration rejected before any computation. The CLI maps this to
// exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation could not produce a trustworthy number (failed fit, unstable
// dynamics, degenerate estimator). The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IterationRecord {
    int iteration{0};
    double cost{0.0};
    double damping{0.0};
    std::vector<double> params;
};

class FitError : public NumericError {
public:
    FitError(const std::string& what, std::vector<IterationRecord> trace = {})
        : NumericError(what), trace_(std::move(trace)) {}

    const std::vector<IterationRecord>& trace() const noexcept { return trace_; }

private:
    std::vector<IterationRecord> trace_;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition) throw ValidationError(message);
}

}  // namespace detail

}  // namespace omc
