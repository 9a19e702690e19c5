#include "omc/design/design.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "omc/errors.hpp"

namespace omc::design {

using detail::require;

std::array<double, kDesignDim> DesignVector::to_array() const {
    return {d, h_i, w_i, h_o, w_o, h_ic, w_ic, h_oc, w_oc};
}

DesignVector DesignVector::from_array(const std::array<double, kDesignDim>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
}

namespace {

// (inner, outer, gap multiplier) as indices into the array form.
struct GapPair {
    std::size_t inner, outer;
    double multiplier;
    const char* label;
};
constexpr std::array<GapPair, 3> kGaps{{{1, 3, 1.0, "h_o - h_i"},
                                        {2, 4, 2.0, "w_o/2 - w_i/2"},
                                        {5, 7, 1.0, "h_oc - h_ic"}}};

}  // namespace

DesignBounds DesignBounds::defaults() {
    DesignBounds b;
    b.lower = {400, 100, 100, 200, 300, 100, 100, 200, 300};
    b.upper = {600, 300, 400, 500, 700, 300, 400, 500, 700};
    return b;
}

void DesignBounds::validate() const {
    require(std::isfinite(min_gap) && min_gap > 0.0, "min_gap must be positive");
    const auto lo = lower.to_array(), hi = upper.to_array();
    for (std::size_t i = 0; i < kDesignDim; ++i) {
        require(std::isfinite(lo[i]) && std::isfinite(hi[i]) && lo[i] > 0.0,
                std::string("bounds for ") + std::string(DesignVector::names()[i]) + " must be finite and positive");
        require(lo[i] < hi[i], std::string("lower bound of ") + std::string(DesignVector::names()[i]) +
                                   " must be below its upper bound");
    }
    for (const auto& g : kGaps)
        require(hi[g.outer] - lo[g.inner] >= g.multiplier * min_gap,
                std::string("box cannot satisfy ") + g.label + " >= min_gap");
}

bool within_box(const DesignVector& x, const DesignBounds& bounds, double tol) {
    const auto v = x.to_array(), lo = bounds.lower.to_array(), hi = bounds.upper.to_array();
    for (std::size_t i = 0; i < kDesignDim; ++i)
        if (!(v[i] >= lo[i] - tol && v[i] <= hi[i] + tol)) return false;
    return true;
}

bool satisfies_gaps(const DesignVector& x, const DesignBounds& bounds, double tol) {
    const auto v = x.to_array();
    for (const auto& g : kGaps)
        if (!(v[g.outer] - v[g.inner] >= g.multiplier * bounds.min_gap - tol)) return false;
    return true;
}

std::vector<std::string> constraint_violations(const DesignVector& x, const DesignBounds& bounds) {
    std::vector<std::string> out;
    const auto v = x.to_array(), lo = bounds.lower.to_array(), hi = bounds.upper.to_array();
    for (std::size_t i = 0; i < kDesignDim; ++i)
        if (!(v[i] >= lo[i] - kFeasibilityTolerance && v[i] <= hi[i] + kFeasibilityTolerance))
            out.push_back(std::string(DesignVector::names()[i]) + " outside bounds");
    for (const auto& g : kGaps)
        if (!(v[g.outer] - v[g.inner] >= g.multiplier * bounds.min_gap - kFeasibilityTolerance))
            out.push_back(std::string(g.label) + " below minimum gap");
    return out;
}

DesignVector repair(const DesignVector& x, const DesignBounds& bounds) {
    auto v = x.to_array();
    const auto lo = bounds.lower.to_array(), hi = bounds.upper.to_array();
    for (std::size_t i = 0; i < kDesignDim; ++i) {
        require(std::isfinite(v[i]), "design values must be finite");
        v[i] = std::clamp(v[i], lo[i], hi[i]);
    }
    for (const auto& g : kGaps) {
        const double gap = g.multiplier * bounds.min_gap;
        double& in = v[g.inner];
        double& out = v[g.outer];
        if (out - in >= gap) continue;
        // Both ends move apart, so each stays inside its own opposite bound.
        in = 0.5 * (in + out) - 0.5 * gap;
        if (in < lo[g.inner]) in = lo[g.inner];
        if (in + gap > hi[g.outer]) in = hi[g.outer] - gap;
        out = in + gap;
    }
    return DesignVector::from_array(v);
}

DesignVector scale_design(const DesignVector& x, double factor) {
    require(std::isfinite(factor) && factor > 0.0, "scale factor must be positive");
    auto v = x.to_array();
    for (auto& e : v) e *= factor;
    return DesignVector::from_array(v);
}

DesignVector scale_to_target_wavelength(const DesignVector& x, double omega_o, double target_omega) {
    require(std::isfinite(omega_o) && omega_o > 0.0, "omega_o must be positive");
    require(std::isfinite(target_omega) && target_omega > 0.0, "target omega must be positive");
    if (omega_o == target_omega) return x;
    return scale_design(x, omega_o / target_omega);
}

FixedGeometry scale_geometry(const FixedGeometry& g, double factor) {
    require(std::isfinite(factor) && factor > 0.0, "scale factor must be positive");
    return {g.a * factor, g.r * factor, g.w * factor, g.t};
}

std::string_view to_string(EvalStatus status) {
    switch (status) {
        case EvalStatus::ok: return "ok";
        case EvalStatus::filtered_lowQ: return "filtered_lowQ";
        case EvalStatus::eval_failed: return "eval_failed";
    }
    return "eval_failed";
}

EvalStatus parse_eval_status(std::string_view text) {
    if (text == "ok") return EvalStatus::ok;
    if (text == "filtered_lowQ") return EvalStatus::filtered_lowQ;
    if (text == "eval_failed") return EvalStatus::eval_failed;
    throw ValidationError("unknown evaluation status '" + std::string(text) + "'");
}

FitnessEvaluation evaluate(const DesignVector& design, const Evaluator& evaluator, double q_threshold) {
    FitnessEvaluation out;
    out.design = design;
    std::optional<ModeSolution> sol;
    try {
        sol = evaluator(design);
    } catch (const std::exception& e) {
        out.message = e.what();
        return out;
    } catch (...) {
        out.message = "evaluator threw a non-standard exception";
        return out;
    }
    if (!sol) {
        out.message = "evaluator reported failure";
        return out;
    }
    if (!std::isfinite(sol->g0) || !std::isfinite(sol->q_scat) || !std::isfinite(sol->omega_o) ||
        !std::isfinite(sol->omega_m)) {
        out.message = "evaluator returned non-finite values";
        return out;
    }
    out.g0 = sol->g0;
    out.q_scat = sol->q_scat;
    out.omega_o = sol->omega_o;
    out.omega_m = sol->omega_m;
    if (sol->q_scat >= q_threshold) {
        out.status = EvalStatus::ok;
        out.fitness = -std::abs(sol->g0);
    } else {
        out.status = EvalStatus::filtered_lowQ;
        out.fitness = 0.0;
    }
    return out;
}

FitnessEvaluation evaluate_candidate(const DesignVector& design, const Evaluator& evaluator,
                                     const DesignBounds& bounds, const PipelineOptions& options) {
    if (!feasible(design, bounds)) {
        FitnessEvaluation out;
        out.design = design;
        out.message = "candidate violates constraints";
        return out;
    }
    if (!options.target_omega) return evaluate(design, evaluator, options.q_threshold);

    auto optical = evaluate(design, evaluator, options.q_threshold);
    if (optical.status == EvalStatus::eval_failed) return optical;
    if (!(optical.omega_o > 0.0)) {
        optical.status = EvalStatus::eval_failed;
        optical.fitness = 0.0;
        optical.message = "optical resonance is not positive";
        return optical;
    }
    const auto scaled = scale_to_target_wavelength(design, optical.omega_o, *options.target_omega);
    if (!feasible(scaled, bounds)) {
        FitnessEvaluation out;
        out.design = design;
        out.omega_o = optical.omega_o;
        out.message = "rescaled design violates constraints:";
        for (const auto& v : constraint_violations(scaled, bounds)) out.message += " " + v + ";";
        return out;
    }
    return evaluate(scaled, evaluator, options.q_threshold);
}

}  // namespace omc::design
