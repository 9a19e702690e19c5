#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace omc::design {

inline constexpr std::size_t kDesignDim = 9;

// Nine free lengths (nm) of the C-shape unit cell and its cross-shield.
// Inner/outer pairs: (h_i, h_o), (w_i, w_o), (h_ic, h_oc); w_ic and w_oc are
// unconstrained apart from the box.
struct DesignVector {
    double d{0.0};
    double h_i{0.0};
    double w_i{0.0};
    double h_o{0.0};
    double w_o{0.0};
    double h_ic{0.0};
    double w_ic{0.0};
    double h_oc{0.0};
    double w_oc{0.0};

    std::array<double, kDesignDim> to_array() const;
    static DesignVector from_array(const std::array<double, kDesignDim>& v);
    static constexpr std::array<std::string_view, kDesignDim> names() {
        return {"d", "h_i", "w_i", "h_o", "w_o", "h_ic", "w_ic", "h_oc", "w_oc"};
    }
};

// Lattice constants that are not optimized. a, r and w scale with the design
// during wavelength rescaling; the slab thickness t never does.
struct FixedGeometry {
    double a{500.0};
    double r{205.0};
    double w{75.0};
    double t{220.0};
};

struct DesignBounds {
    DesignVector lower;
    DesignVector upper;
    double min_gap{60.0};  // nm; some runs relax this to 55

    // h_o - h_i >= g, w_o/2 - w_i/2 >= g, h_oc - h_ic >= g.
    static DesignBounds defaults();
    void validate() const;
};

inline constexpr double kFeasibilityTolerance = 1e-9;  // nm

bool within_box(const DesignVector& x, const DesignBounds& bounds, double tol = kFeasibilityTolerance);
bool satisfies_gaps(const DesignVector& x, const DesignBounds& bounds, double tol = kFeasibilityTolerance);
inline bool feasible(const DesignVector& x, const DesignBounds& bounds, double tol = kFeasibilityTolerance) {
    return within_box(x, bounds, tol) && satisfies_gaps(x, bounds, tol);
}
std::vector<std::string> constraint_violations(const DesignVector& x, const DesignBounds& bounds);

// Clamp to the box, then split any violated gap symmetrically about its
// midpoint to exactly the minimum, shifting the pair back inside the box.
DesignVector repair(const DesignVector& x, const DesignBounds& bounds);

DesignVector scale_design(const DesignVector& x, double factor);
// Uniform scaling by omega_o / target_omega, which moves a scale-invariant
// resonance from omega_o onto the target.
DesignVector scale_to_target_wavelength(const DesignVector& x, double omega_o, double target_omega);
FixedGeometry scale_geometry(const FixedGeometry& g, double factor);

struct ModeSolution {
    double omega_o{0.0};  // rad/s
    double omega_m{0.0};  // rad/s
    double g0{0.0};       // rad/s
    double q_scat{0.0};
};

// Mode solver contract: nullopt (or an exception) means the solve failed.
using Evaluator = std::function<std::optional<ModeSolution>(const DesignVector&)>;

enum class EvalStatus { ok, filtered_lowQ, eval_failed };
std::string_view to_string(EvalStatus status);
EvalStatus parse_eval_status(std::string_view text);

inline constexpr double kDefaultQThreshold = 2e6;

struct FitnessEvaluation {
    DesignVector design;  // post-rescale when rescaling succeeded
    double g0{0.0};
    double q_scat{0.0};
    double omega_o{0.0};
    double omega_m{0.0};
    double fitness{0.0};  // -|g0| when ok, 0 otherwise
    EvalStatus status{EvalStatus::eval_failed};
    std::string message;
};

// One evaluator call; exceptions and nullopt become eval_failed.
FitnessEvaluation evaluate(const DesignVector& design, const Evaluator& evaluator,
                           double q_threshold = kDefaultQThreshold);

struct PipelineOptions {
    double q_threshold{kDefaultQThreshold};
    // Rescale every candidate so its optical resonance sits at this frequency
    // (rad/s); nullopt skips the rescaling step.
    std::optional<double> target_omega;
};

// Optical solve, rescale to the target, constraint recheck, full solve. A
// rescaled design that breaks a constraint is reported as eval_failed and
// carries the pre-scale design.
FitnessEvaluation evaluate_candidate(const DesignVector& design, const Evaluator& evaluator,
                                     const DesignBounds& bounds, const PipelineOptions& options);

}  // namespace omc::design
