#pragma once

#include <cstdint>
#include <vector>

#include "omc/design/design.hpp"

namespace omc::design {

struct NelderMeadOptions {
    double reflection{1.0};
    double expansion{2.0};
    double contraction{0.5};
    double shrink{0.5};
    // Initial simplex edge along each axis, as a fraction of the box width.
    double initial_step{0.1};
    // Stop when the best fitness moved by less than tol_f (relative) over the
    // last 2(n+1) iterations; negative disables the test.
    double tol_f{1e-4};
    // Stop when every vertex lies within tol_x (nm, max-norm) of the best.
    double tol_x{1e-3};
    std::size_t max_evaluations{2000};
    // multi_restart only: draws per restart until the start evaluates ok.
    // Screening evaluations are not part of the trace.
    std::size_t start_attempts{64};
    bool record_simplex{true};
    PipelineOptions pipeline;
};

struct TraceEntry {
    std::size_t restart{0};
    std::size_t eval_index{0};
    FitnessEvaluation evaluation;
    double best_so_far{0.0};
};

struct SimplexSnapshot {
    std::size_t restart{0};
    std::size_t iteration{0};
    std::vector<DesignVector> vertices;  // sorted best first
    std::vector<double> fitness;
};

// Append-only record of a search, ordered by (restart, eval_index).
struct SearchTrace {
    std::vector<TraceEntry> entries;
    std::vector<SimplexSnapshot> snapshots;
};

enum class StopReason { fitness_converged, simplex_converged, max_evaluations };

struct NelderMeadResult {
    FitnessEvaluation best;
    DesignVector best_vertex;  // the (pre-rescale) simplex vertex that produced `best`
    SearchTrace trace;
    std::size_t evaluations{0};
    std::size_t iterations{0};
    StopReason reason{StopReason::max_evaluations};
};

// Bounded Nelder-Mead over the design box. Every candidate is repaired into
// the feasible set before evaluation; vertices stay in unscaled coordinates.
NelderMeadResult nelder_mead(const DesignVector& start, const Evaluator& evaluator, const DesignBounds& bounds,
                             const NelderMeadOptions& options = {}, std::size_t restart = 0);

// Uniform sample from the feasible set (rejection from the box).
DesignVector random_feasible_design(const DesignBounds& bounds, std::uint64_t seed, std::uint64_t stream);

struct MultiRestartResult {
    FitnessEvaluation best;
    std::size_t best_restart{0};
    std::vector<NelderMeadResult> runs;  // trace per run left empty; see `trace`
    SearchTrace trace;                   // merged in restart order
};

// Restart r starts from random_feasible_design(bounds, seed, r), or from the
// first of random_feasible_design(bounds, derive_seed(seed, r), k), k >= 1,
// that evaluates ok (last draw if none does). Runs may execute concurrently
// without changing the result.
MultiRestartResult multi_restart(const Evaluator& evaluator, const DesignBounds& bounds, std::size_t n_restarts,
                                 std::uint64_t seed, const NelderMeadOptions& options = {}, unsigned threads = 1);

}  // namespace omc::design
