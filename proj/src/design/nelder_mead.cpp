#include "omc/design/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "omc/errors.hpp"
#include "omc/numerics/rng.hpp"
#include "omc/parallel.hpp"

namespace omc::design {

using detail::require;

namespace {

using Point = std::array<double, kDesignDim>;

Point affine(const Point& base, const Point& toward, double t) {
    Point out;
    for (std::size_t i = 0; i < kDesignDim; ++i) out[i] = base[i] + t * (toward[i] - base[i]);
    return out;
}

class Search {
public:
    Search(const Evaluator& evaluator, const DesignBounds& bounds, const NelderMeadOptions& options,
           std::size_t restart)
        : evaluator_(evaluator), bounds_(bounds), options_(options), restart_(restart) {}

    bool exhausted() const { return result_.evaluations >= options_.max_evaluations; }

    // Repairs, evaluates and records one candidate; returns the repaired point and F.
    std::pair<Point, double> evaluate(const Point& raw) {
        const auto x = repair(DesignVector::from_array(raw), bounds_);
        auto eval = evaluate_candidate(x, evaluator_, bounds_, options_.pipeline);
        const double f = eval.fitness;
        if (eval.status == EvalStatus::ok && (!have_ok_ || f < result_.best.fitness)) {
            have_ok_ = true;
            result_.best = eval;
            result_.best_vertex = x;
        } else if (!have_ok_ && result_.evaluations == 0) {
            result_.best = eval;
            result_.best_vertex = x;
        }
        TraceEntry entry;
        entry.restart = restart_;
        entry.eval_index = result_.evaluations;
        entry.evaluation = std::move(eval);
        entry.best_so_far = have_ok_ ? result_.best.fitness : 0.0;
        result_.trace.entries.push_back(std::move(entry));
        ++result_.evaluations;
        return {x.to_array(), f};
    }

    NelderMeadResult run(const DesignVector& start) {
        constexpr std::size_t n = kDesignDim;
        const auto lo = bounds_.lower.to_array(), hi = bounds_.upper.to_array();
        std::vector<Point> simplex;
        std::vector<double> fit;
        {
            auto [x, f] = evaluate(start.to_array());
            simplex.push_back(x);
            fit.push_back(f);
        }
        for (std::size_t i = 0; i < n && !exhausted(); ++i) {
            Point v = simplex.front();
            const double step = options_.initial_step * (hi[i] - lo[i]);
            v[i] = v[i] + step <= hi[i] ? v[i] + step : v[i] - step;
            auto [x, f] = evaluate(v);
            simplex.push_back(x);
            fit.push_back(f);
        }
        if (simplex.size() < n + 1) return finish(StopReason::max_evaluations);

        std::vector<double> best_history;
        const std::size_t window = 2 * (n + 1);
        std::vector<std::size_t> order(n + 1);
        for (;;) {
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fit[a] < fit[b]; });
            std::vector<Point> s2;
            std::vector<double> f2;
            for (auto k : order) {
                s2.push_back(simplex[k]);
                f2.push_back(fit[k]);
            }
            simplex.swap(s2);
            fit.swap(f2);

            if (options_.record_simplex) {
                SimplexSnapshot snap;
                snap.restart = restart_;
                snap.iteration = result_.iterations;
                for (const auto& p : simplex) snap.vertices.push_back(DesignVector::from_array(p));
                snap.fitness = fit;
                result_.trace.snapshots.push_back(std::move(snap));
            }

            double diameter = 0.0;
            for (std::size_t k = 1; k <= n; ++k)
                for (std::size_t i = 0; i < n; ++i)
                    diameter = std::max(diameter, std::abs(simplex[k][i] - simplex[0][i]));
            if (diameter < options_.tol_x) return finish(StopReason::simplex_converged);

            best_history.push_back(fit[0]);
            if (options_.tol_f >= 0.0 && best_history.size() > window) {
                const double now = best_history.back();
                const double then = best_history[best_history.size() - 1 - window];
                if (std::abs(now - then) <= options_.tol_f * std::abs(now))
                    return finish(StopReason::fitness_converged);
            }
            if (exhausted()) return finish(StopReason::max_evaluations);
            ++result_.iterations;

            Point centroid{};
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i] / static_cast<double>(n);
            const Point& worst = simplex[n];
            const Point reflected_raw = affine(centroid, worst, -options_.reflection);
            const auto [xr, fr] = evaluate(reflected_raw);

            if (fr < fit[0]) {
                if (exhausted()) {
                    simplex[n] = xr;
                    fit[n] = fr;
                    continue;
                }
                const auto [xe, fe] = evaluate(affine(centroid, reflected_raw, options_.expansion));
                if (fe < fr) {
                    simplex[n] = xe;
                    fit[n] = fe;
                } else {
                    simplex[n] = xr;
                    fit[n] = fr;
                }
                continue;
            }
            if (fr < fit[n - 1]) {
                simplex[n] = xr;
                fit[n] = fr;
                continue;
            }
            if (exhausted()) continue;
            const bool outside = fr < fit[n];
            const Point contracted = outside ? affine(centroid, xr, options_.contraction)
                                             : affine(centroid, worst, options_.contraction);
            const auto [xc, fc] = evaluate(contracted);
            if (outside ? fc <= fr : fc < fit[n]) {
                simplex[n] = xc;
                fit[n] = fc;
                continue;
            }
            for (std::size_t k = 1; k <= n && !exhausted(); ++k) {
                const auto [xs, fs] = evaluate(affine(simplex[0], simplex[k], options_.shrink));
                simplex[k] = xs;
                fit[k] = fs;
            }
        }
    }

private:
    NelderMeadResult finish(StopReason reason) {
        result_.reason = reason;
        return std::move(result_);
    }

    const Evaluator& evaluator_;
    const DesignBounds& bounds_;
    const NelderMeadOptions& options_;
    std::size_t restart_;
    NelderMeadResult result_;
    bool have_ok_{false};
};

}  // namespace

NelderMeadResult nelder_mead(const DesignVector& start, const Evaluator& evaluator, const DesignBounds& bounds,
                             const NelderMeadOptions& options, std::size_t restart) {
    bounds.validate();
    require(options.max_evaluations >= 1, "max_evaluations must be positive");
    require(options.initial_step > 0.0 && options.initial_step <= 1.0, "initial_step must lie in (0, 1]");
    require(options.reflection > 0.0 && options.expansion > options.reflection, "invalid expansion coefficients");
    require(options.contraction > 0.0 && options.contraction < 1.0, "contraction must lie in (0, 1)");
    require(options.shrink > 0.0 && options.shrink < 1.0, "shrink must lie in (0, 1)");
    require(feasible(start, bounds), "infeasible start design");
    Search search(evaluator, bounds, options, restart);
    return search.run(start);
}

DesignVector random_feasible_design(const DesignBounds& bounds, std::uint64_t seed, std::uint64_t stream) {
    bounds.validate();
    auto rng = make_rng(seed, stream);
    const auto lo = bounds.lower.to_array(), hi = bounds.upper.to_array();
    for (int attempt = 0; attempt < 1'000'000; ++attempt) {
        Point v;
        for (std::size_t i = 0; i < kDesignDim; ++i) v[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
        const auto x = DesignVector::from_array(v);
        if (satisfies_gaps(x, bounds, 0.0)) return x;
    }
    throw NumericError("feasible set too small for rejection sampling");
}

MultiRestartResult multi_restart(const Evaluator& evaluator, const DesignBounds& bounds, std::size_t n_restarts,
                                 std::uint64_t seed, const NelderMeadOptions& options, unsigned threads) {
    require(n_restarts >= 1, "n_restarts must be at least 1");
    bounds.validate();
    MultiRestartResult out;
    out.runs.resize(n_restarts);
    parallel_for(n_restarts, threads, [&](std::size_t r) {
        auto start = random_feasible_design(bounds, seed, r);
        for (std::size_t k = 1; k < options.start_attempts; ++k) {
            if (evaluate_candidate(start, evaluator, bounds, options.pipeline).status == EvalStatus::ok) break;
            start = random_feasible_design(bounds, derive_seed(seed, r), k);
        }
        out.runs[r] = nelder_mead(start, evaluator, bounds, options, r);
    });
    for (std::size_t r = 0; r < n_restarts; ++r) {
        auto& run = out.runs[r];
        if (r == 0 || run.best.fitness < out.best.fitness) {
            out.best = run.best;
            out.best_restart = r;
        }
        auto& entries = run.trace.entries;
        out.trace.entries.insert(out.trace.entries.end(), std::make_move_iterator(entries.begin()),
                                 std::make_move_iterator(entries.end()));
        auto& snaps = run.trace.snapshots;
        out.trace.snapshots.insert(out.trace.snapshots.end(), std::make_move_iterator(snaps.begin()),
                                   std::make_move_iterator(snaps.end()));
        run.trace = {};
    }
    return out;
}

}  // namespace omc::design
