#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "omc/design/design.hpp"
#include "omc/design/nelder_mead.hpp"
#include "omc/design/surrogate.hpp"
#include "omc/errors.hpp"
#include "omc/numerics/rng.hpp"
#include "omc/parallel.hpp"

using namespace omc;
using namespace omc::design;
using doctest::Approx;

namespace {

const DesignVector kMid{500, 200, 250, 350, 500, 200, 250, 350, 500};

NelderMeadOptions surrogate_options(const SurrogateFitness& s) {
    NelderMeadOptions o;
    o.pipeline.target_omega = s.options().target_omega;
    o.record_simplex = false;
    return o;
}

bool monotone(const SearchTrace& trace) {
    for (std::size_t i = 1; i < trace.entries.size(); ++i)
        if (trace.entries[i].restart == trace.entries[i - 1].restart &&
            trace.entries[i].best_so_far > trace.entries[i - 1].best_so_far)
            return false;
    return true;
}

}  // namespace

TEST_CASE("design vector array roundtrip") {
    const auto a = kMid.to_array();
    const auto b = DesignVector::from_array(a);
    CHECK(b.to_array() == a);
    CHECK(DesignVector::names()[5] == "h_ic");
    CHECK(a[5] == kMid.h_ic);
}

TEST_CASE("constraint checks") {
    const auto b = DesignBounds::defaults();
    CHECK(feasible(kMid, b));
    auto x = kMid;
    x.h_oc = x.h_ic + 59.0;
    CHECK_FALSE(satisfies_gaps(x, b));
    CHECK(within_box(x, b));
    x.w_o = x.w_i + 119.0;  // width gap is on the half-widths
    x.d = 399.0;
    const auto v = constraint_violations(x, b);
    CHECK(v.size() == 3);
    auto bad = b;
    bad.min_gap = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("repair always lands in the feasible set") {
    const auto b = DesignBounds::defaults();
    auto rng = make_rng(3);
    std::uniform_real_distribution<double> u(0.0, 900.0);
    for (int k = 0; k < 2000; ++k) {
        std::array<double, kDesignDim> v;
        for (auto& e : v) e = u(rng);
        const auto r = repair(DesignVector::from_array(v), b);
        CHECK(feasible(r, b));
    }
    const auto same = repair(kMid, b);
    CHECK(same.to_array() == kMid.to_array());
    // A violated pair is split about its midpoint to exactly the gap.
    auto x = kMid;
    x.h_ic = 240.0;
    x.h_oc = 260.0;
    const auto r = repair(x, b);
    CHECK(r.h_ic == Approx(220.0));
    CHECK(r.h_oc == Approx(280.0));
}

TEST_CASE("uniform scaling") {
    const auto s = scale_design(kMid, 1.1);
    CHECK(s.d == Approx(550.0));
    CHECK(s.w_oc == Approx(550.0));
    const auto g = scale_geometry(FixedGeometry{}, 2.0);
    CHECK(g.a == Approx(1000.0));
    CHECK(g.t == Approx(220.0));
    const SurrogateFitness sur;
    auto x = kMid;
    x.d = 480.0;
    const auto sol = *sur(x);
    const auto scaled = scale_to_target_wavelength(x, sol.omega_o, sur.options().target_omega);
    CHECK(sur(scaled)->omega_o == Approx(sur.options().target_omega).epsilon(1e-12));
    CHECK_THROWS_AS(scale_design(kMid, 0.0), ValidationError);
}

TEST_CASE("evaluation statuses") {
    const SurrogateFitness sur;
    const auto ok = evaluate(kMid, sur);
    CHECK(ok.status == EvalStatus::ok);
    CHECK(ok.fitness == Approx(-ok.g0));
    auto lowq = kMid;
    lowq.w_oc = 700.0;
    const auto f = evaluate(lowq, sur);
    CHECK(f.status == EvalStatus::filtered_lowQ);
    CHECK(f.fitness == 0.0);
    auto broken = kMid;
    broken.w_o = 680.0;
    CHECK(evaluate(broken, sur).status == EvalStatus::eval_failed);
    const Evaluator thrower = [](const DesignVector&) -> std::optional<ModeSolution> {
        throw std::runtime_error("mesh failure");
    };
    const auto t = evaluate(kMid, thrower);
    CHECK(t.status == EvalStatus::eval_failed);
    CHECK(t.message == "mesh failure");
    const Evaluator nan = [](const DesignVector&) { return std::optional<ModeSolution>({NAN, 1, 1, 1e7}); };
    CHECK(evaluate(kMid, nan).status == EvalStatus::eval_failed);
    for (auto s : {EvalStatus::ok, EvalStatus::filtered_lowQ, EvalStatus::eval_failed})
        CHECK(parse_eval_status(to_string(s)) == s);
    CHECK_THROWS_AS(parse_eval_status("fine"), ValidationError);
}

TEST_CASE("candidate pipeline rescales and rechecks constraints") {
    const SurrogateFitness sur;
    const auto b = DesignBounds::defaults();
    PipelineOptions opt;
    opt.target_omega = sur.options().target_omega;
    auto x = kMid;
    x.d = 520.0;
    const auto r = evaluate_candidate(x, sur, b, opt);
    CHECK(r.status == EvalStatus::ok);
    CHECK(r.design.d == Approx(500.0));
    CHECK(r.omega_o == Approx(sur.options().target_omega));
    // d = 400 scales everything by 1.25 and pushes h_o past its bound.
    x.d = 400.0;
    x.h_o = 450.0;
    const auto fail = evaluate_candidate(x, sur, b, opt);
    CHECK(fail.status == EvalStatus::eval_failed);
    CHECK(fail.design.d == 400.0);
    CHECK(fail.message.find("h_o") != std::string::npos);
    auto infeasible = kMid;
    infeasible.h_o = infeasible.h_i;
    CHECK(evaluate_candidate(infeasible, sur, b, opt).status == EvalStatus::eval_failed);
}

TEST_CASE("random feasible designs") {
    const auto b = DesignBounds::defaults();
    for (std::uint64_t s = 0; s < 200; ++s) CHECK(feasible(random_feasible_design(b, 5, s), b));
    CHECK(random_feasible_design(b, 5, 1).to_array() == random_feasible_design(b, 5, 1).to_array());
    CHECK(random_feasible_design(b, 5, 1).to_array() != random_feasible_design(b, 5, 2).to_array());
}

TEST_CASE("Nelder-Mead converges on a convex quadratic") {
    QuadraticSurrogate q;
    q.center = kMid;
    NelderMeadOptions o;
    o.tol_f = -1.0;
    o.tol_x = 1e-9;
    const auto r = nelder_mead(DesignVector{450, 150, 200, 300, 450, 150, 200, 300, 450}, q, DesignBounds::defaults(), o);
    const auto got = r.best_vertex.to_array(), want = kMid.to_array();
    for (std::size_t i = 0; i < kDesignDim; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-4);
    CHECK(r.reason == StopReason::simplex_converged);
    CHECK(r.evaluations <= o.max_evaluations);
    CHECK_FALSE(r.trace.snapshots.empty());
}

TEST_CASE("constrained optimum sits on the 60 nm cross-shield face") {
    const SurrogateFitness sur;
    auto o = surrogate_options(sur);
    o.tol_f = -1.0;
    o.tol_x = 1e-7;
    o.max_evaluations = 4000;
    auto start = sur.known_optimum();
    start.h_oc += 40.0;
    const auto r = nelder_mead(start, sur, DesignBounds::defaults(), o);
    CHECK(r.best.design.h_oc - r.best.design.h_ic == Approx(60.0).epsilon(1e-5));
    CHECK(-r.best.fitness == Approx(sur.known_optimum_g0()).epsilon(1e-4));
    CHECK(sur.known_optimum().h_oc - sur.known_optimum().h_ic == Approx(60.0));
}

TEST_CASE("search traces are feasible, monotone, indexed and reproducible") {
    const SurrogateFitness sur;
    const auto b = DesignBounds::defaults();
    const auto o = surrogate_options(sur);
    const auto a = multi_restart(sur, b, 6, 11, o, 1);
    const auto c = multi_restart(sur, b, 6, 11, o, 4);
    REQUIRE(a.trace.entries.size() == c.trace.entries.size());
    std::size_t total = 0;
    for (const auto& run : a.runs) {
        total += run.evaluations;
        CHECK(run.trace.entries.empty());
    }
    CHECK(a.trace.entries.size() == total);
    for (std::size_t i = 0; i < a.trace.entries.size(); ++i) {
        const auto& e = a.trace.entries[i];
        CHECK(feasible(e.evaluation.design, b));
        CHECK(e.evaluation.design.to_array() == c.trace.entries[i].evaluation.design.to_array());
        CHECK(e.evaluation.fitness == c.trace.entries[i].evaluation.fitness);
        if (i > 0 && a.trace.entries[i - 1].restart == e.restart)
            CHECK(e.eval_index == a.trace.entries[i - 1].eval_index + 1);
    }
    CHECK(monotone(a.trace));
    CHECK(a.best.fitness == c.best.fitness);
    CHECK(a.best_restart == c.best_restart);
}

TEST_CASE("evaluation budget is respected") {
    const SurrogateFitness sur;
    auto o = surrogate_options(sur);
    o.max_evaluations = 37;
    o.tol_f = -1.0;
    o.tol_x = 0.0;
    const auto r = nelder_mead(kMid, sur, DesignBounds::defaults(), o);
    CHECK(r.evaluations == 37);
    CHECK(r.trace.entries.size() == 37);
    CHECK(r.reason == StopReason::max_evaluations);
}

TEST_CASE("restarts visit every basin") {
    const SurrogateFitness sur;
    const auto b = DesignBounds::defaults();
    const auto o = surrogate_options(sur);
    int all_three = 0;
    constexpr int seeds = 40;
    for (int seed = 0; seed < seeds; ++seed) {
        const auto r = multi_restart(sur, b, 50, 2024 + seed, o, 4);
        std::set<std::size_t> basins;
        for (const auto& run : r.runs)
            if (run.best.status == EvalStatus::ok) basins.insert(sur.basin_of(run.best.design));
        all_three += basins.size() == 3;
    }
    CHECK(all_three >= 38);
}

TEST_CASE("single restart reduces to one Nelder-Mead run") {
    const SurrogateFitness sur;
    const auto b = DesignBounds::defaults();
    auto o = surrogate_options(sur);
    o.start_attempts = 1;
    const auto multi = multi_restart(sur, b, 1, 17, o);
    const auto single = nelder_mead(random_feasible_design(b, 17, 0), sur, b, o);
    CHECK(multi.best.fitness == single.best.fitness);
    CHECK(multi.trace.entries.size() == single.trace.entries.size());
}

TEST_CASE("restart starts are screened to designs that evaluate ok") {
    const SurrogateFitness sur;
    const auto b = DesignBounds::defaults();
    auto o = surrogate_options(sur);
    o.max_evaluations = 20;
    std::size_t unscreened_bad = 0, screened_bad = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        o.start_attempts = 1;
        for (const auto& e : multi_restart(sur, b, 10, seed, o).trace.entries)
            if (e.eval_index == 0) unscreened_bad += e.evaluation.status != EvalStatus::ok;
        o.start_attempts = 64;
        const auto r = multi_restart(sur, b, 10, seed, o);
        for (const auto& e : r.trace.entries)
            if (e.eval_index == 0) screened_bad += e.evaluation.status != EvalStatus::ok;
        CHECK(r.best.status == EvalStatus::ok);
    }
    CHECK(unscreened_bad > 0);
    CHECK(screened_bad == 0);
}

TEST_CASE("one percent evaluation noise costs little best fitness") {
    const SurrogateFitness clean;
    const auto b = DesignBounds::defaults();
    const auto o = surrogate_options(clean);
    constexpr int seeds = 100;
    std::vector<double> ratio(seeds);
    parallel_for(seeds, 8, [&](std::size_t k) {
        SurrogateOptions so;
        so.noise_sigma = 0.01;
        so.noise_seed = 500 + k;
        const SurrogateFitness noisy(so);
        const auto reference = multi_restart(clean, b, 8, 500 + k, o);
        const auto found = multi_restart(noisy, b, 8, 500 + k, o);
        ratio[k] = clean(found.best.design)->g0 / -reference.best.fitness;
    });
    std::sort(ratio.begin(), ratio.end());
    CHECK(ratio[seeds / 2] == Approx(1.0).epsilon(0.05));
    // Noise is a fixed function of the design.
    SurrogateOptions so;
    so.noise_sigma = 0.01;
    const SurrogateFitness noisy(so);
    CHECK(noisy(kMid)->g0 == noisy(kMid)->g0);
    CHECK(noisy(kMid)->g0 != clean(kMid)->g0);
}

TEST_CASE("reference fitness values") {
    const Evaluator fixed = [](const DesignVector&) {
        return std::optional<ModeSolution>({kTwoPi * 193.4e12, kTwoPi * 10e9, kTwoPi * 1.4e6, 1e7});
    };
    CHECK(evaluate(kMid, fixed).fitness == Approx(-kTwoPi * 1.4e6));
    const Evaluator lossy = [](const DesignVector&) {
        return std::optional<ModeSolution>({kTwoPi * 193.4e12, kTwoPi * 10e9, kTwoPi * 1.4e6, 1e6});
    };
    CHECK(evaluate(kMid, lossy).status == EvalStatus::filtered_lowQ);
    CHECK(evaluate(kMid, lossy).fitness == 0.0);
}

TEST_CASE("wavelength rescaling preserves design ratios") {
    const auto id = scale_to_target_wavelength(kMid, 1e15, 1e15);
    CHECK(id.to_array() == kMid.to_array());
    const auto s = scale_to_target_wavelength(kMid, 1.07e15, 1e15).to_array();
    const auto a = kMid.to_array();
    for (std::size_t i = 1; i < kDesignDim; ++i) CHECK(std::abs(s[i] / s[0] - a[i] / a[0]) <= 1e-12 * a[i] / a[0]);
}

TEST_CASE("optimizer input validation") {
    const SurrogateFitness sur;
    auto bad = kMid;
    bad.h_o = bad.h_i;
    CHECK_THROWS_AS(nelder_mead(bad, sur, DesignBounds::defaults()), ValidationError);
    NelderMeadOptions o;
    o.contraction = 1.5;
    CHECK_THROWS_AS(nelder_mead(kMid, sur, DesignBounds::defaults(), o), ValidationError);
}
