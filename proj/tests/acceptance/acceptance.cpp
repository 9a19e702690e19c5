// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "omc/bath/conductance.hpp"
#include "omc/bath/linewidth.hpp"
#include "omc/cooling/analysis.hpp"
#include "omc/core/model.hpp"
#include "omc/core/presets.hpp"
#include "omc/counting/dynamics.hpp"
#include "omc/counting/estimators.hpp"
#include "omc/counting/ringdown.hpp"
#include "omc/counting/simulate.hpp"
#include "omc/design/nelder_mead.hpp"
#include "omc/design/surrogate.hpp"
#include "omc/numerics/rng.hpp"
#include "omc/parallel.hpp"

using namespace omc;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("criterion %d: %s  %s  [%s]\n", id, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

void conductance_ratio() {
    const double r = bath::occupancy_ratio_1d_2d(42.0, 2.3, 2.0);
    report(1, std::abs(r - 6.2) <= 0.05, "1D/2D hot-bath occupancy ratio = 6.2 +- 0.05", "ratio=" + num(r));
}

void map_anchor() {
    const auto device = cooling::device_with_quality(presets::eight_shield_device(), 3.9e5);
    const auto p = cooling::cooling_point(device, presets::measured_hot_bath(0.0), 1.0);
    const bool ok = std::abs(p.result.n_avg - 0.10) <= 0.02 && std::abs(p.result.c_eff - 4.9) <= 0.5;
    report(2, ok, "Q_c=3.9e5, n_c=1: <n> = 0.10 +- 0.02, C_eff = 4.9 +- 0.5",
           "n_avg=" + num(p.result.n_avg) + " c_eff=" + num(p.result.c_eff));
}

void cooperativity_crossing() {
    const auto device = presets::eight_shield_device();
    const auto bath = presets::measured_hot_bath(presets::kWaveguideBetaPerWatt);
    const double at100 = cooling::cooling_point(device, bath, 100.0).result.c_eff;
    const double at1000 = cooling::cooling_point(device, bath, 1000.0).result.c_eff;
    cooling::SweepSpec sweep;
    sweep.n_c = cooling::log_space(1.0, 1000.0, 301);
    const auto curve = cooling::ceff_curve(device, bath, sweep);
    const bool ok = at100 < 1.0 && at1000 > 1.0 && curve.peak_c_eff >= 1.0 && curve.peak_c_eff <= 2.6;
    report(3, ok, "beta=15/uW: C_eff(100) < 1 < C_eff(1000), peak over [1,1000] in [1.0, 2.6]",
           "c_eff(100)=" + num(at100) + " c_eff(1000)=" + num(at1000) + " peak=" + num(curve.peak_c_eff) +
               " at n_c=" + num(curve.peak_n_c));
}

void ringdown_loop() {
    counting::RingdownConfig cfg;
    cfg.device = presets::eight_shield_device();
    cfg.bath = presets::measured_hot_bath(presets::kWaveguideBetaPerWatt);
    cfg.chain = {0.05, 0.6, 0.0};
    cfg.n_c_peak = 60.0;
    cfg.n_pulses = 10'000'000;
    cfg.tau_off = cooling::log_space(1e-3, 0.1, 16);
    const double q_true = cfg.device.mode.q_m();
    constexpr int seeds = 100;
    std::vector<double> q(seeds, 0.0);
    parallel_for(seeds, default_thread_count(), [&](std::size_t s) {
        try {
            const auto data = counting::simulate_ringdown(cfg, 1000 + s);
            q[s] = counting::fit_ringdown(data.points, data.omega_m).q_m_hat;
        } catch (const std::exception&) {
            q[s] = 0.0;
        }
    });
    const auto good = std::count_if(q.begin(), q.end(), [&](double v) { return rel(v, q_true) <= 0.05; });
    std::vector<double> sorted = q;
    std::sort(sorted.begin(), sorted.end());
    report(4, good >= 95, "ringdown recovers Q_m within 5% in >= 95 of 100 seeds",
           "within=" + std::to_string(good) + "/100 q_true=" + num(q_true) + " median=" + num(sorted[seeds / 2]));
}

std::vector<bath::DataPoint> linewidth_data(const HotBathModel& law, double noise, std::uint64_t seed) {
    std::vector<bath::DataPoint> pts;
    auto rng = make_rng(seed, 7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double x : cooling::log_space(0.1, 1e6, 561)) {
        const double y = law.linewidth_law(x);
        pts.push_back({x, noise > 0.0 ? y * (1.0 + noise * gauss(rng)) : y, 0.0});
    }
    return pts;
}

void bath_fit_recovery() {
    const auto law = presets::measured_hot_bath();
    const double phi = law.damp_dephasing, q1 = law.damp_low_exponent, q2 = law.damp_high_exponent;
    auto errors = [&](const bath::PiecewiseLinewidthFit& f) {
        if (!f.low || !f.high) return 1.0;
        return std::max({rel(f.gamma_phi, phi), rel(f.low->exponent, q1), rel(f.high->exponent, q2)});
    };
    const auto clean = bath::fit_piecewise_linewidth(linewidth_data(law, 0.0, 0));
    const double clean_err = errors(clean);

    constexpr int seeds = 100;
    std::vector<double> err(seeds, 1.0);
    parallel_for(seeds, default_thread_count(), [&](std::size_t s) {
        try {
            err[s] = errors(bath::fit_piecewise_linewidth(linewidth_data(law, 0.05, 2000 + s)));
        } catch (const std::exception&) {
            err[s] = 1.0;
        }
    });
    const auto good = std::count_if(err.begin(), err.end(), [](double e) { return e <= 0.10; });
    const bool ok = clean_err <= 0.01 && good >= 95;
    report(5, ok, "piecewise linewidth fit: gamma_phi, q1, q2 within 1% noiseless, 10% at 5% noise (>= 95/100)",
           "noiseless max rel err=" + num(clean_err) + " noisy within=" + std::to_string(good) + "/100");
}

void base_occupancy() {
    const auto device = presets::zero_shield_device();
    auto bath = presets::measured_hot_bath(0.0);
    bath.n_0 = bose_occupancy(device.mode.omega_m, presets::kBaseTemperature);
    const counting::DetectionChain chain{0.05, 0.6, 0.0};
    const auto model = counting::make_intra_pulse_model(device, bath, 9.9, counting::Detuning::red);
    const counting::OccupancyPath path(model, bath.n_0, 10e-6);
    const double per_phonon = counting::per_phonon_rate(chain, device, model.gamma_om, counting::Detuning::red);
    const auto rate = [&](double t) { return chain.background() + per_phonon * path(t); };
    const counting::PulseSchedule schedule{10e-6, 0.0, counting::kDefaultBinWidth, 10'000'000'000ULL};
    const auto means = counting::expected_counts(rate, schedule);

    constexpr int seeds = 20;
    std::vector<double> n0(seeds, 0.0);
    parallel_for(seeds, default_thread_count(), [&](std::size_t s) {
        const auto counts = counting::sample_counts(means, schedule, 3000 + s);
        try {
            n0[s] = counting::estimate_base_occupancy(counts, per_phonon, chain, device.mode.omega_m).n_0;
        } catch (const std::exception&) {
            n0[s] = 0.0;
        }
    });
    const auto good = std::count_if(n0.begin(), n0.end(), [&](double v) { return rel(v, bath.n_0) <= 0.20; });
    const auto [lo, hi] = std::minmax_element(n0.begin(), n0.end());
    report(6, good == seeds, "base occupancy within 20% of the Bose value under Poisson noise (every seed)",
           "n0_true=" + num(bath.n_0) + " within=" + std::to_string(good) + "/" + std::to_string(seeds) +
               " range=[" + num(*lo) + ", " + num(*hi) + "]");
}

void g0_roundtrip() {
    auto device = presets::eight_shield_device();
    device.mode.g_0 = to_angular(1.09e6);
    std::vector<double> nc = cooling::log_space(10.0, 1e4, 25), width;
    for (double n : nc)
        width.push_back(device.mode.gamma_0 + parametric_rate(device.mode, device.cavity, n));
    const auto est = counting::g0_from_backaction_slope(nc, width, device.cavity);
    const double err = rel(est.g_0, device.mode.g_0);
    report(7, err <= 1e-6, "g0 = 1.09 MHz recovered from a noiseless back-action sweep within 1e-6",
           "g0_hat/2pi=" + num(to_hz(est.g_0)) + " rel err=" + num(err));
}

bool trace_feasible(const design::SearchTrace& trace, const design::DesignBounds& bounds) {
    return std::all_of(trace.entries.begin(), trace.entries.end(),
                       [&](const design::TraceEntry& e) { return design::feasible(e.evaluation.design, bounds); });
}

bool trace_monotone(const design::SearchTrace& trace) {
    for (std::size_t i = 1; i < trace.entries.size(); ++i) {
        const auto& a = trace.entries[i - 1];
        const auto& b = trace.entries[i];
        if (a.restart == b.restart && b.best_so_far > a.best_so_far) return false;
    }
    return true;
}

void optimizer_properties() {
    const auto bounds = design::DesignBounds::defaults();
    const auto lo = bounds.lower.to_array(), hi = bounds.upper.to_array();

    design::QuadraticSurrogate quad;
    quad.center = {500, 200, 250, 350, 500, 200, 250, 350, 500};
    quad.curvature = {1.0, 2.0, 0.5, 1.5, 1.0, 3.0, 0.8, 1.2, 2.5};
    design::NelderMeadOptions opt;
    opt.tol_f = -1.0;
    opt.tol_x = 1e-9;
    opt.max_evaluations = 2000;
    const auto convex = design::nelder_mead(design::DesignVector{450, 150, 200, 300, 450, 150, 200, 300, 450},
                                            quad, bounds, opt);
    double pos_err = 0.0;
    const auto got = convex.best_vertex.to_array(), want = quad.center.to_array();
    for (std::size_t i = 0; i < design::kDesignDim; ++i)
        pos_err = std::max(pos_err, std::abs(got[i] - want[i]) / (hi[i] - lo[i]));
    const double f_gap = rel(convex.best.fitness, -quad.g_peak);
    const bool convex_ok = pos_err <= 1e-6 && f_gap <= 1e-6;

    const design::SurrogateFitness surrogate;
    design::NelderMeadOptions bopt;
    bopt.tol_f = -1.0;
    bopt.tol_x = 1e-7;
    bopt.max_evaluations = 4000;
    bopt.pipeline.target_omega = surrogate.options().target_omega;
    const auto opt_point = surrogate.known_optimum();
    auto start = opt_point;
    start.h_oc += 40.0;
    start.w_oc -= 30.0;
    start.h_i -= 20.0;
    const auto boundary = design::nelder_mead(start, surrogate, bounds, bopt);
    const double face = boundary.best.design.h_oc - boundary.best.design.h_ic;
    const bool face_ok = std::abs(face - bounds.min_gap) <= 1e-3;

    design::NelderMeadOptions mopt;
    mopt.pipeline.target_omega = surrogate.options().target_omega;
    const auto multi = design::multi_restart(surrogate, bounds, 24, 42, mopt, default_thread_count());
    const bool feasible_ok = trace_feasible(multi.trace, bounds) && trace_feasible(boundary.trace, bounds) &&
                             trace_feasible(convex.trace, bounds);
    const bool monotone_ok =
        trace_monotone(multi.trace) && trace_monotone(boundary.trace) && trace_monotone(convex.trace);

    report(8, convex_ok && face_ok && feasible_ok && monotone_ok,
           "optimizer: convex optimum within 1e-6, boundary optimum on the 60 nm face, feasible and monotone traces",
           "convex pos err=" + num(pos_err) + " fitness gap=" + num(f_gap) + " evals=" +
               std::to_string(convex.evaluations) + "; face gap=" + num(face) + " nm; rows=" +
               std::to_string(multi.trace.entries.size()) + " feasible=" + (feasible_ok ? "yes" : "no") +
               " monotone=" + (monotone_ok ? "yes" : "no"));
}

void numerics_checks() {
    // Rate equation: adaptive integration against the closed form.
    const auto device = presets::eight_shield_device();
    const auto model =
        counting::make_intra_pulse_model(device, presets::measured_hot_bath(), 60.0, counting::Detuning::red);
    const std::vector<double> times = cooling::log_space(1e-9, 10e-6, 50);
    const auto ode = counting::pulse_occupancy_dynamics(model, 0.0, times, counting::DynamicsMethod::integrate,
                                                        {1e-12, 1e-18, 1e-12});
    double ode_err = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        ode_err = std::max(ode_err, rel(ode.occupancy[i], counting::relaxation_closed_form(model, 0.0, times[i])));

    // Drive: n_c(P) and P(n_c) are inverse.
    double drive_err = 0.0;
    for (double detuning : {0.0, device.mode.omega_m, -device.mode.omega_m, 0.3 * device.cavity.kappa})
        for (double p : {1e-12, 1e-9, 1e-6, 1e-3}) {
            const double n = intracavity_photons(device.cavity, {p, detuning, 1.0});
            drive_err = std::max(drive_err, rel(input_power_for_photons(device.cavity, detuning, n), p));
        }

    // Bose occupancy and its inverse.
    double bose_err = 0.0;
    for (double f : {1e9, 10.02e9, 10.238e9})
        for (double t : {0.01, 0.063, 1.0, 300.0}) {
            const double w = to_angular(f);
            bose_err = std::max(bose_err, rel(temperature_from_occupancy(w, bose_occupancy(w, t)), t));
        }

    // Count estimators over 1000 seeds: mean within 3 standard errors.
    const counting::DetectionChain chain{0.05, 0.6, 0.2};
    const double per_phonon = 1e3, n_true = 0.5, exposure = 1.0;
    const counting::PulseSchedule one{exposure, 0.0, exposure, 1};
    constexpr int seeds = 1000;
    bool mc_ok = true;
    std::string mc_detail;
    for (auto det : {counting::Detuning::red, counting::Detuning::blue}) {
        const double spont = det == counting::Detuning::blue ? 1.0 : 0.0;
        const std::vector<double> mean{exposure * (chain.background() + per_phonon * (n_true + spont))};
        double sum = 0.0, sum2 = 0.0;
        for (int s = 0; s < seeds; ++s) {
            const auto c = counting::sample_counts(mean, one, 4000 + s, static_cast<std::uint64_t>(det));
            const double n = counting::occupancy_from_counts(static_cast<double>(c.counts[0]), exposure, per_phonon,
                                                             chain, det)
                                 .n;
            sum += n;
            sum2 += n * n;
        }
        const double m = sum / seeds;
        const double se = std::sqrt((sum2 / seeds - m * m) / (seeds - 1));
        mc_ok = mc_ok && std::abs(m - n_true) <= 3.0 * se;
        mc_detail += std::string(counting::to_string(det)) + " mean=" + num(m) + " se=" + num(se) + " ";
    }
    {
        const std::vector<double> mean{exposure * (chain.background() + per_phonon * 1.0)};
        double sum = 0.0, sum2 = 0.0;
        for (int s = 0; s < seeds; ++s) {
            const auto c = counting::sample_counts(mean, one, 5000 + s);
            const double g = counting::calibrate_sb0(c, chain).sb0;
            sum += g;
            sum2 += g * g;
        }
        const double m = sum / seeds;
        const double se = std::sqrt((sum2 / seeds - m * m) / (seeds - 1));
        mc_ok = mc_ok && std::abs(m - per_phonon) <= 3.0 * se;
        mc_detail += "sb0 mean=" + num(m) + " se=" + num(se);
    }

    const bool ok = ode_err <= 1e-8 && drive_err <= 1e-9 && bose_err <= 1e-10 && mc_ok;
    report(9, ok, "ODE vs closed form 1e-8, drive roundtrip 1e-9, Bose roundtrip 1e-10, unbiased counts within 3 sigma",
           "ode=" + num(ode_err) + " drive=" + num(drive_err) + " bose=" + num(bose_err) + "; " + mc_detail);
}

}  // namespace

int main() {
    conductance_ratio();
    map_anchor();
    cooperativity_crossing();
    ringdown_loop();
    bath_fit_recovery();
    base_occupancy();
    g0_roundtrip();
    optimizer_properties();
    numerics_checks();
    std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
