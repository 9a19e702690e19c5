#include "omc/cli/commands.hpp"

#include <fstream>
#include <functional>
#include <ostream>

#include "omc/bath/linewidth.hpp"
#include "omc/bath/power_law.hpp"
#include "omc/cooling/analysis.hpp"
#include "omc/core/presets.hpp"
#include "omc/counting/dynamics.hpp"
#include "omc/counting/estimators.hpp"
#include "omc/counting/ringdown.hpp"
#include "omc/counting/simulate.hpp"
#include "omc/design/nelder_mead.hpp"
#include "omc/design/surrogate.hpp"
#include "omc/errors.hpp"
#include "omc/io/csv.hpp"

namespace omc::cli {

using detail::require;

namespace {

struct DeviceHz {
    double f_c, kappa, kappa_e, f_m, gamma_0, gamma_phi, g0, eta_cpl;

    static DeviceHz from(const Device& d) {
        return {to_hz(d.cavity.omega_c), to_hz(d.cavity.kappa), to_hz(d.cavity.kappa_e), to_hz(d.mode.omega_m),
                to_hz(d.mode.gamma_0),   to_hz(d.mode.gamma_phi), to_hz(d.mode.g_0),  d.eta_cpl};
    }
    Device build() const {
        Device d;
        d.cavity = OpticalCavity::from_hz(f_c, kappa, kappa_e);
        d.mode = MechanicalMode::from_hz(f_m, gamma_0, gamma_phi, g0);
        d.eta_cpl = eta_cpl;
        return d;
    }
};

struct Builder {
    DeviceHz device{DeviceHz::from(presets::eight_shield_device())};
    HotBathModel bath{presets::measured_hot_bath()};
    RunConfig config;
};

using Setter = std::function<void(Builder&, const std::string&, const std::string&)>;

struct KeySpec {
    std::string key;
    std::string doc;
    Setter set;
};

double number(const std::string& v, const std::string& key) { return io::parse_double(v, key); }

Setter real(double DeviceHz::*field) {
    return [field](Builder& b, const std::string& v, const std::string& k) { b.device.*field = number(v, k); };
}
Setter bath_real(double HotBathModel::*field, double scale = 1.0) {
    return [field, scale](Builder& b, const std::string& v, const std::string& k) {
        b.bath.*field = number(v, k) * scale;
    };
}
Setter cfg_real(double RunConfig::*field) {
    return [field](Builder& b, const std::string& v, const std::string& k) { b.config.*field = number(v, k); };
}
Setter cfg_size(std::size_t RunConfig::*field) {
    return [field](Builder& b, const std::string& v, const std::string& k) {
        b.config.*field = static_cast<std::size_t>(io::parse_uint(v, k));
    };
}
Setter cfg_u64(std::uint64_t RunConfig::*field) {
    return [field](Builder& b, const std::string& v, const std::string& k) { b.config.*field = io::parse_uint(v, k); };
}
Setter cfg_bool(bool RunConfig::*field) {
    return [field](Builder& b, const std::string& v, const std::string& k) { b.config.*field = io::parse_bool(v, k); };
}
Setter cfg_opt(std::optional<double> RunConfig::*field) {
    return [field](Builder& b, const std::string& v, const std::string& k) { b.config.*field = number(v, k); };
}

const std::vector<KeySpec>& registry() {
    static const std::vector<KeySpec> keys = [] {
        const double w = kTwoPi;  // Hz -> rad/s for bath damping coefficients
        std::vector<KeySpec> k{
            {"device.preset", "eight_shield | zero_shield: starting values for the [device] keys", {}},
            {"device.f_c_hz", "optical resonance frequency (Hz)", real(&DeviceHz::f_c)},
            {"device.kappa_hz", "total optical energy decay rate kappa/2pi (Hz)", real(&DeviceHz::kappa)},
            {"device.kappa_e_hz", "extrinsic optical decay rate kappa_e/2pi (Hz)", real(&DeviceHz::kappa_e)},
            {"device.f_m_hz", "acoustic resonance frequency (Hz)", real(&DeviceHz::f_m)},
            {"device.gamma_0_hz", "intrinsic acoustic decay rate gamma_0/2pi (Hz)", real(&DeviceHz::gamma_0)},
            {"device.gamma_phi_hz", "acoustic pure dephasing rate gamma_phi/2pi (Hz)", real(&DeviceHz::gamma_phi)},
            {"device.g0_hz", "vacuum optomechanical coupling g0/2pi (Hz)", real(&DeviceHz::g0)},
            {"device.eta_cpl", "fiber-to-waveguide coupling efficiency (0-1]", real(&DeviceHz::eta_cpl)},
            {"bath.preset", "measured | none: starting values for the [bath] keys", {}},
            {"bath.occ_amplitude", "hot-bath occupancy amplitude A in n_p = A x^p", bath_real(&HotBathModel::occ_amplitude)},
            {"bath.occ_exponent", "hot-bath occupancy exponent p", bath_real(&HotBathModel::occ_exponent)},
            {"bath.damp_low_amplitude_hz", "low-power damping amplitude B1/2pi (Hz)",
             bath_real(&HotBathModel::damp_low_amplitude, w)},
            {"bath.damp_low_exponent", "low-power damping exponent q1", bath_real(&HotBathModel::damp_low_exponent)},
            {"bath.damp_high_offset_hz", "high-power linewidth offset c2/2pi (Hz)",
             bath_real(&HotBathModel::damp_high_offset, w)},
            {"bath.damp_high_amplitude_hz", "high-power damping amplitude B2/2pi (Hz)",
             bath_real(&HotBathModel::damp_high_amplitude, w)},
            {"bath.damp_high_exponent", "high-power damping exponent q2", bath_real(&HotBathModel::damp_high_exponent)},
            {"bath.damp_dephasing_hz", "gamma_phi/2pi the linewidth law is decomposed against (Hz)",
             bath_real(&HotBathModel::damp_dephasing, w)},
            {"bath.beta_per_w", "waveguide heating beta (photons per W of on-chip power)",
             bath_real(&HotBathModel::beta)},
            {"bath.n_0", "base bath occupancy", bath_real(&HotBathModel::n_0)},
            {"bath.t_0_k", "base temperature (K)", bath_real(&HotBathModel::t_0)},
            {"bath.include_dephasing", "count gamma_phi as a bath channel at n_p (bool)",
             [](Builder& b, const std::string& v, const std::string& key) {
                 b.config.bath_options.include_dephasing = io::parse_bool(v, key);
             }},
            {"sweep.nc_min", "smallest intracavity photon number", cfg_real(&RunConfig::nc_min)},
            {"sweep.nc_max", "largest intracavity photon number", cfg_real(&RunConfig::nc_max)},
            {"sweep.nc_count", "number of log-spaced n_c points", cfg_size(&RunConfig::nc_count)},
            {"sweep.qc_min", "smallest loaded optical Q", cfg_real(&RunConfig::qc_min)},
            {"sweep.qc_max", "largest loaded optical Q", cfg_real(&RunConfig::qc_max)},
            {"sweep.qc_count", "number of log-spaced Q_c points", cfg_size(&RunConfig::qc_count)},
            {"sweep.levels", "comma-separated C_eff contour levels",
             [](Builder& b, const std::string& v, const std::string& key) {
                 b.config.levels = io::parse_double_list(v, key);
             }},
            {"photons.p_min_w", "smallest on-chip power (W)", cfg_real(&RunConfig::p_min_w)},
            {"photons.p_max_w", "largest on-chip power (W)", cfg_real(&RunConfig::p_max_w)},
            {"photons.p_count", "number of log-spaced powers", cfg_size(&RunConfig::p_count)},
            {"photons.detuning_hz", "cavity-pump detuning (Hz); default +f_m", cfg_opt(&RunConfig::photons_detuning_hz)},
            {"detection.eta_det", "detection efficiency incl. detector QE (0-1]",
             [](Builder& b, const std::string& v, const std::string& key) { b.config.chain.eta_det = number(v, key); }},
            {"detection.dark_rate", "detector dark count rate (counts/s)",
             [](Builder& b, const std::string& v, const std::string& key) { b.config.chain.dark_rate = number(v, key); }},
            {"detection.pump_bleed_rate", "pump bleed-through count rate (counts/s)",
             [](Builder& b, const std::string& v, const std::string& key) {
                 b.config.chain.pump_bleed_rate = number(v, key);
             }},
            {"pulse.n_c", "intracavity photons during the pulse", cfg_real(&RunConfig::pulse_n_c)},
            {"pulse.tau_pulse_s", "pulse length (s)", cfg_real(&RunConfig::pulse_tau)},
            {"pulse.tau_bin_s", "histogram bin width (s)", cfg_real(&RunConfig::pulse_tau_bin)},
            {"pulse.n_pulses", "number of pulses summed in the histogram", cfg_u64(&RunConfig::pulse_count)},
            {"pulse.detuning", "red | blue | resonant",
             [](Builder& b, const std::string& v, const std::string&) {
                 b.config.pulse_detuning = counting::parse_detuning(v);
             }},
            {"pulse.n_start", "occupancy at the pulse start; default bath n_0", cfg_opt(&RunConfig::pulse_n_start)},
            {"pulse.bath_rise_s", "hot-bath ramp time constant (s); unset means an instantaneous bath",
             cfg_opt(&RunConfig::bath_rise_tau)},
            {"pulse.noiseless", "emit rounded expected counts instead of Poisson draws (bool)",
             cfg_bool(&RunConfig::pulse_noiseless)},
            {"ringdown.n_c", "intracavity photons during read pulses", cfg_real(&RunConfig::rd_n_c)},
            {"ringdown.tau_pulse_s", "pulse length (s)", cfg_real(&RunConfig::rd_tau_pulse)},
            {"ringdown.tau_bin_s", "histogram bin width (s)", cfg_real(&RunConfig::rd_tau_bin)},
            {"ringdown.n_pulses", "pulses per tau_off point", cfg_u64(&RunConfig::rd_pulses)},
            {"ringdown.tau_off_min_s", "shortest inter-pulse delay (s)", cfg_real(&RunConfig::rd_tau_off_min)},
            {"ringdown.tau_off_max_s", "longest inter-pulse delay (s)", cfg_real(&RunConfig::rd_tau_off_max)},
            {"ringdown.tau_off_count", "number of log-spaced delays", cfg_size(&RunConfig::rd_tau_off_count)},
            {"ringdown.calibrate", "calibrate Gamma_SB0 with blue-detuned pulses (bool)",
             cfg_bool(&RunConfig::rd_calibrate)},
            {"ringdown.noiseless", "use expected counts instead of Poisson draws (bool)",
             cfg_bool(&RunConfig::rd_noiseless)},
            {"optimize.restarts", "number of random restarts", cfg_size(&RunConfig::restarts)},
            {"optimize.max_evaluations", "evaluation budget per restart", cfg_size(&RunConfig::max_evaluations)},
            {"optimize.tol_f", "relative best-fitness change over 2(n+1) iterations that stops a run",
             cfg_real(&RunConfig::tol_f)},
            {"optimize.tol_x", "simplex size (nm) that stops a run", cfg_real(&RunConfig::tol_x)},
            {"optimize.initial_step", "initial simplex edge as a fraction of the box width",
             cfg_real(&RunConfig::initial_step)},
            {"optimize.min_gap_nm", "minimum inner/outer gap (nm)", cfg_real(&RunConfig::min_gap)},
            {"optimize.q_threshold", "scattering Q below which designs are filtered", cfg_real(&RunConfig::q_threshold)},
            {"optimize.target_hz", "optical target frequency (Hz); 0 disables rescaling", cfg_real(&RunConfig::target_hz)},
            {"optimize.noise_sigma", "relative evaluation noise of the surrogate", cfg_real(&RunConfig::noise_sigma)},
            {"spectrum.n_c", "intracavity photons", cfg_real(&RunConfig::spectrum_n_c)},
            {"spectrum.span_linewidths", "grid half-width in linewidths", cfg_real(&RunConfig::spectrum_span)},
            {"spectrum.points", "number of frequency points", cfg_size(&RunConfig::spectrum_points)},
            {"fit.kind", "linewidth | occupancy | power_law_offset | backaction",
             [](Builder& b, const std::string& v, const std::string&) { b.config.fit_kind = v; }},
            {"run.seed", "master RNG seed (unsigned 64-bit)", cfg_u64(&RunConfig::seed)},
            {"run.threads", "worker threads",
             [](Builder& b, const std::string& v, const std::string& key) {
                 b.config.threads = static_cast<unsigned>(io::parse_uint(v, key));
             }},
        };
        return k;
    }();
    return keys;
}

void validate_config(const RunConfig& c) {
    c.device.validate();
    c.bath.validate();
    c.chain.validate();
    require(c.nc_min > 0.0 && c.nc_max >= c.nc_min, "sweep.nc_min/nc_max must satisfy 0 < min <= max");
    require(c.nc_count >= 1, "sweep.nc_count must be at least 1");
    require(c.qc_min > 0.0 && c.qc_max >= c.qc_min, "sweep.qc_min/qc_max must satisfy 0 < min <= max");
    require(c.qc_count >= 1, "sweep.qc_count must be at least 1");
    for (double l : c.levels) require(l > 0.0, "sweep.levels must be positive");
    require(c.p_min_w > 0.0 && c.p_max_w >= c.p_min_w, "photons.p_min_w/p_max_w must satisfy 0 < min <= max");
    require(c.p_count >= 1, "photons.p_count must be at least 1");
    require(c.pulse_n_c >= 0.0, "pulse.n_c must be non-negative");
    counting::PulseSchedule{c.pulse_tau, 0.0, c.pulse_tau_bin, c.pulse_count}.validate();
    require(!c.pulse_n_start || *c.pulse_n_start >= 0.0, "pulse.n_start must be non-negative");
    require(!c.bath_rise_tau || *c.bath_rise_tau > 0.0, "pulse.bath_rise_s must be positive");
    require(c.rd_n_c > 0.0, "ringdown.n_c must be positive");
    counting::PulseSchedule{c.rd_tau_pulse, 0.0, c.rd_tau_bin, c.rd_pulses}.validate();
    require(c.rd_tau_off_min > 0.0 && c.rd_tau_off_max > c.rd_tau_off_min,
            "ringdown.tau_off_min_s/tau_off_max_s must satisfy 0 < min < max");
    require(c.rd_tau_off_count >= 4, "ringdown.tau_off_count must be at least 4");
    require(c.restarts >= 1, "optimize.restarts must be at least 1");
    require(c.max_evaluations >= 1, "optimize.max_evaluations must be positive");
    require(c.initial_step > 0.0 && c.initial_step <= 1.0, "optimize.initial_step must lie in (0, 1]");
    require(c.min_gap > 0.0, "optimize.min_gap_nm must be positive");
    require(c.target_hz >= 0.0, "optimize.target_hz must be non-negative");
    require(c.noise_sigma >= 0.0, "optimize.noise_sigma must be non-negative");
    require(c.spectrum_n_c >= 0.0, "spectrum.n_c must be non-negative");
    require(c.spectrum_span > 0.0, "spectrum.span_linewidths must be positive");
    require(c.spectrum_points >= 2, "spectrum.points must be at least 2");
    require(c.fit_kind == "linewidth" || c.fit_kind == "occupancy" || c.fit_kind == "power_law_offset" ||
                c.fit_kind == "backaction",
            "fit.kind must be linewidth, occupancy, power_law_offset or backaction");
    require(c.threads >= 1, "run.threads must be at least 1");
}

std::vector<double> grid(double lo, double hi, std::size_t count) {
    if (count == 1 || lo == hi) return std::vector<double>(1, lo);
    return cooling::log_space(lo, hi, count);
}

cooling::SweepSpec sweep_of(const RunConfig& c) {
    cooling::SweepSpec s;
    s.n_c = grid(c.nc_min, c.nc_max, c.nc_count);
    s.q_c = grid(c.qc_min, c.qc_max, c.qc_count);
    s.bath_options = c.bath_options;
    s.threads = c.threads;
    return s;
}

void comment(std::ostream& out, const std::string& text) { out << "# " << text << '\n'; }

std::string fmt(double v) { return io::format_double(v); }

}  // namespace

const std::vector<KeyDoc>& config_keys() {
    static const std::vector<KeyDoc> docs = [] {
        std::vector<KeyDoc> d;
        for (const auto& k : registry()) d.push_back({k.key, k.doc});
        return d;
    }();
    return docs;
}

RunConfig build_config(const io::IniFile& ini) {
    Builder b;
    if (ini.has("device.preset")) {
        const auto& p = ini.values.at("device.preset");
        if (p == "eight_shield") b.device = DeviceHz::from(presets::eight_shield_device());
        else if (p == "zero_shield") b.device = DeviceHz::from(presets::zero_shield_device());
        else throw ValidationError("device.preset: unknown preset '" + p + "'");
    }
    if (ini.has("bath.preset")) {
        const auto& p = ini.values.at("bath.preset");
        if (p == "measured") b.bath = presets::measured_hot_bath();
        else if (p == "none") b.bath = HotBathModel{};
        else throw ValidationError("bath.preset: unknown preset '" + p + "'");
    }
    const auto& keys = registry();
    for (const auto& [key, value] : ini.values) {
        const auto it = std::find_if(keys.begin(), keys.end(), [&](const auto& k) { return k.key == key; });
        if (it == keys.end()) throw ValidationError("unknown config key '" + key + "'");
        if (!it->set) continue;
        try {
            it->set(b, value, key);
        } catch (const ValidationError& e) {
            const std::string what = e.what();
            if (what.find(key) != std::string::npos) throw;
            throw ValidationError(key + ": " + what);
        }
    }
    try {
        b.config.device = b.device.build();
        b.config.device.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("[device] ") + e.what());
    }
    b.config.bath = b.bath;
    try {
        b.config.bath.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("[bath] ") + e.what());
    }
    validate_config(b.config);
    return b.config;
}

void cmd_photons(const CommandContext& ctx, std::ostream& out) {
    const auto& c = ctx.config;
    const double detuning_hz = c.photons_detuning_hz.value_or(to_hz(c.device.mode.omega_m));
    out << ctx.manifest;
    io::write_row(out, {"p_in_w", "detuning_hz", "n_c"});
    for (double p : grid(c.p_min_w, c.p_max_w, c.p_count)) {
        const DriveCondition drive{p, to_angular(detuning_hz), c.device.eta_cpl};
        io::write_row(out, {fmt(p), fmt(detuning_hz), fmt(intracavity_photons(c.device.cavity, drive))});
    }
}

void cmd_cool(const CommandContext& ctx, std::ostream& out) {
    const auto& c = ctx.config;
    const auto points = cooling::cooling_curve(c.device, c.bath, sweep_of(c));
    out << ctx.manifest;
    io::write_curve(out, points);
}

void cmd_ceff(const CommandContext& ctx, std::ostream& out) {
    const auto& c = ctx.config;
    const auto curve = cooling::ceff_curve(c.device, c.bath, sweep_of(c));
    out << ctx.manifest;
    comment(out, "peak_c_eff=" + fmt(curve.peak_c_eff) + " at n_c=" + fmt(curve.peak_n_c));
    comment(out, "first_c_eff_above_1_n_c=" + (curve.first_crossing ? fmt(*curve.first_crossing) : std::string("none")));
    io::write_curve(out, curve.points);
}

void cmd_map(const CommandContext& ctx, std::ostream& out) {
    const auto& c = ctx.config;
    auto sweep = sweep_of(c);
    sweep.beta = c.bath.beta;
    const auto map = cooling::ceff_map(c.device, c.bath, sweep, ctx.contours ? c.levels : std::vector<double>{});
    out << ctx.manifest;
    io::write_map(out, map);
    if (ctx.contours) {
        std::ofstream file(*ctx.contours, std::ios::binary);
        require(static_cast<bool>(file), "cannot write contours to '" + *ctx.contours + "'");
        file << ctx.manifest;
        io::write_contours(file, map.contours);
    }
}

void cmd_bath_fit(const CommandContext& ctx, std::ostream& out) {
    const auto& c = ctx.config;
    require(ctx.input.has_value(), "bath-fit needs --input <sweep.csv>");
    const auto points = io::read_sweep(io::read_table_file(*ctx.input));
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;
    const auto row = [&](const std::string& name, double v, double s) { rows.push_back({name, fmt(v), fmt(s)}); };
    const auto sd = [](const Eigen::MatrixXd& cov, Eigen::Index i) {
        return i < cov.rows() ? std::sqrt(std::max(cov(i, i), 0.0)) : 0.0;
    };

    if (c.fit_kind == "linewidth") {
        // Linewidths are read in Hz and fitted in Hz; every *_hz row is Hz.
        const auto fit = bath::fit_piecewise_linewidth(points);
        row("gamma_phi_hz", fit.gamma_phi, 0.0);
        row("gamma_phi_is_upper_bound", fit.gamma_phi_is_upper_bound ? 1.0 : 0.0, 0.0);
        row("plateau_points", static_cast<double>(fit.plateau_points), 0.0);
        if (fit.low) {
            row("low_amplitude_hz", fit.low->amplitude, sd(fit.low->covariance, 0));
            row("low_exponent", fit.low->exponent, sd(fit.low->covariance, 1));
            row("low_offset_hz", fit.low->offset.value_or(0.0), sd(fit.low->covariance, 2));
        }
        if (fit.high) {
            row("high_offset_hz", fit.high->offset.value_or(0.0), sd(fit.high->covariance, 2));
            row("high_amplitude_hz", fit.high->amplitude, sd(fit.high->covariance, 0));
            row("high_exponent", fit.high->exponent, sd(fit.high->covariance, 1));
        }
        if (fit.crossover) row("crossover_n_c", *fit.crossover, 0.0);
        notes.push_back("decomposition: " + fit.decomposition);
        for (const auto& w : fit.warnings) notes.push_back("warning: " + w);
    } else if (c.fit_kind == "occupancy" || c.fit_kind == "power_law_offset") {
        const bool offset = c.fit_kind == "power_law_offset";
        const auto fit = bath::fit_power_law(points, offset);
        row("amplitude", fit.amplitude, sd(fit.covariance, 0));
        row("exponent", fit.exponent, sd(fit.covariance, 1));
        if (offset) row("offset", fit.offset.value_or(0.0), sd(fit.covariance, 2));
        row("residual_norm", fit.residual_norm, 0.0);
    } else {
        std::vector<double> n_c, gamma, sigma;
        for (const auto& p : points) {
            n_c.push_back(p.x);
            gamma.push_back(to_angular(p.y));
            if (p.sigma > 0.0) sigma.push_back(to_angular(p.sigma));
        }
        if (sigma.size() != n_c.size()) sigma.clear();
        const auto est = counting::g0_from_backaction_slope(n_c, gamma, c.device.cavity, sigma);
        row("g0_hz", to_hz(est.g_0), to_hz(est.g_0_sigma));
        row("slope_hz_per_photon", to_hz(est.line.slope), to_hz(est.line.slope_sigma));
        row("intercept_hz", to_hz(est.line.intercept), to_hz(est.line.intercept_sigma));
    }
    out << ctx.manifest;
    comment(out, "fit.kind=" + c.fit_kind + " points=" + std::to_string(points.size()));
    for (const auto& n : notes) comment(out, n);
    io::write_row(out, {"parameter", "value", "sigma"});
    for (const auto& r : rows) io::write_row(out, r);
}

void cmd_ringdown(const CommandContext& ctx, std::ostream& out) {
    const auto& c = ctx.config;
    std::vector<counting::RingdownPoint> points;
    std::vector<std::string> notes;
    if (ctx.input) {
        points = io::read_ringdown(io::read_table_file(*ctx.input));
    } else {
        counting::RingdownConfig rc;
        rc.device = c.device;
        rc.bath = c.bath;
        rc.chain = c.chain;
        rc.n_c_peak = c.rd_n_c;
        rc.tau_pulse = c.rd_tau_pulse;
        rc.tau_bin = c.rd_tau_bin;
        rc.n_pulses = c.rd_pulses;
        rc.tau_off = cooling::log_space(c.rd_tau_off_min, c.rd_tau_off_max, c.rd_tau_off_count);
        rc.bath_rise_tau = c.bath_rise_tau;
        rc.calibrate_with_blue = c.rd_calibrate;
        rc.noiseless = c.rd_noiseless;
        rc.threads = c.threads;
        const auto data = counting::simulate_ringdown(rc, c.seed);
        points = data.points;
        notes.push_back("sb0_true=" + fmt(data.sb0_true) + " sb0_used=" + fmt(data.sb0_used));
        if (!data.bath_model.empty()) notes.push_back("bath model: " + data.bath_model);
    }
    const auto fit = counting::fit_ringdown(points, c.device.mode.omega_m);
    out << ctx.manifest;
    for (const auto& n : notes) comment(out, n);
    comment(out, "gamma_0_hz=" + fmt(to_hz(fit.gamma_0_hat)) + " sigma_hz=" + fmt(to_hz(fit.gamma_0_sigma)) +
                     " ci95_hz=[" + fmt(to_hz(fit.gamma_0_ci_low)) + "," + fmt(to_hz(fit.gamma_0_ci_high)) + "]");
    comment(out, "q_m=" + fmt(fit.q_m_hat) + " ci95=[" + fmt(fit.q_m_ci_low) + "," + fmt(fit.q_m_ci_high) + "]");
    io::write_ringdown(out, points);
}

void cmd_counts(const CommandContext& ctx, std::ostream& out) {
    const auto& c = ctx.config;
    const auto model =
        counting::make_intra_pulse_model(c.device, c.bath, c.pulse_n_c, c.pulse_detuning, c.bath_rise_tau);
    const double n_start = c.pulse_n_start.value_or(c.bath.n_0);
    const counting::OccupancyPath path(model, n_start, c.pulse_tau);
    const double per_phonon = counting::per_phonon_rate(c.chain, c.device, model.gamma_om, c.pulse_detuning);
    const double spontaneous = c.pulse_detuning == counting::Detuning::blue ? 1.0 : 0.0;
    const double bg = c.chain.background();
    const auto rate = [&](double t) { return bg + per_phonon * (std::max(path(t), 0.0) + spontaneous); };
    const counting::PulseSchedule schedule{c.pulse_tau, 0.0, c.pulse_tau_bin, c.pulse_count};
    counting::BinnedCounts counts;
    if (c.pulse_noiseless) {
        const auto means = counting::expected_counts(rate, schedule);
        counts.bin_width = schedule.tau_bin;
        counts.n_pulses = schedule.n_pulses;
        for (double m : means) counts.counts.push_back(static_cast<std::uint64_t>(std::llround(m)));
    } else {
        counts = counting::simulate_counts(rate, schedule, c.seed);
    }
    out << ctx.manifest;
    comment(out, "detuning=" + std::string(counting::to_string(c.pulse_detuning)) + " rate_per_phonon=" +
                     fmt(per_phonon) + " background=" + fmt(bg));
    if (model.unstable()) comment(out, "warning: blue-detuned anti-damping exceeds total damping (unstable)");
    else comment(out, "n_steady=" + fmt(model.steady_state()));
    if (model.bath_rise_tau)
        comment(out, "bath model: single-exponential hot-bath ramp (phenomenological stand-in)");
    io::write_histogram(out, counts);
}

void cmd_optimize(const CommandContext& ctx, std::ostream& out) {
    const auto& c = ctx.config;
    auto bounds = design::DesignBounds::defaults();
    bounds.min_gap = c.min_gap;
    design::SurrogateOptions so;
    so.noise_sigma = c.noise_sigma;
    so.noise_seed = c.seed;
    if (c.target_hz > 0.0) so.target_omega = to_angular(c.target_hz);
    const design::SurrogateFitness surrogate(so);
    design::NelderMeadOptions opt;
    opt.tol_f = c.tol_f;
    opt.tol_x = c.tol_x;
    opt.initial_step = c.initial_step;
    opt.max_evaluations = c.max_evaluations;
    opt.record_simplex = false;
    opt.pipeline.q_threshold = c.q_threshold;
    if (c.target_hz > 0.0) opt.pipeline.target_omega = to_angular(c.target_hz);
    const auto result = design::multi_restart(surrogate, bounds, c.restarts, c.seed, opt, c.threads);
    out << ctx.manifest;
    comment(out, "evaluator: analytic surrogate (three wells, low-Q filter band, failure region)");
    comment(out, "best restart=" + std::to_string(result.best_restart) + " fitness_hz=" +
                     fmt(to_hz(result.best.fitness)) + " status=" + std::string(design::to_string(result.best.status)));
    io::write_trace(out, result.trace);
}

void cmd_spectrum(const CommandContext& ctx, std::ostream& out) {
    const auto& c = ctx.config;
    const auto point = cooling::cooling_point(c.device, c.bath, c.spectrum_n_c, c.bath_options);
    const double linewidth = total_linewidth(c.device.mode, point.result.bath, point.result.gamma_om);
    const double f_m = to_hz(c.device.mode.omega_m);
    const double half = c.spectrum_span * to_hz(linewidth);
    std::vector<double> grid_hz(c.spectrum_points);
    for (std::size_t i = 0; i < grid_hz.size(); ++i)
        grid_hz[i] = f_m - half + 2.0 * half * static_cast<double>(i) / static_cast<double>(grid_hz.size() - 1);
    const auto s = thermal_noise_spectrum(c.device.mode, linewidth, point.result.n_avg, grid_hz);
    out << ctx.manifest;
    comment(out, "n_avg=" + fmt(s.area) + " fwhm_hz=" + fmt(s.fwhm_hz) +
                     " normalization: " + s.normalization);
    io::write_row(out, {"freq_hz", "psd"});
    for (std::size_t i = 0; i < s.frequency_hz.size(); ++i) io::write_row(out, {fmt(s.frequency_hz[i]), fmt(s.density[i])});
}

}  // namespace omc::cli
