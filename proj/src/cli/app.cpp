#include "omc/cli/app.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "omc/cli/commands.hpp"
#include "omc/errors.hpp"
#include "omc/io/csv.hpp"
#include "omc/parallel.hpp"

namespace omc::cli {

namespace {

using Handler = void (*)(const CommandContext&, std::ostream&);

struct Invocation {
    std::string config_path;
    std::string out_path;
    std::string input;
    std::string contours;
    std::vector<std::string> sets;
    std::map<std::string, std::string> flags;  // config key -> raw value
    std::optional<unsigned> threads;
    std::string command;
    Handler handler{nullptr};
};

struct FlagBinding {
    const char* flag;
    const char* key;
    const char* help;
};

std::string keys_footer() {
    std::string text = "Config keys ([section] key = value; frequencies in Hz):\n";
    for (const auto& k : config_keys()) text += "  " + k.key + "  " + k.doc + "\n";
    text += "\nExit codes: 0 success, 2 invalid input or configuration, 3 numeric failure.";
    return text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optomechanical cavity cooling, counting and design toolkit", "omc"};
    app.require_subcommand(1);
    app.footer(keys_footer());
    app.set_version_flag("--version", std::string(OMC_VERSION));

    Invocation inv;
    // Flag storage must outlive parsing; one slot per (subcommand, flag).
    std::vector<std::unique_ptr<std::string>> slots;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", inv.config_path, "INI configuration file");
        sub->add_option("--out", inv.out_path, "output CSV path (default: stdout)");
        sub->add_option("--set", inv.sets, "override a config key: section.key=value (repeatable)");
        sub->add_option_function<unsigned>(
               "--threads", [&](unsigned t) { inv.threads = t; }, "worker threads (default: hardware)")
            ->check(CLI::PositiveNumber);
    };
    const auto bind = [&](CLI::App* sub, std::initializer_list<FlagBinding> bindings) {
        for (const auto& b : bindings) {
            slots.push_back(std::make_unique<std::string>());
            std::string* slot = slots.back().get();
            const std::string key = b.key;
            sub->add_option(b.flag, *slot, std::string(b.help) + " (" + key + ")")
                ->each([&inv, key](const std::string& v) { inv.flags[key] = v; });
        }
    };
    const FlagBinding seed{"--seed", "run.seed", "master RNG seed"};
    const FlagBinding beta{"--beta", "bath.beta_per_w", "waveguide heating beta, photons per W"};
    const std::initializer_list<FlagBinding> nc_grid{{"--nc-min", "sweep.nc_min", "smallest n_c"},
                                                     {"--nc-max", "sweep.nc_max", "largest n_c"},
                                                     {"--nc-count", "sweep.nc_count", "n_c points"}};

    const auto make = [&](const char* name, const char* help, Handler h) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub);
        bind(sub, {seed, beta});
        sub->callback([&inv, name, h] {
            inv.command = name;
            inv.handler = h;
        });
        return sub;
    };

    auto* photons = make("photons", "intracavity photon number versus on-chip power", cmd_photons);
    bind(photons, {{"--p-min", "photons.p_min_w", "smallest power (W)"},
                   {"--p-max", "photons.p_max_w", "largest power (W)"},
                   {"--p-count", "photons.p_count", "power points"},
                   {"--detuning-hz", "photons.detuning_hz", "detuning (Hz)"}});

    auto* cool = make("cool", "back-action cooling curve versus n_c", cmd_cool);
    bind(cool, nc_grid);
    auto* ceff = make("ceff", "quantum cooperativity versus n_c", cmd_ceff);
    bind(ceff, nc_grid);
    auto* map = make("map", "occupancy and cooperativity over (Q_c, n_c)", cmd_map);
    bind(map, nc_grid);
    bind(map, {{"--qc-min", "sweep.qc_min", "smallest Q_c"},
               {"--qc-max", "sweep.qc_max", "largest Q_c"},
               {"--qc-count", "sweep.qc_count", "Q_c points"},
               {"--levels", "sweep.levels", "comma-separated C_eff contour levels"}});
    map->add_option("--contours", inv.contours, "also write iso-C_eff polylines to this CSV");

    auto* fit = make("bath-fit", "fit hot-bath laws or g0 from a sweep CSV (n_c,value[,sigma])", cmd_bath_fit);
    fit->add_option("--input", inv.input, "sweep CSV")->required();
    bind(fit, {{"--kind", "fit.kind", "linewidth | occupancy | power_law_offset | backaction"}});

    auto* ringdown = make("ringdown", "simulate (or read with --input) and fit a ringdown dataset", cmd_ringdown);
    ringdown->add_option("--input", inv.input, "ringdown CSV to fit instead of simulating");
    bind(ringdown, {{"--n-c", "ringdown.n_c", "intracavity photons"},
                    {"--pulses", "ringdown.n_pulses", "pulses per delay"}});

    auto* counts = make("counts", "simulate a pulsed photon-counting histogram", cmd_counts);
    bind(counts, {{"--n-c", "pulse.n_c", "intracavity photons"},
                  {"--pulses", "pulse.n_pulses", "number of pulses"},
                  {"--detuning", "pulse.detuning", "red | blue | resonant"}});

    auto* optimize = make("optimize", "multi-restart Nelder-Mead design search on the surrogate", cmd_optimize);
    bind(optimize, {{"--restarts", "optimize.restarts", "random restarts"},
                    {"--max-evals", "optimize.max_evaluations", "evaluations per restart"},
                    {"--noise", "optimize.noise_sigma", "relative evaluation noise"}});

    auto* spectrum = make("spectrum", "thermal-noise spectrum of the cooled mode", cmd_spectrum);
    bind(spectrum, {{"--n-c", "spectrum.n_c", "intracavity photons"},
                    {"--points", "spectrum.points", "frequency points"}});

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        io::IniFile ini;
        if (!inv.config_path.empty()) ini = io::parse_ini_file(inv.config_path);
        for (const auto& s : inv.sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos || s.find('.') > eq)
                throw ValidationError("--set expects section.key=value, got '" + s + "'");
            ini.set(s.substr(0, eq), s.substr(eq + 1));
        }
        for (const auto& [key, value] : inv.flags) ini.set(key, value);

        CommandContext ctx;
        ctx.config = build_config(ini);
        ctx.config.threads = inv.threads.value_or(default_thread_count());
        ctx.command = inv.command;
        if (!inv.input.empty()) ctx.input = inv.input;
        if (!inv.contours.empty()) ctx.contours = inv.contours;
        const auto hash = io::fnv1a("command=" + inv.command + "\n" + ini.canonical());
        ctx.manifest = "# omc " + std::string(OMC_VERSION) + " command=" + inv.command +
                       " config_hash=" + io::hex64(hash) + " seed=" + std::to_string(ctx.config.seed) + "\n";

        // Render fully before touching the output file so failures leave no partial CSV.
        std::ostringstream buffer;
        inv.handler(ctx, buffer);
        if (inv.out_path.empty()) {
            out << buffer.str();
        } else {
            std::ofstream file(inv.out_path, std::ios::binary);
            if (!file) throw ValidationError("cannot write '" + inv.out_path + "'");
            file << buffer.str();
        }
        return kExitOk;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const FitError& e) {
        err << "numeric failure: " << e.what() << '\n';
        if (!e.trace().empty()) {
            err << "iteration trace (iteration, cost, damping):\n";
            for (const auto& r : e.trace()) err << "  " << r.iteration << ", " << r.cost << ", " << r.damping << '\n';
        }
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }
}

}  // namespace omc::cli
