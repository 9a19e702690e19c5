#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "omc/cli/app.hpp"
#include "omc/cooling/analysis.hpp"
#include "omc/core/presets.hpp"
#include "omc/io/csv.hpp"
#include "omc/units.hpp"

using namespace omc;
using doctest::Approx;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

io::Table table_of(const std::string& text) {
    std::istringstream in(text);
    return io::read_table(in);
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("omc_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("help lists config keys and exits cleanly") {
    const auto r = run({"--help"});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.find("device.kappa_hz") != std::string::npos);
    CHECK(r.out.find("Exit codes") != std::string::npos);
    CHECK(run({}).code == cli::kExitValidation);
    CHECK(run({"frobnicate"}).code == cli::kExitValidation);
}

TEST_CASE("configuration errors exit with code 2 and name the key") {
    auto r = run({"cool", "--set", "device.bogus=1"});
    CHECK(r.code == cli::kExitValidation);
    CHECK(r.err.find("device.bogus") != std::string::npos);

    r = run({"cool", "--set", "device.eta_cpl=2"});
    CHECK(r.code == cli::kExitValidation);
    CHECK(r.err.find("eta_cpl") != std::string::npos);

    r = run({"cool", "--set", "sweep.nc_count=abc"});
    CHECK(r.code == cli::kExitValidation);
    CHECK(r.err.find("sweep.nc_count") != std::string::npos);

    CHECK(run({"cool", "--config", "/nonexistent/omc.cfg"}).code == cli::kExitValidation);
    CHECK(run({"cool", "--set", "novalue"}).code == cli::kExitValidation);
    CHECK(run({"counts", "--detuning", "sideways"}).code == cli::kExitValidation);
    CHECK(run({"bath-fit", "--input", "/nonexistent/sweep.csv"}).code == cli::kExitValidation);
}

TEST_CASE("cool with the sample config matches the library") {
    const auto r = run({"cool", "--config", std::string(OMC_SOURCE_DIR) + "/configs/eight_shield.cfg", "--beta", "0"});
    REQUIRE(r.code == cli::kExitOk);
    const auto t = table_of(r.out);
    REQUIRE(t.comments.size() == 1);
    CHECK(t.comments[0].find("command=cool") != std::string::npos);
    CHECK(t.comments[0].find("config_hash=") != std::string::npos);
    REQUIRE(t.rows.size() == 121);

    auto bath = presets::measured_hot_bath();
    bath.beta = 0.0;
    cooling::SweepSpec s;
    s.n_c = cooling::log_space(0.1, 1e4, 121);
    const auto ref = cooling::cooling_curve(presets::eight_shield_device(), bath, s);
    for (std::size_t i = 0; i < ref.size(); ++i) {
        CHECK(t.number(i, "n_c") == ref[i].n_c);
        CHECK(t.number(i, "n_avg") == ref[i].result.n_avg);
        CHECK(t.number(i, "c_eff") == ref[i].result.c_eff);
    }
}

TEST_CASE("flags override the config and change the hash") {
    const auto a = run({"ceff", "--nc-count", "5"});
    const auto b = run({"ceff", "--nc-count", "5", "--beta", "15e6"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    const auto ta = table_of(a.out);
    const auto tb = table_of(b.out);
    CHECK(ta.rows.size() == 5);
    CHECK(ta.comments[0] != tb.comments[0]);
    CHECK(tb.number(4, "n_avg") > ta.number(4, "n_avg"));
}

TEST_CASE("same seed gives byte-identical output") {
    const std::vector<std::string> counts{"counts", "--pulses", "1e6", "--n-c", "10", "--seed", "9"};
    const auto a = run(counts);
    REQUIRE(a.code == 0);
    CHECK(run(counts).out == a.out);
    auto other = counts;
    other.back() = "10";
    CHECK(run(other).out != a.out);

    const std::vector<std::string> opt{"optimize", "--restarts", "3", "--max-evals", "200", "--seed", "4"};
    const auto o = run(opt);
    REQUIRE(o.code == 0);
    auto one_thread = opt;
    one_thread.insert(one_thread.end(), {"--threads", "1"});
    CHECK(run(one_thread).out == o.out);
    CHECK(o.out.find("status=ok") != std::string::npos);
    const auto trace = io::read_trace(table_of(o.out));
    CHECK(trace.size() <= 600);
    CHECK_FALSE(trace.empty());
}

TEST_CASE("counts output is a readable histogram") {
    const auto r = run({"counts", "--pulses", "1e5", "--detuning", "blue", "--seed", "1"});
    REQUIRE(r.code == 0);
    const auto h = io::read_histogram(table_of(r.out));
    CHECK(h.n_pulses == 100000);
    CHECK(h.bin_width > 0.0);
    CHECK_FALSE(h.counts.empty());
}

TEST_CASE("map writes grid and contour files") {
    const auto out = temp_path("map.csv");
    const auto contours = temp_path("contours.csv");
    const auto r = run({"map", "--qc-count", "6", "--nc-count", "7", "--levels", "0.5,1", "--out", out,
                        "--contours", contours});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const auto grid = table_of(slurp(out));
    CHECK(grid.rows.size() == 42);
    const auto lines = table_of(slurp(contours));
    CHECK(lines.header == std::vector<std::string>{"level", "polyline", "q_c", "n_c"});
    std::filesystem::remove(out);
    std::filesystem::remove(contours);
}

TEST_CASE("ringdown simulate then refit from file") {
    const auto path = temp_path("ringdown.csv");
    const auto sim = run({"ringdown", "--set", "ringdown.noiseless=true", "--out", path});
    REQUIRE(sim.code == 0);
    const auto first = table_of(slurp(path));
    const auto refit = run({"ringdown", "--input", path});
    REQUIRE(refit.code == 0);
    const auto second = table_of(refit.out);
    const auto gamma_line = [](const io::Table& t) {
        for (const auto& c : t.comments)
            if (c.find("gamma_0_hz=") != std::string::npos) return c.substr(c.find("gamma_0_hz="));
        return std::string();
    };
    CHECK_FALSE(gamma_line(first).empty());
    CHECK(gamma_line(first) == gamma_line(second));
    CHECK(first.rows == second.rows);
    std::filesystem::remove(path);
}

TEST_CASE("degenerate ringdown data exit with code 3") {
    const auto path = temp_path("flat.csv");
    {
        std::ofstream f(path);
        f << "tau_off_s,n_i,n_i_sigma,n_f\n1e-3,0.5,0.01,0.5\n2e-3,0.5,0.01,0.5\n4e-3,0.5,0.01,0.5\n8e-3,0.5,0.01,0.5\n";
    }
    const auto r = run({"ringdown", "--input", path});
    CHECK(r.code == cli::kExitNumeric);
    CHECK_FALSE(r.err.empty());
    std::filesystem::remove(path);
}

TEST_CASE("bath-fit recovers generated parameters") {
    const auto path = temp_path("sweep.csv");
    SUBCASE("occupancy power law") {
        {
            std::ofstream f(path);
            f << "n_c,value\n";
            for (double x : cooling::log_space(1, 1e4, 30)) f << io::format_double(x) << ',' << io::format_double(0.08 * std::pow(x, 0.3)) << '\n';
        }
        const auto r = run({"bath-fit", "--input", path, "--kind", "occupancy"});
        REQUIRE(r.code == 0);
        const auto t = table_of(r.out);
        CHECK(t.number(0, "value") == Approx(0.08).epsilon(1e-8));
        CHECK(t.number(1, "value") == Approx(0.3).epsilon(1e-8));
    }
    SUBCASE("backaction slope") {
        const auto dev = presets::eight_shield_device();
        const double g0 = kTwoPi * 1.1e6;
        {
            std::ofstream f(path);
            f << "n_c,value\n";
            for (double n : cooling::log_space(10, 1e4, 20)) {
                const double gamma = dev.mode.gamma_0 + 4.0 * g0 * g0 * n / dev.cavity.kappa;
                f << io::format_double(n) << ',' << io::format_double(gamma / kTwoPi) << '\n';
            }
        }
        const auto r = run({"bath-fit", "--input", path, "--kind", "backaction"});
        REQUIRE(r.code == 0);
        const auto t = table_of(r.out);
        REQUIRE(t.rows[0][t.column("parameter")] == "g0_hz");
        CHECK(t.number(0, "value") == Approx(1.1e6).epsilon(1e-9));
    }
    SUBCASE("bad kind") {
        { std::ofstream f(path); f << "n_c,value\n1,1\n"; }
        const auto r = run({"bath-fit", "--input", path, "--kind", "magic"});
        CHECK(r.code == cli::kExitValidation);
        CHECK(r.err.find("fit.kind") != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("photons and spectrum emit their columns") {
    auto r = run({"photons", "--p-count", "3"});
    REQUIRE(r.code == 0);
    auto t = table_of(r.out);
    CHECK(t.header == std::vector<std::string>{"p_in_w", "detuning_hz", "n_c"});
    CHECK(t.number(2, "n_c") > t.number(0, "n_c"));
    r = run({"spectrum", "--points", "11"});
    REQUIRE(r.code == 0);
    t = table_of(r.out);
    CHECK(t.rows.size() == 11);
}
