#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "omc/core/presets.hpp"
#include "omc/errors.hpp"
#include "omc/io/config.hpp"
#include "omc/io/csv.hpp"
#include "omc/numerics/rng.hpp"

using namespace omc;
using namespace omc::io;
using doctest::Approx;

TEST_CASE("doubles print in shortest round-trip form") {
    auto rng = make_rng(1);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-300, 300);
    for (int i = 0; i < 10000; ++i) {
        const double v = mant(rng) * std::pow(10.0, expo(rng));
        CHECK(parse_double(format_double(v), "v") == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(parse_double(format_double(1e7), "v") == 1e7);
    CHECK(format_double(2.5e-9) == "2.5e-09");
    CHECK_THROWS_AS(parse_double("1.2.3", "x"), ValidationError);
    CHECK_THROWS_AS(parse_double("", "x"), ValidationError);
}

TEST_CASE("unsigned integers accept exponent notation") {
    CHECK(parse_uint("12", "n") == 12);
    CHECK(parse_uint("1e7", "n") == 10'000'000);
    CHECK_THROWS_AS(parse_uint("-3", "n"), ValidationError);
    CHECK_THROWS_AS(parse_uint("2.5", "n"), ValidationError);
}

TEST_CASE("tables: comments, header, rows") {
    std::istringstream in("# run manifest\n# note\nn_c,value\n1,2\n3,4.5\n");
    const auto t = read_table(in);
    CHECK(t.comments.size() == 2);
    CHECK(t.header == std::vector<std::string>{"n_c", "value"});
    CHECK(t.number(1, "value") == 4.5);
    CHECK(t.has_column("n_c"));
    CHECK_FALSE(t.has_column("sigma"));
    CHECK_THROWS_AS(t.column("sigma"), ValidationError);
    std::istringstream ragged("a,b\n1\n");
    CHECK_THROWS_AS(read_table(ragged), ValidationError);
    std::istringstream empty("# only comments\n");
    CHECK_THROWS_AS(read_table(empty), ValidationError);
}

TEST_CASE("histogram CSV roundtrip") {
    counting::BinnedCounts h{{0, 5, 17, 123456789012ULL}, 25.6e-9, 10'000'000'000ULL};
    std::stringstream s;
    write_histogram(s, h);
    CHECK(s.str().rfind("bin_start_s,counts,pulses\n", 0) == 0);
    const auto back = read_histogram(read_table(s));
    CHECK(back.counts == h.counts);
    CHECK(back.n_pulses == h.n_pulses);
    CHECK(back.bin_width == Approx(h.bin_width).epsilon(1e-12));
}

TEST_CASE("ringdown CSV roundtrip") {
    std::vector<counting::RingdownPoint> pts{{1e-3, 0.31, 0.01, 0.5}, {2.5e-3, 0.2999999999999999, 0.02, 0.51}};
    std::stringstream s;
    write_ringdown(s, pts);
    const auto back = read_ringdown(read_table(s));
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back[i].tau_off == pts[i].tau_off);
        CHECK(back[i].n_i == pts[i].n_i);
        CHECK(back[i].n_i_sigma == pts[i].n_i_sigma);
        CHECK(back[i].n_f == pts[i].n_f);
    }
}

TEST_CASE("trace CSV roundtrip rebuilds best-so-far") {
    design::SearchTrace trace;
    const double fits[] = {-3.0, 0.0, -5.0, -4.0};
    const design::EvalStatus st[] = {design::EvalStatus::ok, design::EvalStatus::filtered_lowQ,
                                     design::EvalStatus::ok, design::EvalStatus::ok};
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t i = 0; i < 4; ++i) {
            design::TraceEntry e;
            e.restart = r;
            e.eval_index = i;
            e.evaluation.design = {500.0 + i, 200, 250, 350, 500, 200, 250, 350, 500.25};
            e.evaluation.fitness = fits[i];
            e.evaluation.g0 = -fits[i];
            e.evaluation.status = st[i];
            e.evaluation.q_scat = 1e7;
            e.evaluation.omega_o = kTwoPi * 193.4e12;
            e.evaluation.omega_m = kTwoPi * 10e9;
            trace.entries.push_back(e);
        }
    std::stringstream s;
    write_trace(s, trace);
    const auto t = read_table(s);
    CHECK(t.header.size() == 17);
    const auto back = read_trace(t);
    REQUIRE(back.size() == 8);
    CHECK(back[3].best_so_far == Approx(-5.0));
    CHECK(back[4].best_so_far == Approx(-3.0));
    CHECK(back[5].evaluation.status == design::EvalStatus::filtered_lowQ);
    CHECK(back[7].evaluation.design.w_oc == 500.25);
}

TEST_CASE("sweep CSV with and without sigma") {
    std::istringstream a("n_c,value\n1,2\n10,3\n100,4\n");
    const auto pa = read_sweep(read_table(a));
    REQUIRE(pa.size() == 3);
    CHECK(pa[2].x == 100.0);
    CHECK(pa[2].sigma == 0.0);
    std::istringstream b("n_c,value,sigma\n1,2,0.1\n");
    CHECK(read_sweep(read_table(b))[0].sigma == 0.1);
}

TEST_CASE("curve and map writers emit the documented columns") {
    const auto dev = presets::eight_shield_device();
    cooling::SweepSpec s;
    s.n_c = {1.0, 10.0};
    s.q_c = {1e5, 1e6};
    std::stringstream c;
    write_curve(c, cooling::cooling_curve(dev, presets::measured_hot_bath(), s));
    const auto curve = read_table(c);
    CHECK(curve.header == std::vector<std::string>{"n_c", "p_in_w", "n_wg", "n_p", "gamma_p_hz", "gamma_om_hz",
                                                   "n_avg", "c", "c_eff"});
    CHECK(curve.rows.size() == 2);
    std::stringstream m;
    write_map(m, cooling::ceff_map(dev, presets::measured_hot_bath(), s));
    const auto map = read_table(m);
    CHECK(map.header == std::vector<std::string>{"q_c", "n_c", "n_avg", "c_eff"});
    CHECK(map.rows.size() == 4);
}

TEST_CASE("FNV-1a test vectors") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("INI parsing") {
    std::istringstream in("# comment\n; also a comment\n[device]\npreset = eight_shield\n\n[bath]\nbeta_per_w = 15e6\n");
    const auto ini = parse_ini(in);
    CHECK(ini.values.at("device.preset") == "eight_shield");
    CHECK(ini.values.at("bath.beta_per_w") == "15e6");
    CHECK(ini.canonical() == "bath.beta_per_w=15e6\ndevice.preset=eight_shield\n");
    std::istringstream dup("[a]\nx = 1\nx = 2\n");
    CHECK_THROWS_AS(parse_ini(dup), ValidationError);
    std::istringstream top("x = 1\n[a]\ny = 2\n");
    CHECK_THROWS_AS(parse_ini(top), ValidationError);
    CHECK_THROWS_AS(parse_ini_file("/nonexistent/omc.cfg"), ValidationError);
}

TEST_CASE("list and boolean values") {
    CHECK(parse_double_list("1, 2.5,10", "levels") == std::vector<double>{1.0, 2.5, 10.0});
    CHECK_THROWS_AS(parse_double_list("1,x", "levels"), ValidationError);
    CHECK(parse_bool("true", "b"));
    CHECK_FALSE(parse_bool("0", "b"));
    CHECK_THROWS_AS(parse_bool("maybe", "b"), ValidationError);
}
