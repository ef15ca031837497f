#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mslv/eos.hpp"
#include "mslv/gas.hpp"
#include "mslv/io.hpp"
#include "test_support.hpp"

using namespace mslv;

namespace {

namespace fs = std::filesystem;

// deterministic scratch paths so reruns overwrite instead of accumulating
fs::path scratch(const std::string& leaf) {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "mslv_io_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir / leaf;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CliResult {
    int rc = -1;
    std::string out;
    std::string err;
};

// in-process CLI invocation with both standard streams captured
CliResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "mslv");
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());

    std::ostringstream out, err;
    auto* prev_out = std::cout.rdbuf(out.rdbuf());
    auto* prev_err = std::cerr.rdbuf(err.rdbuf());
    CliResult r;
    r.rc = cli_main(int(argv.size()), argv.data());
    std::cout.rdbuf(prev_out);
    std::cerr.rdbuf(prev_err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

// the builtin written out as a gas file; tests tweak single keys from here
nlohmann::ordered_json methane_json() {
    return {{"name", "methane-file"}, {"a_r", 0.4902264},
            {"b_r", 0.2989634},      {"c_r", 0.3604034},
            {"d_r", 0.3603434},      {"omega", 0.011},
            {"m", 0.391},            {"n", 6},
            {"Z", 0.286},            {"p_c_MPa", 4.5992},
            {"v_c_cm3mol", 98.63},   {"T_c_K", 190.56}};
}

std::uint64_t bits(double x) { return std::bit_cast<std::uint64_t>(x); }

CurveSeries demo_series() {
    CurveSeries s;
    s.name = "demo";
    s.columns = {{"x", ""}, {"y", "K"}};
    s.metadata["beta"] = "two words";
    s.metadata["alpha"] = "1";
    s.add_row({0.1, 1.0});
    s.add_row({2.0, 3.0});
    s.break_segment();
    s.add_row({1.0 / 3.0, -0.0});
    return s;
}

}  // namespace

TEST_CASE("load_gas resolves the builtin by name") {
    const GasParameters g = load_gas("methane");
    CHECK(g.name == "methane");
    CHECK(g.T_c == 190.56);
    CHECK(g.p_c == 4.5992);
    CHECK(g.v_c == 98.63);
    CHECK(g.omega == 0.011);
    CHECK(g.m == 0.391);
    CHECK(g.n == 6.0);
    CHECK(g.Z == 0.286);
    CHECK(g.warnings.empty());
}

TEST_CASE("load_gas reads a complete gas file that matches the builtin") {
    const fs::path p = scratch("methane_full.json");
    write_file(p, methane_json().dump(2));
    const GasParameters g = load_gas(p.string());
    const GasParameters ref = builtin_methane();
    CHECK(g.name == "methane-file");
    CHECK(g.a == ref.a);
    CHECK(g.b == ref.b);
    CHECK(g.c == ref.c);
    CHECK(g.d == ref.d);
    CHECK(g.m == ref.m);
    CHECK(g.n == ref.n);
    CHECK(g.Z == ref.Z);
    CHECK(g.T_c == ref.T_c);
    CHECK(g.p_c == ref.p_c);
    CHECK(g.v_c == ref.v_c);
    CHECK(g.omega == ref.omega);
    // the tabulated Z differs from p_c v_c/(R T_c) in the fourth digit; the
    // builtin suppresses the note, a file load reports it
    REQUIRE(!g.warnings.empty());
    CHECK(g.warnings.front().find("Z") != std::string::npos);
}

TEST_CASE("load_gas derives m from omega when the key is absent") {
    nlohmann::ordered_json j = methane_json();
    j.erase("m");
    const fs::path p = scratch("methane_no_m.json");
    write_file(p, j.dump());
    const GasParameters g = load_gas(p.string());
    CHECK(g.m == m_from_omega(0.011));
}

TEST_CASE("load_gas rejects unreadable, malformed and inconsistent files") {
    CHECK_THROWS_AS(load_gas("/nonexistent/gas.json"), IoError);
    // unknown builtin names are treated as paths
    CHECK_THROWS_AS(load_gas("argon"), IoError);

    auto path_for = [](const char* leaf, const std::string& text) {
        const fs::path p = scratch(leaf);
        write_file(p, text);
        return p.string();
    };

    CHECK_THROWS_AS(load_gas(path_for("trunc.json", "{")), ParseError);
    CHECK_THROWS_WITH_AS(load_gas(path_for("array.json", "[1, 2]")),
                         doctest::Contains("top level must be an object"),
                         ParseError);

    nlohmann::ordered_json j = methane_json();
    j["foo"] = 1.0;
    CHECK_THROWS_WITH_AS(load_gas(path_for("unknown_key.json", j.dump())),
                         doctest::Contains("unknown key 'foo'"), ParseError);

    j = methane_json();
    j.erase("Z");
    CHECK_THROWS_WITH_AS(load_gas(path_for("no_z.json", j.dump())),
                         doctest::Contains("missing key 'Z'"), ParseError);

    j = methane_json();
    j["a_r"] = "big";
    CHECK_THROWS_WITH_AS(load_gas(path_for("str_a.json", j.dump())),
                         doctest::Contains("must be a number"), ParseError);

    j = methane_json();
    j["name"] = 7;
    CHECK_THROWS_WITH_AS(load_gas(path_for("num_name.json", j.dump())),
                         doctest::Contains("must be a string"), ParseError);

    j = methane_json();
    std::swap(j["c_r"], j["d_r"]);
    CHECK_THROWS_WITH_AS(load_gas(path_for("swapped_cd.json", j.dump())),
                         doctest::Contains("require 0 < b < d < c"),
                         ValidationError);

    j = methane_json();
    j["Z"] = 0.5;
    CHECK_THROWS_WITH_AS(load_gas(path_for("bad_z.json", j.dump())),
                         doctest::Contains("inconsistent with"),
                         ValidationError);
}

TEST_CASE("csv writer emits the exact expected layout") {
    std::ostringstream out;
    write_csv(demo_series(), out);
    CHECK(out.str() ==
          "# alpha = 1\n"
          "# beta = two words\n"
          "x,y[K]\n"
          "0.10000000000000001,1\n"
          "2,3\n"
          "\n"
          "0.33333333333333331,-0\n");
}

TEST_CASE("csv round trip preserves doubles bit for bit") {
    CurveSeries s;
    s.name = "nasty";
    s.columns = {{"a", ""}, {"b", "MPa"}};
    s.metadata["note"] = "spaced   value";
    const double vals[][2] = {
        {1e300, 5e-324},
        {std::numbers::pi, 288.6948733659049},
        {-1.2345678901234567e-7, 0.0},
        {-0.0, std::numeric_limits<double>::max()},
    };
    for (const auto& r : vals) s.add_row({r[0], r[1]});
    s.break_segment();
    s.add_row({std::numeric_limits<double>::min(), -3.1e-15});

    std::ostringstream out;
    write_csv(s, out);
    std::istringstream in(out.str());
    const CurveSeries back = read_csv(in);

    REQUIRE(back.rows.size() == s.rows.size());
    REQUIRE(back.columns.size() == 2);
    CHECK(back.columns[0].name == "a");
    CHECK(back.columns[1].name == "b");
    CHECK(back.columns[1].unit == "MPa");
    CHECK(back.metadata.at("note") == "spaced   value");
    REQUIRE(back.segment_starts == s.segment_starts);
    for (std::size_t r = 0; r < s.rows.size(); ++r)
        for (std::size_t c = 0; c < 2; ++c) {
            INFO("row ", r, " col ", c);
            CHECK(bits(back.rows[r][c]) == bits(s.rows[r][c]));
        }
    CHECK(std::signbit(back.rows[3][0]));
}

TEST_CASE("csv rewrite of a parsed stream is byte-identical") {
    std::ostringstream first;
    write_csv(demo_series(), first);
    std::istringstream in(first.str());
    const CurveSeries back = read_csv(in);
    std::ostringstream second;
    write_csv(back, second);
    CHECK(first.str() == second.str());
}

TEST_CASE("csv reader handles crlf and rejects malformed rows") {
    {
        std::istringstream in("# k = v\r\nx,y\r\n1,2\r\n\r\n3,4\r\n");
        const CurveSeries s = read_csv(in);
        REQUIRE(s.rows.size() == 2);
        CHECK(s.rows[1][1] == 4.0);
        CHECK(s.metadata.at("k") == "v");
        REQUIRE(s.segment_starts.size() == 1);
        CHECK(s.segment_starts[0] == 1);
    }
    {
        std::istringstream in("x,y\n1,2,3\n");
        CHECK_THROWS_WITH_AS(read_csv(in), doctest::Contains("cells"),
                             ParseError);
    }
    {
        std::istringstream in("x,y\n1,fish\n");
        CHECK_THROWS_WITH_AS(read_csv(in), doctest::Contains("not a number"),
                             ParseError);
    }
}

TEST_CASE("json writer mirrors the series payload") {
    std::ostringstream out;
    write_json(demo_series(), out);
    const nlohmann::json j = nlohmann::json::parse(out.str());
    CHECK(j["name"] == "demo");
    CHECK(j["metadata"]["beta"] == "two words");
    REQUIRE(j["columns"].size() == 2);
    CHECK(j["columns"][1]["name"] == "y");
    CHECK(j["columns"][1]["unit"] == "K");
    REQUIRE(j["segment_starts"].size() == 1);
    CHECK(j["segment_starts"][0] == 2);
    REQUIRE(j["rows"].size() == 3);
    CHECK(j["rows"][0][0].get<double>() == 0.1);
    CHECK(j["rows"][2][0].get<double>() == 1.0 / 3.0);
}

TEST_CASE("cli maps error classes onto distinct exit codes") {
    const std::string out = scratch("exit_codes.csv").string();

    const CliResult help = run_cli({"--help"});
    CHECK(help.rc == 0);
    CHECK(help.out.find("isotherm") != std::string::npos);

    CHECK(run_cli({"isotherm"}).rc == 2);  // required options missing
    CHECK(run_cli({"frobnicate", "--out", out}).rc == 2);
    CHECK(run_cli({"isotherm", "--t", "0.5", "--format", "xml", "--out", out}).rc == 2);
    CHECK(run_cli({"critical", "--reduced", "--dimensional", "--out", out}).rc == 2);
    CHECK(run_cli({"binodal", "--pair", "xx", "--out", out}).rc == 2);
    CHECK(run_cli({"singularity", "--plane", "zz", "--out", out}).rc == 2);
    // critical has no v1/v2 columns to lead with
    CHECK(run_cli({"critical", "--plane", "v1v2", "--out", out}).rc == 2);

    const CliResult above =
        run_cli({"binodal", "--t-min", "1.05", "--t-max", "1.10", "--out", out});
    CHECK(above.rc == 3);
    CHECK(above.err.find("no two-phase window") != std::string::npos);

    CHECK(run_cli({"critical", "--gas", "/nonexistent/gas.json", "--out", out}).rc == 4);
    CHECK(run_cli({"critical", "--out", "/nonexistent_dir/x.csv"}).rc == 4);
}

TEST_CASE("cli writes to stdout when out is '-'") {
    const fs::path f = scratch("crit_stdout.csv");
    REQUIRE(run_cli({"critical", "--out", f.string()}).rc == 0);
    const CliResult r = run_cli({"critical", "--out", "-"});
    REQUIRE(r.rc == 0);
    CHECK(r.out == slurp(f));
}

TEST_CASE("cli reruns reproduce files byte for byte") {
    const fs::path f1 = scratch("iso_a.csv");
    const fs::path f2 = scratch("iso_b.csv");
    REQUIRE(run_cli({"isotherm", "--t", "0.5", "--out", f1.string()}).rc == 0);
    REQUIRE(run_cli({"isotherm", "--t", "0.5", "--out", f2.string()}).rc == 0);
    CHECK(slurp(f1) == slurp(f2));

    const fs::path j1 = scratch("trip_a.json");
    const fs::path j2 = scratch("trip_b.json");
    REQUIRE(run_cli({"triple", "--format", "json", "--out", j1.string()}).rc == 0);
    REQUIRE(run_cli({"triple", "--format", "json", "--out", j2.string()}).rc == 0);
    CHECK(slurp(j1) == slurp(j2));
}

TEST_CASE("cli isotherm skips the forbidden gap and appends log columns") {
    const fs::path f = scratch("iso.csv");
    REQUIRE(run_cli({"isotherm", "--t", "0.5", "--out", f.string()}).rc == 0);
    const CurveSeries s = read_csv_file(f.string());
    const EosParams P = working_set_reduced(builtin_methane());

    CHECK(s.metadata.at("gas") == "methane");
    CHECK(s.metadata.at("system") == "reduced");
    CHECK(s.metadata.at("T_r") == "0.5");
    REQUIRE(s.columns.size() == 5);
    CHECK(s.columns[0].name == "v");
    CHECK(s.columns[1].name == "p");
    CHECK(s.columns[2].name == "phi_vv");
    CHECK(s.columns[3].name == "applicable");
    // v gets a log companion; p dips negative on this isotherm so it must not
    CHECK(s.columns[4].name == "log10_v");

    REQUIRE(s.rows.size() == 400);
    REQUIRE(s.segment_starts.size() == 1);
    CHECK(s.segment_starts[0] == 133);  // n/3 of the default 400, none skipped

    bool saw_negative_p = false;
    for (const auto& r : s.rows) {
        CHECK((r[0] < P.d || r[0] > P.c));  // never inside the gap
        CHECK((r[3] == 0.0 || r[3] == 1.0));
        CHECK(bits(r[4]) == bits(std::log10(r[0])));
        if (r[1] < 0.0) saw_negative_p = true;
    }
    CHECK(saw_negative_p);

    // the p column is the equation of state evaluated at (v, T)
    for (std::size_t k : {std::size_t{0}, std::size_t{60}, std::size_t{133},
                          std::size_t{250}, std::size_t{399}})
        CHECK(rel_diff(s.rows[k][1], pressure(s.rows[k][0], 0.5, P)) < 1e-12);
}

TEST_CASE("cli singularity honors the plane reorder") {
    const fs::path f = scratch("sing.csv");
    REQUIRE(run_cli({"singularity", "--v-min", "0.4", "--v-max", "10", "--n",
                     "80", "--plane", "Tp", "--out", f.string()})
                .rc == 0);
    const CurveSeries s = read_csv_file(f.string());
    REQUIRE(s.columns.size() == 5);
    CHECK(s.columns[0].name == "T");
    CHECK(s.columns[1].name == "p");
    CHECK(s.columns[2].name == "v");
    CHECK(s.columns[3].name == "branch");
    CHECK(s.columns[4].name == "log10_v");  // spinodal p goes negative
    CHECK(s.metadata.at("branches") == "0=solid,1=fluid");

    // the requested window sits right of the solid branch: fluid rows only
    REQUIRE(!s.rows.empty());
    CHECK(s.segment_starts.empty());
    for (const auto& r : s.rows) {
        CHECK(r[3] == 1.0);
        CHECK(r[2] >= 0.4);
        CHECK(r[2] <= 10.0);
        CHECK(r[0] > 0.0);
    }
}

TEST_CASE("cli triple point scales into dimensional units") {
    const fs::path f = scratch("triple_dim.csv");
    REQUIRE(run_cli({"triple", "--dimensional", "--out", f.string()}).rc == 0);
    const CurveSeries s = read_csv_file(f.string());
    CHECK(s.metadata.at("system") == "dimensional");
    REQUIRE(s.columns.size() == 6);
    CHECK(s.columns[0].name == "T");
    CHECK(s.columns[0].unit == "K");
    CHECK(s.columns[1].unit == "MPa");
    CHECK(s.columns[2].unit == "cm3/mol");
    CHECK(s.columns[5].name == "log10_p");
    REQUIRE(s.rows.size() == 1);
    const auto& r = s.rows[0];
    CHECK(rel_diff(r[0], 0.5090783421353354 * 190.56) < 1e-8);
    CHECK(rel_diff(r[1], 0.006083312853171208 * 4.5992) < 1e-8);
    CHECK(rel_diff(r[2], 0.3581190331936792 * 98.63) < 1e-8);
    CHECK(rel_diff(r[3], 0.3627661257169907 * 98.63) < 1e-8);
    CHECK(rel_diff(r[4], 288.6948733659049 * 98.63) < 1e-8);
}

TEST_CASE("cli critical point in json matches the frozen coordinates") {
    const fs::path f = scratch("crit.json");
    REQUIRE(run_cli({"critical", "--format", "json", "--out", f.string()}).rc == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(f));
    CHECK(j["name"] == "critical_point");
    CHECK(j["metadata"]["system"] == "reduced");
    REQUIRE(j["rows"].size() == 1);
    const double v = j["rows"][0][0].get<double>();
    const double T = j["rows"][0][1].get<double>();
    const double p = j["rows"][0][2].get<double>();
    CHECK(rel_diff(v, 1.1815954140077245) < 1e-10);
    CHECK(rel_diff(T, 0.9821925860665406) < 1e-10);
    CHECK(rel_diff(p, 0.8934856295567837) < 1e-10);

    // the dimensional run is exactly the reduced one times the critical scales
    const fs::path fd = scratch("crit_dim.json");
    REQUIRE(run_cli({"critical", "--dimensional", "--format", "json", "--out",
                     fd.string()})
                .rc == 0);
    const nlohmann::json jd = nlohmann::json::parse(slurp(fd));
    CHECK(jd["rows"][0][0].get<double>() == v * 98.63);
    CHECK(jd["rows"][0][1].get<double>() == T * 190.56);
    CHECK(jd["rows"][0][2].get<double>() == p * 4.5992);
}

TEST_CASE("cli binodal reports terminus metadata and ordered columns") {
    const fs::path f = scratch("bin_lv.csv");
    REQUIRE(run_cli({"binodal", "--pair", "lv", "--t-min", "0.56", "--t-max",
                     "0.60", "--n", "5", "--out", f.string()})
                .rc == 0);
    const CurveSeries s = read_csv_file(f.string());
    CHECK(s.metadata.at("pair") == "liquid-vapor");
    CHECK(s.metadata.at("terminus") == "range-end");
    CHECK(s.metadata.count("terminus_at") == 0);
    REQUIRE(s.columns.size() == 7);
    CHECK(s.columns[0].name == "T");
    CHECK(s.columns[1].name == "p");
    CHECK(s.columns[2].name == "v1");
    CHECK(s.columns[3].name == "v2");
    CHECK(s.columns[4].name == "log10_p");
    CHECK(s.columns[5].name == "log10_v1");
    CHECK(s.columns[6].name == "log10_v2");
    REQUIRE(s.rows.size() >= 5);
    CHECK(s.rows.front()[0] == 0.56);
    CHECK(std::abs(s.rows.back()[0] - 0.60) < 1e-12);
    for (std::size_t i = 1; i < s.rows.size(); ++i) {
        CHECK(s.rows[i][0] > s.rows[i - 1][0]);
        CHECK(s.rows[i][1] > s.rows[i - 1][1]);  // vapor pressure rises with T
    }
    for (const auto& r : s.rows) CHECK(r[2] < r[3]);
}

TEST_CASE("cli binodal ending at the triple point records its coordinates") {
    const fs::path f = scratch("bin_sv.csv");
    REQUIRE(run_cli({"binodal", "--pair", "sv", "--out", f.string()}).rc == 0);
    const CurveSeries s = read_csv_file(f.string());
    CHECK(s.metadata.at("pair") == "solid-vapor");
    CHECK(s.metadata.at("terminus") == "triple-point");
    const std::string& at = s.metadata.at("terminus_at");
    CHECK(at.find("T=0.509078") != std::string::npos);
    CHECK(at.find("v_s=") != std::string::npos);
}

TEST_CASE("cli maxwell check emits one equilibrium row with residuals") {
    const fs::path f = scratch("mx_lv.csv");
    REQUIRE(run_cli({"maxwell-check", "--t", "0.9", "--out", f.string()}).rc == 0);
    const CurveSeries s = read_csv_file(f.string());
    CHECK(s.metadata.at("pair") == "liquid-vapor");
    REQUIRE(s.rows.size() == 1);
    auto col = [&](const char* nm) {
        for (std::size_t c = 0; c < s.columns.size(); ++c)
            if (s.columns[c].name == nm) return s.rows[0][c];
        REQUIRE(false);
        return 0.0;
    };
    CHECK(col("T") == 0.9);
    CHECK(rel_diff(col("p"), 0.5376329726411644) < 1e-9);
    CHECK(rel_diff(col("v1"), 0.6015472701461445) < 1e-9);
    CHECK(rel_diff(col("v2"), 3.6077912511440458) < 1e-9);
    CHECK(std::abs(col("res_dphi_v")) < 1e-10);
    CHECK(std::abs(col("res_dgamma")) < 1e-10);
    CHECK(col("maxwell") >= 0.0);
    CHECK(col("maxwell") < 1e-8);

    // solid-vapor report has no maxwell column
    const fs::path f2 = scratch("mx_sv.csv");
    REQUIRE(run_cli({"maxwell-check", "--t", "0.48", "--pair", "sv", "--out",
                     f2.string()})
                .rc == 0);
    const CurveSeries s2 = read_csv_file(f2.string());
    CHECK(s2.metadata.at("pair") == "solid-vapor");
    for (const auto& c : s2.columns) CHECK(c.name != "maxwell");
}

TEST_CASE("cli accepts a gas file and reports soft warnings on stderr") {
    const fs::path gp = scratch("methane_cli.json");
    write_file(gp, methane_json().dump());
    const fs::path f = scratch("crit_filegas.csv");
    const CliResult r =
        run_cli({"critical", "--gas", gp.string(), "--out", f.string()});
    REQUIRE(r.rc == 0);
    CHECK(r.err.find("warning:") != std::string::npos);
    const CurveSeries s = read_csv_file(f.string());
    CHECK(s.metadata.at("gas") == "methane-file");

    // same reduced critical point as the builtin
    const fs::path fb = scratch("crit_builtin.csv");
    REQUIRE(run_cli({"critical", "--out", fb.string()}).rc == 0);
    const CurveSeries sb = read_csv_file(fb.string());
    CHECK(rel_diff(s.rows[0][0], sb.rows[0][0]) < 1e-12);
    CHECK(rel_diff(s.rows[0][1], sb.rows[0][1]) < 1e-12);
}
