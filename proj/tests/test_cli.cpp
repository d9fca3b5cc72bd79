#include "cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using kgaim::cli::run_cli;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> const& args)
{
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(fs::path const& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(std::string const& text)
{
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        if (!line.empty() && line.back() == ',')
            cells.push_back("");
        rows.push_back(cells);
    }
    return rows;
}

fs::path scratch_dir()
{
    auto dir = fs::temp_directory_path() / "kgaim_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> const coulomb_ref{"--case", "coulomb", "-M", "1", "-d", "3", "-l", "0",
                                           "--s", "0.5", "--v", "0.5"};

std::vector<std::string> with(std::string cmd, std::vector<std::string> base,
                              std::vector<std::string> const& extra)
{
    base.insert(base.begin(), cmd);
    base.insert(base.end(), extra.begin(), extra.end());
    return base;
}

} // namespace

TEST_CASE("spectrum csv matches the golden file")
{
    auto r = run(with("spectrum", coulomb_ref, {"--n", "0..3", "--format", "csv"}));
    CHECK(r.code == 0);
    CHECK(r.out == slurp(fs::path(KGAIM_GOLDEN_DIR) / "coulomb_s05_v05.csv"));
    auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == std::vector<std::string>{"n", "energy", "exponent", "norm", "family"});
    CHECK(rows[1][1] == "0.6");
}

TEST_CASE("equal kratzer with A = 0 reproduces the coulomb s = v run")
{
    auto c = run(with("spectrum", coulomb_ref, {"--n", "0..3"}));
    auto k = run({"spectrum", "--case", "equal-kratzer", "--A", "0", "--B", "0.5", "--n", "0..3"});
    REQUIRE(k.code == 0);
    auto cr = csv_rows(c.out), kr = csv_rows(k.out);
    REQUIRE(cr.size() == kr.size());
    for (std::size_t i = 1; i < cr.size(); ++i)
        CHECK(cr[i][1] == kr[i][1]);
}

TEST_CASE("usage errors exit 1")
{
    auto r = run({"spectrum", "--case", "equal-kratzer", "--A", "0"});
    CHECK(r.code == 1);
    CHECK(r.err.find("--B") != std::string::npos);
    CHECK(r.err.find("Usage") != std::string::npos);

    CHECK(run({"spectrum", "--case", "nope", "--s", "1", "--v", "0"}).code == 1);
    CHECK(run(with("spectrum", coulomb_ref, {"--n", "3..1"})).code == 1);
    CHECK(run(with("spectrum", coulomb_ref, {"--format", "xml"})).code == 1);
    CHECK(run(with("spectrum", coulomb_ref, {"--bogus", "1"})).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"spectrum", "--case", "unequal-kratzer-g1", "--s1", "1", "--v1", "0", "--s2", "1",
               "--v2", "0", "--n", "2"})
              .code == 1);
}

TEST_CASE("overcritical input is an error, not a number")
{
    auto r = run({"spectrum", "--case", "coulomb", "-d", "2", "--s", "0", "--v", "0.5"});
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(r.err.find("overcritical") != std::string::npos);
}

TEST_CASE("missing states give null rows and exit 2")
{
    auto r = run({"spectrum", "--case", "unequal-kratzer-ground", "--s1", "1", "--v1", "0.5", "--s2",
                  "0.5", "--v2", "0.3", "--format", "json"});
    CHECK(r.code == 2);
    auto j = json::parse(r.out);
    REQUIRE(j.size() == 1);
    CHECK(j[0]["energy"].is_null());
    CHECK(!r.err.empty());
}

TEST_CASE("wavefunction ground state profile")
{
    auto r = run(with("wavefunction", coulomb_ref, {"--r-min", "0.01", "--r-max", "30", "--points", "100"}));
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# case=coulomb n=0 energy=0.6", 0) == 0);
    auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 101);
    std::vector<double> u;
    for (std::size_t i = 1; i < rows.size(); ++i)
        u.push_back(std::stod(rows[i][1]));
    std::size_t peak = std::max_element(u.begin(), u.end()) - u.begin();
    CHECK(peak > 0);
    CHECK(peak + 1 < u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(u[i] > 0.0);
        if (i > 0 && i <= peak)
            CHECK(u[i] > u[i - 1]);
        if (i > peak)
            CHECK(u[i] < u[i - 1]);
    }
}

TEST_CASE("emitted samples integrate to one")
{
    auto r = run(with("wavefunction", coulomb_ref,
                      {"--n", "2", "--r-min", "1e-4", "--r-max", "80", "--points", "4000", "--format", "json"}));
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["schema"] == 1);
    auto const& s = j["samples"];
    double sum = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        double r0 = s[i - 1]["r"], r1 = s[i]["r"], u0 = s[i - 1]["u"], u1 = s[i]["u"];
        sum += 0.5 * (r1 - r0) * (u0 * u0 + u1 * u1);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("wavefunction grid errors")
{
    CHECK(run(with("wavefunction", coulomb_ref, {"--r-min", "0", "--r-max", "10"})).code == 1);
    CHECK(run(with("wavefunction", coulomb_ref, {"--r-min", "-1", "--r-max", "10"})).code == 1);
    CHECK(run(with("wavefunction", coulomb_ref, {"--r-max", "10"})).code == 1);
    CHECK(run(with("wavefunction", coulomb_ref, {"--r-min", "1", "--r-max", "10", "--n", "0..1"})).code == 1);
}

TEST_CASE("verify passes on the reference case")
{
    auto r = run(with("verify", coulomb_ref, {"--n", "0..2"}));
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["schema"] == 1);
    CHECK(j["pass"] == true);
    REQUIRE(j["states"].size() == 3);
    for (auto const& st : j["states"]) {
        CHECK(st["checks"]["oracle"]["value"].get<double>() <= 1e-6);
        for (auto const& name : {"oracle", "residual", "norm", "delta", "degeneracy"})
            CHECK(st["checks"][name]["pass"] == true);
    }
}

TEST_CASE("verify catches a perturbed energy")
{
    auto r = run(with("verify", coulomb_ref, {"--inject-energy-error", "1e-3"}));
    CHECK(r.code == 3);
    CHECK(r.err.find("residual") != std::string::npos);
    auto j = json::parse(r.out);
    CHECK(j["pass"] == false);
    CHECK(j["states"][0]["checks"]["residual"]["pass"] == false);
}

TEST_CASE("verify check selection")
{
    CHECK(run(with("verify", coulomb_ref, {"--checks", ""})).code == 1);
    CHECK(run(with("verify", coulomb_ref, {"--checks", "oracle,bogus"})).code == 1);
    auto r = run(with("verify", coulomb_ref, {"--checks", "norm"}));
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["states"][0]["checks"].size() == 1);
}

TEST_CASE("verify on an exact unequal state")
{
    auto r = run({"verify", "--case", "monic", "--s1", "1", "--v1", "1.8984355718875523", "--s2", "0.5",
                  "--v2", "0.3", "--n", "2"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["pass"] == true);
}

TEST_CASE("config round trip is byte identical")
{
    auto dir = scratch_dir();
    auto cfg = (dir / "eq.cfg").string();
    std::vector<std::string> args{"spectrum", "--case", "equal-kratzer", "--A", "0.1", "--B", "0.3",
                                  "--n", "0..2", "--format", "json", "--save-config", cfg};
    auto first = run(args);
    REQUIRE(first.code == 0);
    auto second = run({"spectrum", "--config", cfg});
    CHECK(second.code == 0);
    CHECK(second.out == first.out);

    // flags beat the file
    auto over = run({"spectrum", "--config", cfg, "--B", "0.5"});
    auto direct = run({"spectrum", "--case", "equal-kratzer", "--A", "0.1", "--B", "0.5", "--n", "0..2",
                       "--format", "json"});
    CHECK(over.out == direct.out);
    CHECK(over.out != first.out);

    auto w = (dir / "wf.cfg").string();
    auto wf = run(with("wavefunction", coulomb_ref, {"--r-min", "0.1", "--r-max", "5", "--points", "7",
                                                     "--save-config", w}));
    CHECK(run({"wavefunction", "--config", w}).out == wf.out);

    std::ofstream(dir / "bad.cfg") << "case coulomb\n";
    CHECK(run({"spectrum", "--config", (dir / "bad.cfg").string()}).code == 1);
    CHECK(run({"spectrum", "--config", (dir / "missing.cfg").string()}).code == 1);
}

TEST_CASE("sweep output is ordered and matches the golden file")
{
    auto r = run({"sweep", "--case", "equal-kratzer", "--A", "0.1", "--B", "0.3", "--param", "B",
                  "--values", "0.05,0.1,0.2", "--n", "0..1"});
    CHECK(r.code == 0);
    CHECK(r.out == slurp(fs::path(KGAIM_GOLDEN_DIR) / "sweep_equal_kratzer_B.csv"));

    std::vector<std::string> values;
    std::string list;
    for (int i = 0; i < 24; ++i) {
        values.push_back(std::to_string(0.02 * (i + 1)));
        list += (i ? "," : "") + values.back();
    }
    auto big = run({"sweep", "--case", "coulomb", "--s", "0.1", "--v", "0.1", "--param", "v",
                    "--values", list, "--format", "json"});
    REQUIRE(big.code == 0);
    auto j = json::parse(big.out);
    REQUIRE(j.size() == values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto one = run({"spectrum", "--case", "coulomb", "--s", "0.1", "--v", values[i], "--format", "json"});
        CHECK(json::parse(one.out)[0]["energy"] == j[i]["energy"]);
    }
}

TEST_CASE("sweep marks failing parameter values")
{
    auto r = run({"sweep", "--case", "coulomb", "-d", "2", "--s", "0.2", "--v", "0", "--param", "v",
                  "--values", "0.1,0.5"});
    CHECK(r.code == 2);
    auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(!rows[1][2].empty());
    CHECK(rows[2][2].empty());
    CHECK(run({"sweep", "--case", "coulomb", "--s", "0.2", "--v", "0", "--param", "q", "--values", "1"}).code == 1);
    CHECK(run({"sweep", "--case", "coulomb", "--s", "0.2", "--v", "0", "--param", "v"}).code == 1);
}

TEST_CASE("output directory comes from the environment")
{
    auto dir = scratch_dir() / "out";
    fs::create_directories(dir);
    ::setenv("KGAIM_OUTPUT_DIR", dir.c_str(), 1);
    auto r = run(with("spectrum", coulomb_ref, {"--n", "0..3", "--output", "spec.csv"}));
    ::unsetenv("KGAIM_OUTPUT_DIR");
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(dir / "spec.csv") == slurp(fs::path(KGAIM_GOLDEN_DIR) / "coulomb_s05_v05.csv"));
}

TEST_CASE("help exits 0")
{
    auto r = run({"spectrum", "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("--case") != std::string::npos);
}
