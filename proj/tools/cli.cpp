#include "cli.hpp"

#include "kgaim/aim.hpp"
#include "kgaim/errors.hpp"
#include "kgaim/model.hpp"
#include "kgaim/oracle.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

namespace kgaim::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

constexpr char const* kOutputDirEnv = "KGAIM_OUTPUT_DIR";

std::map<std::string, Case> const kCases{
    {"coulomb", Case::coulomb},
    {"equal-kratzer", Case::equal_kratzer},
    {"unequal-kratzer-ground", Case::unequal_ground},
    {"unequal-kratzer-g1", Case::unequal_g1},
    {"unequal-kratzer-g2", Case::unequal_g2},
    {"monic", Case::monic},
};

std::vector<std::string> const kAllChecks{"oracle", "residual", "norm", "delta", "degeneracy"};

std::string case_name(Case c)
{
    for (auto const& [name, value] : kCases)
        if (value == c)
            return name;
    return "?";
}

std::string num(double x)
{
    if (!std::isfinite(x))
        return "";
    return fmt::format("{:.12g}", x);
}

json jnum(double x)
{
    if (!std::isfinite(x))
        return nullptr;
    return std::stod(fmt::format("{:.12g}", x));
}

std::vector<std::string> split(std::string const& text, char sep)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = CLI::detail::trim_copy(item);
        if (!item.empty())
            parts.push_back(item);
    }
    return parts;
}

double to_double(std::string const& text, std::string const& what)
{
    try {
        std::size_t pos = 0;
        double x = std::stod(text, &pos);
        if (pos == text.size() && std::isfinite(x))
            return x;
    } catch (std::exception const&) {
    }
    throw UsageError(fmt::format("{}: not a number: '{}'", what, text));
}

int to_int(std::string const& text, std::string const& what)
{
    try {
        std::size_t pos = 0;
        int x = std::stoi(text, &pos);
        if (pos == text.size())
            return x;
    } catch (std::exception const&) {
    }
    throw UsageError(fmt::format("{}: not an integer: '{}'", what, text));
}

std::pair<int, int> parse_range(std::string const& text)
{
    auto dots = text.find("..");
    int lo, hi;
    if (dots == std::string::npos) {
        lo = hi = to_int(text, "--n");
    } else {
        lo = to_int(text.substr(0, dots), "--n");
        hi = to_int(text.substr(dots + 2), "--n");
    }
    if (lo < 0 || hi < lo)
        throw UsageError(fmt::format("--n: empty or negative range '{}'", text));
    return {lo, hi};
}

// ------------------------------------------------------------------ config

// key = value lines become --key value tokens placed ahead of the command
// line, so that flags given explicitly win.
std::vector<std::string> read_config(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read config file " + path);
    std::vector<std::string> tokens;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = CLI::detail::trim_copy(line.substr(0, line.find('#')));
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(fmt::format("{}:{}: expected key = value", path, lineno));
        std::string key = CLI::detail::trim_copy(line.substr(0, eq));
        std::string value = CLI::detail::trim_copy(line.substr(eq + 1));
        if (key.empty() || key == "config" || key == "save-config")
            throw UsageError(fmt::format("{}:{}: bad key '{}'", path, lineno, key));
        tokens.push_back("--" + key);
        tokens.push_back(value);
    }
    return tokens;
}

std::string exact(double x) { return fmt::format("{}", x); }

// ------------------------------------------------------------------ solving

std::optional<int> fixed_n(Case c)
{
    switch (c) {
    case Case::unequal_ground: return 0;
    case Case::unequal_g1: return 1;
    case Case::unequal_g2: return 2;
    default: return std::nullopt;
    }
}

PotentialParams params_of(RunConfig const& cfg)
{
    switch (cfg.kase) {
    case Case::coulomb: return PotentialParams::coulomb(*cfg.s, *cfg.v);
    case Case::equal_kratzer: return PotentialParams::equal_kratzer(*cfg.A, *cfg.B);
    default: return {*cfg.s1, *cfg.v1, *cfg.s2, *cfg.v2};
    }
}

BoundState solve_state(RunConfig const& cfg, ProblemSpec const& spec, int n)
{
    auto const p = params_of(cfg);
    switch (cfg.kase) {
    case Case::coulomb: {
        double E = coulomb_energy(spec, *cfg.s, *cfg.v, n, cfg.branch);
        return coulomb_wavefunction(spec, *cfg.s, *cfg.v, n, E);
    }
    case Case::equal_kratzer: {
        double E = equal_kratzer_energy(spec, *cfg.A, *cfg.B, n);
        return equal_kratzer_wavefunction(spec, *cfg.A, *cfg.B, n, E);
    }
    case Case::unequal_ground: return unequal_ground_solve(spec, p);
    case Case::unequal_g1: return g1_excited_solve(spec, p);
    case Case::unequal_g2: return g2_excited_solve(spec, p);
    case Case::monic: return unequal_family_solve(spec, p, n);
    }
    throw UsageError("unknown case");
}

/// Same state rebuilt at a shifted energy, for sensitivity runs.
BoundState shifted_state(RunConfig const& cfg, ProblemSpec const& spec, BoundState const& st,
                         double dE)
{
    if (dE == 0.0)
        return st;
    double E = st.energy + dE;
    if (cfg.kase == Case::coulomb)
        return coulomb_wavefunction(spec, *cfg.s, *cfg.v, st.n, E);
    if (cfg.kase == Case::equal_kratzer)
        return equal_kratzer_wavefunction(spec, *cfg.A, *cfg.B, st.n, E);
    BoundState out = st;
    out.energy = E;
    out.b = decay_b(spec, E);
    return out;
}

struct Row
{
    int n = 0;
    std::optional<BoundState> state;
    std::string note;
};

// Non-existence is reported per row; anything else is a usage problem.
Row solve_row(RunConfig const& cfg, int n)
{
    ProblemSpec const spec(cfg.mass, cfg.dim, cfg.l);
    Row row{n, std::nullopt, {}};
    try {
        row.state = solve_state(cfg, spec, n);
    } catch (NoBoundStateError const& e) {
        row.note = e.what();
    } catch (NoRootError const& e) {
        row.note = e.what();
    } catch (ConvergenceError const& e) {
        row.note = e.what();
    }
    return row;
}

std::vector<Row> solve_rows(RunConfig const& cfg)
{
    std::vector<Row> rows;
    for (int n = cfg.n->first; n <= cfg.n->second; ++n)
        rows.push_back(solve_row(cfg, n));
    return rows;
}

void report_notes(std::vector<Row> const& rows, std::ostream& err, std::string const& prefix = {})
{
    for (auto const& r : rows)
        if (!r.state)
            err << prefix << "n=" << r.n << ": " << r.note << "\n";
}

// ------------------------------------------------------------------ commands

std::string spectrum_text(RunConfig const& cfg, std::vector<Row> const& rows)
{
    if (cfg.format == Format::csv) {
        std::string s = "n,energy,exponent,norm,family\n";
        for (auto const& r : rows) {
            if (r.state)
                s += fmt::format("{},{},{},{},{}\n", r.n, num(r.state->energy),
                                 num(r.state->exponent), num(r.state->norm),
                                 to_string(r.state->family));
            else
                s += fmt::format("{},,,,\n", r.n);
        }
        return s;
    }
    json arr = json::array();
    for (auto const& r : rows) {
        json o;
        o["n"] = r.n;
        if (r.state) {
            o["energy"] = jnum(r.state->energy);
            o["exponent"] = jnum(r.state->exponent);
            o["norm"] = jnum(r.state->norm);
            o["family"] = std::string(to_string(r.state->family));
        } else {
            o["energy"] = o["exponent"] = o["norm"] = o["family"] = nullptr;
        }
        arr.push_back(o);
    }
    return arr.dump(2) + "\n";
}

int cmd_spectrum(RunConfig const& cfg, std::string& text, std::ostream& err)
{
    auto rows = solve_rows(cfg);
    text = spectrum_text(cfg, rows);
    report_notes(rows, err);
    bool missing = std::any_of(rows.begin(), rows.end(), [](Row const& r) { return !r.state; });
    return missing ? partial : ok;
}

int cmd_wavefunction(RunConfig const& cfg, std::string& text, std::ostream& err)
{
    if (!cfg.r_min || !cfg.r_max)
        throw UsageError("wavefunction needs --r-min and --r-max");
    if (!(*cfg.r_min > 0.0) || !(*cfg.r_max > *cfg.r_min))
        throw UsageError("grid must satisfy 0 < r-min < r-max");
    if (cfg.points < 2)
        throw UsageError("--points must be at least 2");
    if (cfg.n->first != cfg.n->second)
        throw UsageError("wavefunction takes a single n");

    Row row = solve_row(cfg, cfg.n->first);
    if (!row.state) {
        report_notes({row}, err);
        return partial;
    }
    BoundState const& st = *row.state;
    double const step = std::log(*cfg.r_max / *cfg.r_min) / (cfg.points - 1);

    if (cfg.format == Format::csv) {
        text = fmt::format("# case={} n={} energy={} exponent={} norm={} family={}\nr,u\n",
                           case_name(cfg.kase), st.n, num(st.energy), num(st.exponent),
                           num(st.norm), to_string(st.family));
        for (int i = 0; i < cfg.points; ++i) {
            double r = i + 1 == cfg.points ? *cfg.r_max : *cfg.r_min * std::exp(i * step);
            text += num(r) + "," + num(st(r)) + "\n";
        }
        return ok;
    }
    json o;
    o["schema"] = 1;
    o["case"] = case_name(cfg.kase);
    o["n"] = st.n;
    o["energy"] = jnum(st.energy);
    o["exponent"] = jnum(st.exponent);
    o["norm"] = jnum(st.norm);
    o["family"] = std::string(to_string(st.family));
    json samples = json::array();
    for (int i = 0; i < cfg.points; ++i) {
        double r = i + 1 == cfg.points ? *cfg.r_max : *cfg.r_min * std::exp(i * step);
        samples.push_back(json{{"r", jnum(r)}, {"u", jnum(st(r))}});
    }
    o["samples"] = samples;
    text = o.dump(2) + "\n";
    return ok;
}

struct Check
{
    double value = std::nan("");
    double threshold = 0.0;
    std::string note;
    bool pass() const { return std::isfinite(value) && value <= threshold; }
};

Check check_oracle(ProblemSpec const& spec, PotentialParams const& p, BoundState const& st)
{
    double const M = spec.mass();
    Check c{std::nan(""), 1e-6, {}};
    auto bracket = st.energy > 0.0 ? std::pair{0.0, M * (1 - 1e-6)} : std::pair{-M * (1 - 1e-6), 0.0};
    try {
        double E = shoot_eigenvalue(spec, p, st.node_count(), bracket);
        c.value = std::abs(E - st.energy) / M;
    } catch (Error const& e) {
        c.note = e.what();
    }
    return c;
}

Check check_residual(ProblemSpec const& spec, PotentialParams const& p, BoundState const& st)
{
    Check c{std::nan(""), 1e-8, {}};
    try {
        c.value = residual(spec, p, st.energy, [&](double r) { return st(r); });
    } catch (Error const& e) {
        c.note = e.what();
    }
    return c;
}

Check check_norm(BoundState const& st)
{
    Check c{std::nan(""), 1e-8, {}};
    try {
        double I = quad_adaptive([&](double r) { double u = st(r); return u * u; }, 0.0, kInf);
        c.value = std::abs(I - 1.0);
    } catch (Error const& e) {
        c.note = e.what();
    }
    return c;
}

Check check_delta(RunConfig const& cfg, ProblemSpec const& spec, PotentialParams const& p,
                  BoundState const& st)
{
    Check c{std::nan(""), 1e-9, {}};
    try {
        PotentialCase kind = cfg.kase == Case::coulomb         ? PotentialCase::coulomb
                             : cfg.kase == Case::equal_kratzer ? PotentialCase::equal_kratzer
                                                               : PotentialCase::unequal_kratzer;
        double e = cfg.kase == Case::equal_kratzer ? equal_kratzer_exponent(spec, *cfg.A, st.energy)
                                                   : st.exponent;
        auto [lambda0, s0] = build_aim_inputs(kind, spec, p, st.energy, e);
        AimSession session = aim_iterate(lambda0, s0, std::max(st.n, 1));
        c.value = session.relative_defect(st.n);
    } catch (Error const& e) {
        c.note = e.what();
    }
    return c;
}

bool params_fixed_k(Case c) { return c != Case::coulomb && c != Case::equal_kratzer; }

Check check_degeneracy(RunConfig const& cfg, int n)
{
    Check c{std::nan(""), 1e-12, {}};
    if (params_fixed_k(cfg.kase)) {
        // couplings tuned at one k: compare the candidate roots instead
        auto const p = params_of(cfg);
        auto roots = [&](ProblemSpec const& spec) {
            return cfg.kase == Case::unequal_ground ? unequal_ground_candidates(spec, p)
                                                    : unequal_family_candidates(spec, p, n);
        };
        std::vector<UnequalCandidate> r1, r2;
        try {
            r1 = roots(ProblemSpec(cfg.mass, cfg.dim, cfg.l + 1));
            r2 = roots(ProblemSpec(cfg.mass, cfg.dim + 2, cfg.l));
        } catch (Error const& e) {
            c.note = e.what();
            return c;
        }
        if (r1.size() != r2.size()) {
            c.note = "candidate counts differ";
            return c;
        }
        c.value = 0.0;
        for (std::size_t i = 0; i < r1.size(); ++i)
            c.value = std::max(c.value, std::abs(r1[i].energy - r2[i].energy) / cfg.mass);
        if (r1.empty())
            c.note = "no candidates";
        return c;
    }
    try {
        double e1 = solve_state(cfg, ProblemSpec(cfg.mass, cfg.dim, cfg.l + 1), n).energy;
        double e2 = solve_state(cfg, ProblemSpec(cfg.mass, cfg.dim + 2, cfg.l), n).energy;
        c.value = std::abs(e1 - e2) / cfg.mass;
    } catch (Error const& e) {
        c.note = e.what();
    }
    return c;
}

int cmd_verify(RunConfig const& cfg, std::string& text, std::ostream& err)
{
    std::vector<std::string> checks = cfg.checks.value_or(kAllChecks);
    if (checks.empty())
        throw UsageError("empty check set");
    for (auto const& name : checks)
        if (std::find(kAllChecks.begin(), kAllChecks.end(), name) == kAllChecks.end())
            throw UsageError("unknown check '" + name + "'");

    ProblemSpec const spec(cfg.mass, cfg.dim, cfg.l);
    auto const p = params_of(cfg);
    auto rows = solve_rows(cfg);
    report_notes(rows, err);

    json report;
    report["schema"] = 1;
    report["case"] = case_name(cfg.kase);
    report["energy_error"] = jnum(cfg.energy_error);
    json states = json::array();
    std::vector<std::string> failed;
    bool missing = false;
    for (auto const& row : rows) {
        json o;
        o["n"] = row.n;
        if (!row.state) {
            missing = true;
            o["energy"] = nullptr;
            o["note"] = row.note;
            states.push_back(o);
            continue;
        }
        BoundState st = shifted_state(cfg, spec, *row.state, cfg.energy_error);
        o["energy"] = jnum(st.energy);
        json jc;
        for (auto const& name : checks) {
            Check c;
            if (name == "oracle")
                c = check_oracle(spec, p, st);
            else if (name == "residual")
                c = check_residual(spec, p, st);
            else if (name == "norm")
                c = check_norm(st);
            else if (name == "delta")
                c = check_delta(cfg, spec, p, st);
            else
                c = check_degeneracy(cfg, row.n);
            json entry{{"value", jnum(c.value)}, {"threshold", jnum(c.threshold)}, {"pass", c.pass()}};
            if (!c.note.empty())
                entry["note"] = c.note;
            jc[name] = entry;
            if (!c.pass())
                failed.push_back(fmt::format("{} (n={})", name, row.n));
        }
        o["checks"] = jc;
        states.push_back(o);
    }
    report["states"] = states;
    report["pass"] = failed.empty() && !missing;
    text = report.dump(2) + "\n";

    if (!failed.empty()) {
        err << "verification failed:";
        for (auto const& f : failed)
            err << " " << f;
        err << "\n";
        return verify_failed;
    }
    return missing ? partial : ok;
}

void set_param(RunConfig& cfg, std::string const& name, double x)
{
    if (name == "mass") cfg.mass = x;
    else if (name == "s") cfg.s = x;
    else if (name == "v") cfg.v = x;
    else if (name == "A") cfg.A = x;
    else if (name == "B") cfg.B = x;
    else if (name == "s1") cfg.s1 = x;
    else if (name == "v1") cfg.v1 = x;
    else if (name == "s2") cfg.s2 = x;
    else if (name == "v2") cfg.v2 = x;
    else throw UsageError("cannot sweep '" + name + "'");
}

struct SweepBlock
{
    std::vector<Row> rows;
    std::string error;
};

int cmd_sweep(RunConfig const& cfg, std::string& text, std::ostream& err)
{
    if (cfg.sweep_param.empty() || cfg.sweep_values.empty())
        throw UsageError("sweep needs --param and --values");
    {
        RunConfig probe = cfg;
        set_param(probe, cfg.sweep_param, 0.0);
    }

    auto run = [&cfg](double x) {
        SweepBlock block;
        RunConfig local = cfg;
        set_param(local, cfg.sweep_param, x);
        try {
            block.rows = solve_rows(local);
        } catch (Error const& e) {
            block.error = e.what();
        }
        return block;
    };

    // results are gathered in input order whatever order the tasks finish in
    std::size_t const width = std::max(1u, std::thread::hardware_concurrency());
    std::vector<SweepBlock> blocks;
    for (std::size_t i = 0; i < cfg.sweep_values.size(); i += width) {
        std::vector<std::future<SweepBlock>> batch;
        for (std::size_t j = i; j < std::min(i + width, cfg.sweep_values.size()); ++j)
            batch.push_back(std::async(std::launch::async, run, cfg.sweep_values[j]));
        for (auto& f : batch)
            blocks.push_back(f.get());
    }

    bool missing = false;
    json arr = json::array();
    std::string csv = fmt::format("{},n,energy,exponent,norm,family\n", cfg.sweep_param);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        double x = cfg.sweep_values[i];
        auto const& b = blocks[i];
        std::string const prefix = fmt::format("{}={}: ", cfg.sweep_param, num(x));
        if (!b.error.empty()) {
            err << prefix << b.error << "\n";
            missing = true;
            for (int n = cfg.n->first; n <= cfg.n->second; ++n) {
                csv += fmt::format("{},{},,,,\n", num(x), n);
                arr.push_back(json{{cfg.sweep_param, jnum(x)}, {"n", n}, {"energy", nullptr},
                                   {"exponent", nullptr}, {"norm", nullptr}, {"family", nullptr}});
            }
            continue;
        }
        report_notes(b.rows, err, prefix);
        for (auto const& r : b.rows) {
            json o{{cfg.sweep_param, jnum(x)}, {"n", r.n}};
            if (r.state) {
                csv += fmt::format("{},{},{},{},{},{}\n", num(x), r.n, num(r.state->energy),
                                   num(r.state->exponent), num(r.state->norm),
                                   to_string(r.state->family));
                o["energy"] = jnum(r.state->energy);
                o["exponent"] = jnum(r.state->exponent);
                o["norm"] = jnum(r.state->norm);
                o["family"] = std::string(to_string(r.state->family));
            } else {
                missing = true;
                csv += fmt::format("{},{},,,,\n", num(x), r.n);
                o["energy"] = o["exponent"] = o["norm"] = o["family"] = nullptr;
            }
            arr.push_back(o);
        }
    }
    text = cfg.format == Format::csv ? csv : arr.dump(2) + "\n";
    return missing ? partial : ok;
}

// ------------------------------------------------------------------ parsing

struct RawOptions
{
    std::string kase = "coulomb";
    double mass = 1.0;
    int dim = 3;
    int l = 0;
    std::optional<double> s, v, A, B, s1, v1, s2, v2;
    std::string n;
    std::string format = "csv";
    std::string branch = "plus";
    std::optional<double> r_min, r_max;
    int points = 200;
    std::optional<std::string> checks;
    double energy_error = 0.0;
    std::string param;
    std::string values;
    std::string config;
    std::string save_config;
    std::string output;
};

void add_options(CLI::App& sub, RawOptions& o, Command command)
{
    auto last = [](CLI::Option* opt) { opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast); };
    last(sub.add_option("--case", o.kase, "coulomb | equal-kratzer | unequal-kratzer-ground | "
                                          "unequal-kratzer-g1 | unequal-kratzer-g2 | monic"));
    last(sub.add_option("-M,--mass", o.mass, "particle mass"));
    last(sub.add_option("-d,--dim", o.dim, "spatial dimension"));
    last(sub.add_option("-l,--l", o.l, "angular momentum"));
    last(sub.add_option("--s", o.s, "Coulomb scalar coupling"));
    last(sub.add_option("--v", o.v, "Coulomb vector coupling"));
    last(sub.add_option("--A", o.A, "equal Kratzer 1/r^2 coupling"));
    last(sub.add_option("--B", o.B, "equal Kratzer 1/r coupling"));
    last(sub.add_option("--s1", o.s1));
    last(sub.add_option("--v1", o.v1));
    last(sub.add_option("--s2", o.s2));
    last(sub.add_option("--v2", o.v2));
    last(sub.add_option("--n", o.n, "level or range lo..hi"));
    last(sub.add_option("--format", o.format, "csv | json"));
    last(sub.add_option("--branch", o.branch, "plus | minus (coulomb)"));
    sub.add_option("--config", o.config, "key = value file; flags override it");
    sub.add_option("--save-config", o.save_config, "write the resolved configuration");
    sub.add_option("--output", o.output,
                   fmt::format("output file, relative to ${} when set", kOutputDirEnv));
    if (command == Command::wavefunction) {
        last(sub.add_option("--r-min", o.r_min));
        last(sub.add_option("--r-max", o.r_max));
        last(sub.add_option("--points", o.points));
    }
    if (command == Command::verify) {
        last(sub.add_option("--checks", o.checks, "comma list of oracle,residual,norm,delta,degeneracy"));
        last(sub.add_option("--inject-energy-error", o.energy_error));
    }
    if (command == Command::sweep) {
        last(sub.add_option("--param", o.param, "mass | s | v | A | B | s1 | v1 | s2 | v2"));
        last(sub.add_option("--values", o.values, "comma list"));
    }
}

RunConfig resolve(RawOptions const& o, Command command)
{
    RunConfig cfg;
    cfg.command = command;
    auto it = kCases.find(o.kase);
    if (it == kCases.end())
        throw UsageError("unknown case '" + o.kase + "'");
    cfg.kase = it->second;
    if (!(o.mass > 0.0))
        throw UsageError("mass must be positive");
    if (o.dim < 1 || o.l < 0)
        throw UsageError("need d >= 1 and l >= 0");
    cfg.mass = o.mass;
    cfg.dim = o.dim;
    cfg.l = o.l;
    cfg.s = o.s, cfg.v = o.v, cfg.A = o.A, cfg.B = o.B;
    cfg.s1 = o.s1, cfg.v1 = o.v1, cfg.s2 = o.s2, cfg.v2 = o.v2;

    auto need = [&](std::optional<double> const& x, char const* flag) {
        if (!x)
            throw UsageError(fmt::format("case {} requires --{}", o.kase, flag));
    };
    switch (cfg.kase) {
    case Case::coulomb: need(o.s, "s"), need(o.v, "v"); break;
    case Case::equal_kratzer: need(o.A, "A"), need(o.B, "B"); break;
    default: need(o.s1, "s1"), need(o.v1, "v1"), need(o.s2, "s2"), need(o.v2, "v2");
    }

    auto fixed = fixed_n(cfg.kase);
    if (!o.n.empty())
        cfg.n = parse_range(o.n);
    if (fixed) {
        if (cfg.n && *cfg.n != std::pair{*fixed, *fixed})
            throw UsageError(fmt::format("case {} has n = {} only", o.kase, *fixed));
        cfg.n = std::pair{*fixed, *fixed};
    } else if (!cfg.n) {
        cfg.n = std::pair{0, 0};
    }

    if (o.format == "csv")
        cfg.format = Format::csv;
    else if (o.format == "json")
        cfg.format = Format::json;
    else
        throw UsageError("unknown format '" + o.format + "'");

    if (o.branch == "plus")
        cfg.branch = Branch::plus;
    else if (o.branch == "minus")
        cfg.branch = Branch::minus;
    else
        throw UsageError("unknown branch '" + o.branch + "'");
    if (cfg.branch == Branch::minus && cfg.kase != Case::coulomb)
        throw UsageError("--branch minus applies to the coulomb case only");

    cfg.r_min = o.r_min;
    cfg.r_max = o.r_max;
    cfg.points = o.points;
    if (o.checks)
        cfg.checks = split(*o.checks, ',');
    cfg.energy_error = o.energy_error;
    cfg.sweep_param = o.param;
    for (auto const& x : split(o.values, ','))
        cfg.sweep_values.push_back(to_double(x, "--values"));
    return cfg;
}

std::filesystem::path output_path(std::string const& name)
{
    std::filesystem::path p(name);
    char const* dir = std::getenv(kOutputDirEnv);
    if (p.is_relative() && dir && *dir)
        p = std::filesystem::path(dir) / p;
    return p;
}

void write_file(std::filesystem::path const& path, std::string const& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw UsageError("cannot write " + path.string());
    f << text;
}

} // namespace

std::string to_config_text(RunConfig const& cfg)
{
    std::string s;
    auto put = [&](char const* key, std::string const& value) {
        s += fmt::format("{} = {}\n", key, value);
    };
    auto opt = [&](char const* key, std::optional<double> const& x) {
        if (x)
            put(key, exact(*x));
    };
    put("case", case_name(cfg.kase));
    put("mass", exact(cfg.mass));
    put("dim", std::to_string(cfg.dim));
    put("l", std::to_string(cfg.l));
    opt("s", cfg.s);
    opt("v", cfg.v);
    opt("A", cfg.A);
    opt("B", cfg.B);
    opt("s1", cfg.s1);
    opt("v1", cfg.v1);
    opt("s2", cfg.s2);
    opt("v2", cfg.v2);
    if (cfg.n)
        put("n", fmt::format("{}..{}", cfg.n->first, cfg.n->second));
    put("format", cfg.format == Format::csv ? "csv" : "json");
    put("branch", cfg.branch == Branch::plus ? "plus" : "minus");
    if (cfg.command == Command::wavefunction) {
        opt("r-min", cfg.r_min);
        opt("r-max", cfg.r_max);
        put("points", std::to_string(cfg.points));
    }
    if (cfg.command == Command::verify) {
        if (cfg.checks) {
            std::string joined;
            for (auto const& c : *cfg.checks)
                joined += (joined.empty() ? "" : ",") + c;
            put("checks", joined);
        }
        put("inject-energy-error", exact(cfg.energy_error));
    }
    if (cfg.command == Command::sweep) {
        put("param", cfg.sweep_param);
        std::string joined;
        for (double x : cfg.sweep_values)
            joined += (joined.empty() ? "" : ",") + exact(x);
        put("values", joined);
    }
    return s;
}

int run_cli(std::vector<std::string> const& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Bound states of the Klein-Gordon equation with Coulomb and Kratzer potentials",
                 "kgaim"};
    app.require_subcommand(1);
    RawOptions raw;
    std::map<CLI::App*, Command> commands;
    for (auto [name, cmd, help] :
         {std::tuple{"spectrum", Command::spectrum, "energies of levels n"},
          std::tuple{"wavefunction", Command::wavefunction, "sample u(r) on a log grid"},
          std::tuple{"verify", Command::verify, "cross-check states against the oracles"},
          std::tuple{"sweep", Command::sweep, "spectrum over a list of parameter values"}}) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_options(*sub, raw, cmd);
        commands[sub] = cmd;
    }

    std::vector<std::string> tokens = args;
    CLI::App* active = nullptr;
    try {
        // splice the config file in right after the subcommand name
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            std::string path;
            std::size_t span = 0;
            if (tokens[i] == "--config" && i + 1 < tokens.size())
                path = tokens[i + 1], span = 2;
            else if (tokens[i].rfind("--config=", 0) == 0)
                path = tokens[i].substr(9), span = 1;
            if (span == 0)
                continue;
            auto extra = read_config(path);
            tokens.erase(tokens.begin() + i, tokens.begin() + i + span);
            tokens.insert(tokens.begin() + std::min<std::size_t>(1, tokens.size()), extra.begin(),
                          extra.end());
            break;
        }

        std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
        app.parse(reversed);
        for (auto const& [sub, cmd] : commands)
            if (sub->parsed())
                active = sub;
        Command const command = commands.at(active);
        RunConfig const cfg = resolve(raw, command);

        if (!raw.save_config.empty())
            write_file(output_path(raw.save_config), to_config_text(cfg));

        std::string text;
        int code = ok;
        switch (command) {
        case Command::spectrum: code = cmd_spectrum(cfg, text, err); break;
        case Command::wavefunction: code = cmd_wavefunction(cfg, text, err); break;
        case Command::verify: code = cmd_verify(cfg, text, err); break;
        case Command::sweep: code = cmd_sweep(cfg, text, err); break;
        }
        if (raw.output.empty())
            out << text;
        else
            write_file(output_path(raw.output), text);
        return code;
    } catch (CLI::CallForHelp const&) {
        out << (active ? active->help() : app.help());
        return ok;
    } catch (CLI::CallForAllHelp const&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (CLI::ParseError const& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return usage;
    } catch (UsageError const& e) {
        err << "error: " << e.what() << "\n" << (active ? active->help() : app.help());
        return usage;
    } catch (Error const& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    }
}

} // namespace kgaim::cli
