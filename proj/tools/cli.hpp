#pragma once

#include "kgaim/spectra.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kgaim::cli {

enum class Command { spectrum, wavefunction, verify, sweep };
enum class Case { coulomb, equal_kratzer, unequal_ground, unequal_g1, unequal_g2, monic };
enum class Format { csv, json };

struct RunConfig
{
    Command command = Command::spectrum;
    Case kase = Case::coulomb;
    double mass = 1.0;
    int dim = 3;
    int l = 0;
    std::optional<double> s, v, A, B, s1, v1, s2, v2;
    std::optional<std::pair<int, int>> n;
    Format format = Format::csv;
    Branch branch = Branch::plus;

    // wavefunction grid, log spaced
    std::optional<double> r_min, r_max;
    int points = 200;

    std::optional<std::vector<std::string>> checks;
    double energy_error = 0.0;

    std::string sweep_param;
    std::vector<double> sweep_values;
};

enum ExitCode { ok = 0, usage = 1, partial = 2, verify_failed = 3 };

/// Flat key = value text that reproduces `cfg` when passed back via --config.
std::string to_config_text(RunConfig const& cfg);

/// args excludes the program name.
int run_cli(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

} // namespace kgaim::cli
