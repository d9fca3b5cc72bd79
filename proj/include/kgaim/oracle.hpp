#pragma once

#include "kgaim/model.hpp"

#include <functional>
#include <limits>
#include <utility>

namespace kgaim {

// ---------------------------------------------------------------- quadrature

struct QuadOptions
{
    double rel_tol = 1e-12;
    int max_subintervals = 2000;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature. `hi` may be +inf: the
/// range is then cut where |f| falls below 1e-16 of its peak and the
/// remaining tail is bounded by an exponential envelope.
double quad_adaptive(std::function<double(double)> const& f, double lo, double hi,
                     QuadOptions const& opt = {});

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------- shooting

/// Grid and matching controls for shoot_eigenvalue. Integration runs on a
/// uniform grid in x = ln r. Zero means "choose automatically".
struct ShootingConfig
{
    double step = 2e-3;         ///< grid step in ln r (reduced if Numerov needs it)
    double r_min = 0.0;         ///< from the small-r behavior of the equation
    double r_max = 0.0;         ///< outer turning point + tail_lengths/kappa
    double tail_lengths = 30.0; ///< decay lengths kept past the turning point
    double match = 0.0;         ///< outer turning point
    double node_tol = 1e-12;    ///< sign changes below this relative amplitude are noise
};

struct ShootResult
{
    double energy = 0.0;
    int nodes = 0;
    double r_min = 0.0;
    double r_max = 0.0;
    double match = 0.0;
    int points = 0;
};

/// Energy in `bracket` whose regular, decaying solution of the radial
/// equation has n_nodes interior zeros.
ShootResult shoot(ProblemSpec const& spec, PotentialParams const& params, int n_nodes,
                  std::pair<double, double> bracket, ShootingConfig const& cfg = {});

double shoot_eigenvalue(ProblemSpec const& spec, PotentialParams const& params, int n_nodes,
                        std::pair<double, double> bracket, ShootingConfig const& cfg = {});

/// Zeros of the outward (regular) solution out to the truncation radius at
/// energy E; counts the levels below E.
int shooting_node_count(ProblemSpec const& spec, PotentialParams const& params, double E,
                        ShootingConfig const& cfg = {});

// ---------------------------------------------------------------- residual

struct ResidualOptions
{
    double lo = 1e-2; ///< grid start in units of 1/|b|
    double hi = 1e2;  ///< grid end in units of 1/|b|
    int points = 1501;
    double tol = 1e-8; ///< the discretization estimate must stay below this
};

struct ResidualReport
{
    double residual = 0.0;       ///< max |(-d^2/dr^2 + W - E^2 + M^2) u| / max term
    double error_estimate = 0.0; ///< from comparing steps h and 2h
};

ResidualReport residual_report(ProblemSpec const& spec, PotentialParams const& params, double E,
                               std::function<double(double)> const& u,
                               ResidualOptions const& opt = {});

/// Throws ConvergenceError ("grid too coarse") when the discretization
/// estimate exceeds opt.tol.
double residual(ProblemSpec const& spec, PotentialParams const& params, double E,
                std::function<double(double)> const& u, ResidualOptions const& opt = {});

} // namespace kgaim
