#pragma once

#include "kgaim/aim.hpp"

namespace kgaim {

/// Mass, dimension and angular momentum of a radial Klein-Gordon problem.
/// Natural units (hbar = c = 1). The radial equation depends on (d, l) only
/// through k = d + 2l.
class ProblemSpec
{
  public:
    ProblemSpec(double mass, int dim, int l);

    double mass() const noexcept { return mass_; }
    int dim() const noexcept { return dim_; }
    int l() const noexcept { return l_; }
    int k() const noexcept { return dim_ + 2 * l_; }
    /// (k-1)(k-3)/4
    double centrifugal() const noexcept;
    /// (k/2 - 1)^2
    double half_k_shift_sq() const noexcept;

  private:
    double mass_;
    int dim_;
    int l_;
};

/// Kratzer couplings: S(r) = -s1/r + s2/r^2, V(r) = -v1/r + v2/r^2.
struct PotentialParams
{
    double s1 = 0.0;
    double v1 = 0.0;
    double s2 = 0.0;
    double v2 = 0.0;

    static PotentialParams coulomb(double s, double v) { return {s, v, 0.0, 0.0}; }
    /// S = V = -B/r + A/r^2
    static PotentialParams equal_kratzer(double A, double B) { return {B, B, A, A}; }

    friend bool operator==(PotentialParams const&, PotentialParams const&) = default;
};

/// -u'' + (inv_r/r + inv_r2/r^2 + inv_r3/r^3 + inv_r4/r^4) u = energy_term u
struct RadialEquation
{
    double inv_r = 0.0;
    double inv_r2 = 0.0;
    double inv_r3 = 0.0;
    double inv_r4 = 0.0;
    double energy_term = 0.0; ///< E^2 - M^2

    double potential(double r) const noexcept;
    /// u'' = q(r) u
    double q(double r) const noexcept { return potential(r) - energy_term; }

    friend bool operator==(RadialEquation const&, RadialEquation const&) = default;
};

/// u(r) = r^c exp(b r + a/r) f(r) with a <= 0 and b <= 0.
struct FactorizationAnsatz
{
    FactorizationAnsatz(double c, double a, double b);

    double c;
    double a;
    double b;
};

enum class PotentialCase { coulomb, equal_kratzer, unequal_kratzer };

RadialEquation build_radial(ProblemSpec const& spec, PotentialParams const& params, double E);

/// b = -sqrt(M^2 - E^2); throws NoBoundStateError when |E| >= M.
double decay_b(ProblemSpec const& spec, double E);
/// a = -sqrt(s2^2 - v2^2); throws DomainError when s2^2 < v2^2.
double decay_a(PotentialParams const& params);

double coulomb_exponent(ProblemSpec const& spec, double s, double v);
double equal_kratzer_exponent(ProblemSpec const& spec, double A, double E);
/// c = (v1 v2 - s1 s2)/sqrt(s2^2 - v2^2) + 1, the choice that removes the
/// 1/r^3 term of the transformed equation. The caller rejects c <= 0.
double unequal_exponent(PotentialParams const& params);

/// G = 2(M s2 + E v2) + s1^2 - v1^2 + (k-1)(k-3)/4 - c^2 + c + 2ab
double condition_g(ProblemSpec const& spec, PotentialParams const& params, double E, double c);

/// (lambda0, s0) of f'' = lambda0 f' + s0 f after factoring out
/// r^c exp(b r + a/r). For the unequal case a 1/r^3 term survives in s0
/// unless c is the value returned by unequal_exponent.
AimInputs build_aim_inputs(PotentialCase kind, ProblemSpec const& spec,
                           PotentialParams const& params, double E, double c);

} // namespace kgaim
