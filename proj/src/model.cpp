#include "kgaim/model.hpp"

#include "kgaim/errors.hpp"

#include <cmath>

namespace kgaim {

ProblemSpec::ProblemSpec(double mass, int dim, int l)
    : mass_(mass)
    , dim_(dim)
    , l_(l)
{
    if (!(mass > 0.0))
        throw DomainError("ProblemSpec: mass must be positive");
    if (dim < 1)
        throw DomainError("ProblemSpec: dimension must be >= 1");
    if (l < 0)
        throw DomainError("ProblemSpec: l must be >= 0");
}

double ProblemSpec::centrifugal() const noexcept
{
    double const kk = k();
    return 0.25 * (kk - 1.0) * (kk - 3.0);
}

double ProblemSpec::half_k_shift_sq() const noexcept
{
    double const h = 0.5 * k() - 1.0;
    return h * h;
}

double RadialEquation::potential(double r) const noexcept
{
    double const x = 1.0 / r;
    return x * (inv_r + x * (inv_r2 + x * (inv_r3 + x * inv_r4)));
}

FactorizationAnsatz::FactorizationAnsatz(double c_, double a_, double b_)
    : c(c_)
    , a(a_)
    , b(b_)
{
    if (a > 0.0 || b > 0.0)
        throw DomainError("FactorizationAnsatz: decay constants a and b must be <= 0");
}

RadialEquation build_radial(ProblemSpec const& spec, PotentialParams const& p, double E)
{
    double const M = spec.mass();
    RadialEquation eq;
    eq.inv_r = -2.0 * (M * p.s1 + E * p.v1);
    eq.inv_r2 = 2.0 * M * p.s2 + p.s1 * p.s1 + 2.0 * E * p.v2 - p.v1 * p.v1 + spec.centrifugal();
    eq.inv_r3 = 2.0 * (p.v1 * p.v2 - p.s1 * p.s2);
    eq.inv_r4 = p.s2 * p.s2 - p.v2 * p.v2;
    eq.energy_term = E * E - M * M;
    return eq;
}

double decay_b(ProblemSpec const& spec, double E)
{
    double const M = spec.mass();
    if (!(std::abs(E) < M))
        throw NoBoundStateError("not a bound state: |E| >= M");
    return -std::sqrt((M - E) * (M + E));
}

double decay_a(PotentialParams const& p)
{
    double const d = p.s2 * p.s2 - p.v2 * p.v2;
    if (d < 0.0)
        throw DomainError("decay_a: requires s2^2 >= v2^2");
    return -std::sqrt(d);
}

double coulomb_exponent(ProblemSpec const& spec, double s, double v)
{
    double const disc = spec.half_k_shift_sq() + s * s - v * v;
    if (disc < 0.0)
        throw OvercriticalError("overcritical vector coupling: no real indicial root");
    return 0.5 + std::sqrt(disc);
}

double equal_kratzer_exponent(ProblemSpec const& spec, double A, double E)
{
    double const disc = spec.half_k_shift_sq() + 2.0 * A * (spec.mass() + E);
    if (disc < 0.0)
        throw OvercriticalError("overcritical inverse-square coupling: no real indicial root");
    return 0.5 + std::sqrt(disc);
}

double unequal_exponent(PotentialParams const& p)
{
    double const d = p.s2 * p.s2 - p.v2 * p.v2;
    if (!(d > 0.0))
        throw DomainError("unequal_exponent: requires s2^2 > v2^2");
    return (p.v1 * p.v2 - p.s1 * p.s2) / std::sqrt(d) + 1.0;
}

double condition_g(ProblemSpec const& spec, PotentialParams const& p, double E, double c)
{
    double const M = spec.mass();
    double const ab = decay_a(p) * decay_b(spec, E);
    return 2.0 * (M * p.s2 + E * p.v2) + p.s1 * p.s1 - p.v1 * p.v1 + spec.centrifugal() - c * c +
           c + 2.0 * ab;
}

AimInputs build_aim_inputs(PotentialCase kind, ProblemSpec const& spec,
                           PotentialParams const& p, double E, double c)
{
    double const M = spec.mass();
    double const b = decay_b(spec, E);
    switch (kind) {
        case PotentialCase::coulomb: {
            if (p.s2 != 0.0 || p.v2 != 0.0)
                throw DomainError("build_aim_inputs: Coulomb case requires s2 = v2 = 0");
            LaurentPoly lambda0{{-1, -2.0 * c}, {0, -2.0 * b}};
            LaurentPoly s0{{-1, -2.0 * (M * p.s1 + E * p.v1) - 2.0 * c * b}};
            return {lambda0, s0};
        }
        case PotentialCase::equal_kratzer: {
            if (p.s1 != p.v1 || p.s2 != p.v2)
                throw DomainError("build_aim_inputs: equal case requires s1 = v1 and s2 = v2");
            double const B = p.s1;
            LaurentPoly lambda0{{-1, -2.0 * c}, {0, -2.0 * b}};
            LaurentPoly s0{{-1, -2.0 * B * (M + E) - 2.0 * c * b}};
            return {lambda0, s0};
        }
        case PotentialCase::unequal_kratzer: {
            double const a = decay_a(p);
            LaurentPoly lambda0{{-2, 2.0 * a}, {-1, -2.0 * c}, {0, -2.0 * b}};
            LaurentPoly s0{{-1, -2.0 * (M * p.s1 + E * p.v1) - 2.0 * c * b},
                           {-2, condition_g(spec, p, E, c)}};
            double const w = 2.0 * (p.v1 * p.v2 - p.s1 * p.s2);
            double const cubic = w - 2.0 * a + 2.0 * c * a;
            // rounding residue of the exponent choice is not a real 1/r^3 term
            double const size = std::abs(w) + 2.0 * std::abs(a) * (1.0 + std::abs(c));
            if (std::abs(cubic) > 64.0 * 2.2e-16 * size)
                s0 += LaurentPoly::monomial(cubic, -3);
            return {lambda0, s0};
        }
    }
    throw DomainError("build_aim_inputs: unknown case");
}

} // namespace kgaim
