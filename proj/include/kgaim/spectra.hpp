#pragma once

#include "kgaim/laurent.hpp"
#include "kgaim/model.hpp"

#include <complex>
#include <limits>
#include <string_view>
#include <vector>

namespace kgaim {

enum class Family { coulomb_1f1, kratzer_1f1, nodeless_bessel, monic_poly };

std::string_view to_string(Family family) noexcept;

/// A normalized bound state u(r) = norm * r^c exp(b r + a/r) f(r) where f is
/// the polynomial with ascending coefficients `poly`.
struct BoundState
{
    int n = 0;
    double energy = 0.0;
    double exponent = 0.0;
    double mass = 1.0;
    double a = 0.0; ///< <= 0
    double b = 0.0; ///< < 0
    Family family = Family::coulomb_1f1;
    std::vector<double> poly{1.0};
    std::vector<std::complex<double>> poly_roots; ///< monic family only
    double norm = 1.0;
    double g = std::numeric_limits<double>::quiet_NaN(); ///< unequal families only

    double operator()(double r) const;
    /// Zeros of u on (0, inf): n for the 1F1 families, positive real roots
    /// of f for the monic family, 0 for nodeless states.
    int node_count() const;
};

enum class Branch { plus, minus };

// ---------------------------------------------------------------- Coulomb

double coulomb_energy(ProblemSpec const& spec, double s, double v, int n,
                      Branch branch = Branch::plus);
BoundState coulomb_wavefunction(ProblemSpec const& spec, double s, double v, int n, double E);

// ------------------------------------------------------ equal Kratzer S = V

/// Root in (-M, M) of 2B(M+E)/sqrt(M^2-E^2) = 2n+1+sqrt((k-2)^2 + 8A(M+E)).
double equal_kratzer_energy(ProblemSpec const& spec, double A, double B, int n);
/// Leading-order non-relativistic binding energy E - M.
double equal_kratzer_nonrel(ProblemSpec const& spec, double A, double B, int n);
BoundState equal_kratzer_wavefunction(ProblemSpec const& spec, double A, double B, int n,
                                      double E);

// ------------------------------------------------------- unequal Kratzer

/// Residuals of the three conditions that make r^c exp(br + a/r) f_n(r) an
/// exact solution, evaluated at a candidate energy.
struct UnequalCandidate
{
    int n = 0;
    double energy = 0.0;
    double exponent = 0.0;
    double g = 0.0;
    double equation_residual = 0.0;   ///< of the eliminated eigenvalue equation
    double quantization_defect = 0.0; ///< (M s1 + E v1)/sqrt(M^2-E^2) - (c + n)
    double condition_defect = 0.0;    ///< G_n(G) with the actual ab, scaled
    double exponent_defect = 0.0;     ///< v1 v2 - s1 s2 - a + c a
    bool consistent = false;
};

inline constexpr double kConsistencyTol = 1e-10;

/// LHS - RHS of the ground-state equation
/// (Ms1+Ev1)/kappa = 1/2 + sqrt((k/2-1)^2 + 2(Ms1+Ev1)a' - 2(v1v2-s1s2)kappa
///                              + 2(Ms2+Ev2) + s1^2 - v1^2),
/// a' = sqrt(s2^2-v2^2); NaN where the square root is not real.
double unequal_ground_equation(ProblemSpec const& spec, PotentialParams const& params, double E);
std::vector<UnequalCandidate> unequal_ground_candidates(ProblemSpec const& spec,
                                                        PotentialParams const& params);
BoundState unequal_ground_solve(ProblemSpec const& spec, PotentialParams const& params);

/// Eliminated eigenvalue equation G_n(G(E)) = 0 for the degree-n monic family,
/// with c = (Ms1+Ev1)/kappa - n and ab = ((Ms1+Ev1)a' - (v1v2-s1s2)kappa)/(n+1).
double unequal_family_equation(ProblemSpec const& spec, PotentialParams const& params, int n,
                               double E);
std::vector<UnequalCandidate> unequal_family_candidates(ProblemSpec const& spec,
                                                        PotentialParams const& params, int n);
BoundState unequal_family_solve(ProblemSpec const& spec, PotentialParams const& params, int n);

BoundState g1_excited_solve(ProblemSpec const& spec, PotentialParams const& params);
BoundState g2_excited_solve(ProblemSpec const& spec, PotentialParams const& params);

/// Evaluate all three residuals for the degree-n family at energy E.
UnequalCandidate unequal_residuals(ProblemSpec const& spec, PotentialParams const& params, int n,
                                   double E, double c);

struct ConstrainedState
{
    PotentialParams params;
    BoundState state;
};

/// Nodeless states u = C r^n exp(-kappa r - a'/r): solves for (s1, v1, E)
/// given s2, v2 (taken from `partial`) and n >= 1. Only solutions with
/// S(r) >= V(r) everywhere are kept; sorted by energy.
std::vector<ConstrainedState> unequal_constraint_solutions(ProblemSpec const& spec,
                                                           PotentialParams const& partial, int n);
ConstrainedState unequal_constraint_solve(ProblemSpec const& spec, PotentialParams const& partial,
                                          int n);

enum class Coupling { s1, v1 };

/// Completes `partial` by solving for one 1/r coupling and the energy so that
/// the degree-n monic family (n = 0 included) has an exact state.
std::vector<ConstrainedState> monic_constraint_solutions(ProblemSpec const& spec,
                                                         PotentialParams const& partial, int n,
                                                         Coupling free);

// ------------------------------------------------------------- monic system

/// The degree-(n+1) monic polynomial in G whose roots allow a degree-n
/// polynomial factor f(r), for quantized 1/r coefficient 2nb.
LaurentPoly condition_polynomial(int n, double a, double b, double c);
/// Same polynomial evaluated at G; depends on a and b only through ab.
double condition_value(int n, double ab, double c, double G);

struct MonicSystem
{
    int n = 0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double g = 0.0;
    std::vector<double> coefficients; ///< a_0 .. a_n, a_n = 1
    std::vector<std::complex<double>> roots;

    int positive_real_roots(double imag_tol = 1e-9) const;
    /// Largest relative violation of the linear relations on the coefficients.
    double relation_defect() const;
};

/// Coefficients a_0..a_{n-1} of the monic solution at G (no solvability check).
MonicSystem monic_back_substitute(int n, double a, double b, double c, double G);

struct MonicSolution
{
    LaurentPoly condition;
    std::vector<double> real_g_roots;
    std::vector<MonicSystem> systems;
};

MonicSolution monic_solve(int n, double a, double b, double c);

/// Roots of the polynomial with ascending coefficients (leading nonzero).
std::vector<std::complex<double>> polynomial_roots(std::vector<double> const& ascending);

} // namespace kgaim
