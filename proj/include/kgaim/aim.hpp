#pragma once

#include "kgaim/laurent.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace kgaim {

/// Iterates of the asymptotic iteration method for y'' = lambda0 y' + s0 y.
///
/// lambda[n] and s[n] are the coefficients of y^{(n+2)} = lambda[n] y' + s[n] y.
/// delta[n] = lambda[n] s[n-1] - lambda[n-1] s[n], with the seed
/// (lambda[-1], s[-1]) = (1, 0) so that delta[0] = -s0.
/// scale[n] = lambda[n] s[n-1] is the magnitude reference for delta[n].
struct AimSession
{
    std::vector<LaurentPoly> lambda;
    std::vector<LaurentPoly> s;
    std::vector<LaurentPoly> delta;
    std::vector<LaurentPoly> scale;

    LaurentPoly const& lambda0() const { return lambda.front(); }
    LaurentPoly const& s0() const { return s.front(); }
    int depth() const { return static_cast<int>(lambda.size()) - 1; }

    /// True when delta[n] vanishes identically at relative tolerance tol.
    bool terminates(int n, double tol = 1e-9) const;
    /// max |coefficient of delta[n]| / (max |coefficient of scale[n]| + 1).
    double relative_defect(int n) const;
    /// max over powers r^j of |delta[n]_j| / |scale[n]_j|; powers absent from
    /// scale[n] fall back to max|scale[n]| + 1.
    double coefficient_defect(int n) const;
};

inline constexpr int kDefaultAimDepth = 60;

AimSession aim_iterate(LaurentPoly const& lambda0, LaurentPoly const& s0, int n_max);

/// max|delta| <= tol * (max|scale| + 1).
bool delta_is_zero(LaurentPoly const& delta, LaurentPoly const& scale, double tol);

using AimInputs = std::pair<LaurentPoly, LaurentPoly>;
using AimProblem = std::function<AimInputs(double energy)>;

struct AimRootOptions
{
    double mass = 1.0;
    /// Sample point; non-positive selects 1/sqrt(M^2 - E^2).
    double r0 = 0.0;
    double energy_tol = 1e-12;
};

/// delta_n(r0; E) normalized by |lambda_n s_{n-1}|(r0) + |lambda_{n-1} s_n|(r0).
double aim_delta_at(AimProblem const& problem, int n, double energy, AimRootOptions const& opt);

/// Energy root of delta_n(r0; E) inside the bracket by bisection.
/// Throws NoRootError when the bracket holds no sign change and
/// ConvergenceError when the roots of successive iterations drift apart.
double aim_numeric_root(AimProblem const& problem, int n, std::pair<double, double> bracket,
                        AimRootOptions const& opt = {});

} // namespace kgaim
