#pragma once

#include "kgaim/roots.hpp"
#include "kgaim/spectra.hpp"

namespace kgaim::detail {

inline constexpr int kScanPoints = 2000;

/// Sign-change roots of f over (-M, M) shrunk by 1e-6 M at each end.
template <class F>
std::vector<double> energy_roots(double M, F&& f)
{
    double const eps = 1e-6 * M;
    return roots::find_roots(f, -M + eps, M - eps, kScanPoints, 1e-14 * M);
}

/// Sum of |coefficient| |x|^e, the size against which a polynomial value
/// is compared.
double magnitude_at(LaurentPoly const& p, double x);

LaurentPoly condition_polynomial_ab(int n, double ab, double c);

/// Normalized unequal-family state u = norm r^c exp(br + a/r) f(r) for the
/// monic f selected by G.
BoundState make_unequal_state(ProblemSpec const& spec, PotentialParams const& params, int n,
                              double E, double c, double G, Family family);

} // namespace kgaim::detail
