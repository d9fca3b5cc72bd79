#include "kgaim/errors.hpp"
#include "kgaim/specfun.hpp"
#include "spectra_detail.hpp"

#include <algorithm>
#include <cmath>

namespace kgaim {

std::string_view to_string(Family family) noexcept
{
    switch (family) {
        case Family::coulomb_1f1: return "coulomb_1f1";
        case Family::kratzer_1f1: return "kratzer_1f1";
        case Family::nodeless_bessel: return "nodeless_bessel";
        case Family::monic_poly: return "monic_poly";
    }
    return "unknown";
}

double BoundState::operator()(double r) const
{
    if (!(r > 0.0))
        return 0.0;
    double f = 0.0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it)
        f = f * r + *it;
    return norm * std::exp(exponent * std::log(r) + b * r + a / r) * f;
}

int BoundState::node_count() const
{
    switch (family) {
        case Family::coulomb_1f1:
        case Family::kratzer_1f1: return n;
        case Family::nodeless_bessel: return 0;
        case Family::monic_poly: break;
    }
    int count = 0;
    // roots within 1e-10 decay lengths of the origin are the origin
    double const r_tiny = 1e-10 / std::max(std::abs(b), 1e-300);
    for (auto const& z : poly_roots)
        if (z.real() > r_tiny && std::abs(z.imag()) <= 1e-9 * (1.0 + std::abs(z)))
            ++count;
    return count;
}

namespace {

// u = N r^c e^{-kappa r} 1F1(-n; 2c; 2 kappa r)
BoundState laguerre_state(ProblemSpec const& spec, int n, double E, double c, Family family)
{
    double const M = spec.mass();
    BoundState st;
    st.n = n;
    st.energy = E;
    st.exponent = c;
    st.mass = M;
    st.b = decay_b(spec, E);
    st.family = family;
    double const kappa = -st.b;
    specfun::KummerPoly const kp(n, 2.0 * c);
    st.poly = kp.coefficients();
    double scale = 1.0;
    for (double& coef : st.poly) {
        coef *= scale;
        scale *= 2.0 * kappa;
    }
    st.norm = specfun::normalization_coulomb(c, n, M, E);
    return st;
}

void check_n(int n)
{
    if (n < 0)
        throw DomainError("quantum number n must be nonnegative");
}

} // namespace

double coulomb_energy(ProblemSpec const& spec, double s, double v, int n, Branch branch)
{
    check_n(n);
    double const M = spec.mass();
    double const c = coulomb_exponent(spec, s, v);
    double const beta = n + c;
    double const den = beta * beta + v * v;
    double const disc = den - s * s;
    if (disc < 0.0)
        throw NoBoundStateError("no real energy: scalar coupling too strong for this level");
    double const root = beta / den * std::sqrt(disc);
    double const E = M * (-s * v / den + (branch == Branch::plus ? root : -root));
    if (!(std::abs(E) < M))
        throw NoBoundStateError("spurious branch: |E| >= M");
    // (Ms + Ev)/sqrt(M^2 - E^2) = n + c needs a positive left side
    if (!(M * s + E * v > 0.0))
        throw NoBoundStateError("spurious branch: Ms + Ev <= 0");
    return E;
}

BoundState coulomb_wavefunction(ProblemSpec const& spec, double s, double v, int n, double E)
{
    check_n(n);
    return laguerre_state(spec, n, E, coulomb_exponent(spec, s, v), Family::coulomb_1f1);
}

double equal_kratzer_energy(ProblemSpec const& spec, double A, double B, int n)
{
    check_n(n);
    double const M = spec.mass();
    double const km2 = spec.k() - 2.0;
    auto h = [&](double E) {
        double const disc = km2 * km2 + 8.0 * A * (M + E);
        if (disc < 0.0)
            return std::nan("");
        double const kappa = std::sqrt((M - E) * (M + E));
        return 2.0 * B * (M + E) / kappa - (2.0 * n + 1.0) - std::sqrt(disc);
    };
    auto const roots = detail::energy_roots(M, h);
    if (roots.empty())
        throw NoBoundStateError("no bound state at this n");
    return roots.front();
}

double equal_kratzer_nonrel(ProblemSpec const& spec, double A, double B, int n)
{
    check_n(n);
    double const M = spec.mass();
    double const km2 = spec.k() - 2.0;
    double const disc = km2 * km2 + 16.0 * A * M;
    if (disc < 0.0)
        throw OvercriticalError("overcritical inverse-square coupling: no real indicial root");
    double const den = 2.0 * n + 1.0 + std::sqrt(disc);
    return -8.0 * M * B * B / (den * den);
}

BoundState equal_kratzer_wavefunction(ProblemSpec const& spec, double A, double /*B*/, int n,
                                      double E)
{
    check_n(n);
    return laguerre_state(spec, n, E, equal_kratzer_exponent(spec, A, E), Family::kratzer_1f1);
}

} // namespace kgaim
