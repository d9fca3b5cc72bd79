#include "kgaim/errors.hpp"
#include "kgaim/specfun.hpp"
#include "spectra_detail.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace kgaim {

namespace {

// quantities shared by every unequal-Kratzer equation at energy E
struct UnequalTerms
{
    double M, E, P, kappa, a_abs, w, mu0;

    UnequalTerms(ProblemSpec const& spec, PotentialParams const& p, double energy)
        : M(spec.mass())
        , E(energy)
        , P(spec.mass() * p.s1 + energy * p.v1)
        , kappa(std::sqrt((spec.mass() - energy) * (spec.mass() + energy)))
        , a_abs(-decay_a(p))
        , w(p.v1 * p.v2 - p.s1 * p.s2)
        , mu0(2.0 * (spec.mass() * p.s2 + energy * p.v2) + p.s1 * p.s1 - p.v1 * p.v1 +
              spec.centrifugal())
    {
    }

    double g_of(double c, double ab) const { return mu0 + 2.0 * ab - c * c + c; }
};

void check_unequal(PotentialParams const& p, int n)
{
    if (n < 0)
        throw DomainError("quantum number n must be nonnegative");
    if (p.s2 * p.s2 < p.v2 * p.v2)
        throw DomainError("unequal Kratzer case requires s2^2 >= v2^2");
}

double rel(double value, double size)
{
    return value / std::max(1.0, size);
}

std::vector<UnequalCandidate> candidates_at(ProblemSpec const& spec, PotentialParams const& params,
                                            int n, std::vector<double> const& energies)
{
    std::vector<UnequalCandidate> out;
    for (double E : energies) {
        UnequalTerms const t(spec, params, E);
        double const c = t.P / t.kappa - n;
        auto cand = unequal_residuals(spec, params, n, E, c);
        cand.equation_residual = n == 0 ? unequal_ground_equation(spec, params, E)
                                        : unequal_family_equation(spec, params, n, E);
        out.push_back(cand);
    }
    return out;
}

// preference: consistent, then G > 0, then the highest energy
UnequalCandidate const* pick(std::vector<UnequalCandidate> const& cands)
{
    auto positive = [](UnequalCandidate const& c) {
        return c.g > 1e-9 * (1.0 + c.exponent * c.exponent);
    };
    UnequalCandidate const* best = nullptr;
    for (auto const& cand : cands) {
        if (!cand.consistent)
            continue;
        if (!best || (positive(cand) && !positive(*best)) ||
            (positive(cand) == positive(*best) && cand.energy > best->energy))
            best = &cand;
    }
    return best;
}

std::string worst_defect(std::vector<UnequalCandidate> const& cands)
{
    double worst = 0.0;
    for (auto const& c : cands)
        worst = std::max({worst, std::abs(c.quantization_defect), std::abs(c.condition_defect),
                          std::abs(c.exponent_defect)});
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", worst);
    return buf;
}

} // namespace

namespace detail {

BoundState make_unequal_state(ProblemSpec const& spec, PotentialParams const& params, int n,
                              double E, double c, double G, Family family)
{
    BoundState st;
    st.n = n;
    st.energy = E;
    st.exponent = c;
    st.mass = spec.mass();
    st.a = decay_a(params);
    st.b = decay_b(spec, E);
    st.family = family;
    st.g = G;
    if (family == Family::monic_poly && n > 0) {
        auto sys = monic_back_substitute(n, st.a, st.b, c, G);
        st.poly = std::move(sys.coefficients);
        st.poly_roots = std::move(sys.roots);
    } else {
        st.poly = {1.0};
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < st.poly.size(); ++i)
        for (std::size_t j = 0; j < st.poly.size(); ++j)
            sum += st.poly[i] * st.poly[j] *
                   specfun::exp_power_integral(2.0 * c + double(i + j), -2.0 * st.a, -2.0 * st.b);
    if (!(sum > 0.0))
        throw NoBoundStateError("state is not normalizable");
    st.norm = 1.0 / std::sqrt(sum);
    return st;
}

} // namespace detail

UnequalCandidate unequal_residuals(ProblemSpec const& spec, PotentialParams const& params, int n,
                                   double E, double c)
{
    check_unequal(params, n);
    UnequalTerms const t(spec, params, E);
    UnequalCandidate cand;
    cand.n = n;
    cand.energy = E;
    cand.exponent = c;
    double const ab = t.a_abs * t.kappa;
    cand.g = t.g_of(c, ab);
    cand.quantization_defect = rel(t.P / t.kappa - (c + n), std::abs(c) + n);
    auto const poly = detail::condition_polynomial_ab(n, ab, c);
    cand.condition_defect = rel(poly(cand.g), detail::magnitude_at(poly, cand.g));
    cand.exponent_defect = rel(t.w + t.a_abs - c * t.a_abs, std::abs(t.w) + t.a_abs * (1.0 + std::abs(c)));
    cand.consistent = c > 0.0 && std::abs(E) < t.M &&
                      std::abs(cand.quantization_defect) <= kConsistencyTol &&
                      std::abs(cand.condition_defect) <= kConsistencyTol &&
                      std::abs(cand.exponent_defect) <= kConsistencyTol;
    return cand;
}

double unequal_ground_equation(ProblemSpec const& spec, PotentialParams const& params, double E)
{
    check_unequal(params, 0);
    UnequalTerms const t(spec, params, E);
    double const arg = spec.half_k_shift_sq() + 2.0 * t.P * t.a_abs - 2.0 * t.w * t.kappa +
                       2.0 * (t.M * params.s2 + E * params.v2) + params.s1 * params.s1 -
                       params.v1 * params.v1;
    if (arg < 0.0)
        return std::nan("");
    return t.P / t.kappa - 0.5 - std::sqrt(arg);
}

std::vector<UnequalCandidate> unequal_ground_candidates(ProblemSpec const& spec,
                                                        PotentialParams const& params)
{
    check_unequal(params, 0);
    auto const roots = detail::energy_roots(
        spec.mass(), [&](double E) { return unequal_ground_equation(spec, params, E); });
    return candidates_at(spec, params, 0, roots);
}

BoundState unequal_ground_solve(ProblemSpec const& spec, PotentialParams const& params)
{
    auto const cands = unequal_ground_candidates(spec, params);
    if (cands.empty())
        throw NoBoundStateError("no root of the ground-state equation in (-M, M)");
    if (std::none_of(cands.begin(), cands.end(), [](auto const& c) { return c.exponent > 0.0; }))
        throw NoBoundStateError("irregular solution: c <= 0");
    auto const* best = pick(cands);
    if (!best)
        throw NoBoundStateError("no root satisfies the 1/r^3 consistency condition (worst defect " +
                                worst_defect(cands) + ")");
    return detail::make_unequal_state(spec, params, 0, best->energy, best->exponent, best->g,
                                      Family::nodeless_bessel);
}

double unequal_family_equation(ProblemSpec const& spec, PotentialParams const& params, int n,
                               double E)
{
    check_unequal(params, n);
    UnequalTerms const t(spec, params, E);
    double const c = t.P / t.kappa - n;
    double const ab = (t.P * t.a_abs - t.w * t.kappa) / (n + 1.0);
    return condition_value(n, ab, c, t.g_of(c, ab));
}

std::vector<UnequalCandidate> unequal_family_candidates(ProblemSpec const& spec,
                                                        PotentialParams const& params, int n)
{
    check_unequal(params, n);
    auto const roots = detail::energy_roots(
        spec.mass(), [&](double E) { return unequal_family_equation(spec, params, n, E); });
    return candidates_at(spec, params, n, roots);
}

BoundState unequal_family_solve(ProblemSpec const& spec, PotentialParams const& params, int n)
{
    if (n == 0)
        return unequal_ground_solve(spec, params);
    auto const cands = unequal_family_candidates(spec, params, n);
    if (cands.empty())
        throw NoBoundStateError("no bound state at this n");
    auto const* best = pick(cands);
    if (!best)
        throw NoBoundStateError("no root satisfies the 1/r^3 consistency condition (worst defect " +
                                worst_defect(cands) + ")");
    return detail::make_unequal_state(spec, params, n, best->energy, best->exponent, best->g,
                                      Family::monic_poly);
}

BoundState g1_excited_solve(ProblemSpec const& spec, PotentialParams const& params)
{
    return unequal_family_solve(spec, params, 1);
}

BoundState g2_excited_solve(ProblemSpec const& spec, PotentialParams const& params)
{
    return unequal_family_solve(spec, params, 2);
}

namespace {

std::vector<roots::Vec2> multistart(auto&& residual, std::vector<double> const& t_grid, double M)
{
    std::vector<roots::Vec2> found;
    for (double t : t_grid)
        for (double e : {-0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9}) {
            auto x = roots::newton2(residual, roots::Vec2{t, e * M});
            if (!x)
                continue;
            bool dup = std::any_of(found.begin(), found.end(), [&](auto const& y) {
                return std::abs(y[0] - (*x)[0]) <= 1e-8 * (1.0 + std::abs(y[0])) &&
                       std::abs(y[1] - (*x)[1]) <= 1e-8 * M;
            });
            if (!dup)
                found.push_back(*x);
        }
    std::sort(found.begin(), found.end(), [](auto const& l, auto const& r) { return l[1] < r[1]; });
    return found;
}

std::vector<double> coupling_grid()
{
    return {-3.0, -1.5, -0.75, -0.25, 0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0};
}

} // namespace

std::vector<ConstrainedState> unequal_constraint_solutions(ProblemSpec const& spec,
                                                           PotentialParams const& partial, int n)
{
    if (n < 1)
        throw DomainError("nodeless constraint solve requires n >= 1");
    if (!(partial.s2 * partial.s2 > partial.v2 * partial.v2))
        throw DomainError("exponential regularization absent: requires s2^2 > v2^2");
    double const M = spec.mass();
    double const a_abs = -decay_a(partial);

    // the 1/r^3 condition v1 v2 - s1 s2 = a'(n-1) fixes one coupling linearly
    auto complete = [&](double t) {
        PotentialParams p = partial;
        if (partial.v2 != 0.0) {
            p.s1 = t;
            p.v1 = (t * p.s2 + a_abs * (n - 1.0)) / p.v2;
        } else {
            p.s1 = -a_abs * (n - 1.0) / p.s2;
            p.v1 = t;
        }
        return p;
    };
    auto residual = [&](roots::Vec2 x) -> roots::Vec2 {
        double const E = x[1];
        if (!(std::abs(E) < M))
            return {std::nan(""), std::nan("")};
        UnequalTerms const t(spec, complete(x[0]), E);
        return {t.P / t.kappa - n, t.g_of(n, t.a_abs * t.kappa)};
    };

    std::vector<ConstrainedState> out;
    for (auto const& x : multistart(residual, coupling_grid(), M)) {
        PotentialParams const p = complete(x[0]);
        auto const cand = unequal_residuals(spec, p, 0, x[1], n);
        if (!cand.consistent || !(spec.mass() * p.s1 + x[1] * p.v1 > 0.0))
            continue;
        // S(r) >= V(r) on all of r > 0
        if (p.v1 < p.s1 || p.s2 < p.v2)
            continue;
        BoundState st = detail::make_unequal_state(spec, p, n, x[1], n, cand.g,
                                                   Family::nodeless_bessel);
        st.norm = specfun::normalization_bessel(n, M, x[1], p.s2, p.v2);
        out.push_back({p, std::move(st)});
    }
    return out;
}

ConstrainedState unequal_constraint_solve(ProblemSpec const& spec, PotentialParams const& partial,
                                          int n)
{
    auto sols = unequal_constraint_solutions(spec, partial, n);
    if (sols.empty())
        throw NoBoundStateError("no bound state in the search region");
    return sols.front();
}

std::vector<ConstrainedState> monic_constraint_solutions(ProblemSpec const& spec,
                                                         PotentialParams const& partial, int n,
                                                         Coupling free)
{
    check_unequal(partial, n);
    if (!(partial.s2 * partial.s2 > partial.v2 * partial.v2))
        throw DomainError("exponential regularization absent: requires s2^2 > v2^2");
    double const M = spec.mass();
    auto complete = [&](double t) {
        PotentialParams p = partial;
        (free == Coupling::s1 ? p.s1 : p.v1) = t;
        return p;
    };
    auto residual = [&](roots::Vec2 x) -> roots::Vec2 {
        double const E = x[1];
        if (!(std::abs(E) < M))
            return {std::nan(""), std::nan("")};
        PotentialParams const p = complete(x[0]);
        double const c = unequal_exponent(p);
        UnequalTerms const t(spec, p, E);
        double const ab = t.a_abs * t.kappa;
        double const G = t.g_of(c, ab);
        auto const poly = detail::condition_polynomial_ab(n, ab, c);
        return {t.P / t.kappa - (c + n), poly(G) / std::max(1.0, detail::magnitude_at(poly, G))};
    };

    std::vector<ConstrainedState> out;
    for (auto const& x : multistart(residual, coupling_grid(), M)) {
        PotentialParams const p = complete(x[0]);
        double const c = unequal_exponent(p);
        auto const cand = unequal_residuals(spec, p, n, x[1], c);
        if (!cand.consistent)
            continue;
        out.push_back({p, detail::make_unequal_state(spec, p, n, x[1], c, cand.g,
                                                     n == 0 ? Family::nodeless_bessel
                                                            : Family::monic_poly)});
    }
    return out;
}

} // namespace kgaim
