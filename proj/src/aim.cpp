#include "kgaim/aim.hpp"

#include "kgaim/errors.hpp"
#include "kgaim/roots.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace kgaim {

AimSession aim_iterate(LaurentPoly const& lambda0, LaurentPoly const& s0, int n_max)
{
    if (n_max < 1)
        throw DomainError("aim_iterate: n_max must be >= 1");
    AimSession session;
    session.lambda.reserve(n_max + 1);
    session.s.reserve(n_max + 1);
    session.lambda.push_back(lambda0);
    session.s.push_back(s0);
    session.delta.push_back(-s0);
    session.scale.emplace_back();

    for (int n = 1; n <= n_max; ++n) {
        LaurentPoly const& lp = session.lambda[n - 1];
        LaurentPoly const& sp = session.s[n - 1];
        LaurentPoly lambda = lp.derivative() + sp + lambda0 * lp;
        LaurentPoly s = sp.derivative() + s0 * lp;
        if (!lambda.all_finite() || !s.all_finite())
            throw AimOverflowError(n, "AIM coefficient overflow at iteration " + std::to_string(n));
        LaurentPoly scale = lambda * sp;
        LaurentPoly delta = scale - lp * s;
        if (!delta.all_finite() || !scale.all_finite())
            throw AimOverflowError(n, "AIM coefficient overflow at iteration " + std::to_string(n));
        session.lambda.push_back(std::move(lambda));
        session.s.push_back(std::move(s));
        session.delta.push_back(std::move(delta));
        session.scale.push_back(std::move(scale));
    }
    return session;
}

bool delta_is_zero(LaurentPoly const& delta, LaurentPoly const& scale, double tol)
{
    if (!(tol > 0.0))
        throw DomainError("delta_is_zero: tolerance must be positive");
    return delta.max_abs_coefficient() <= tol * (scale.max_abs_coefficient() + 1.0);
}

double AimSession::relative_defect(int n) const
{
    return delta.at(n).max_abs_coefficient() / (scale.at(n).max_abs_coefficient() + 1.0);
}

double AimSession::coefficient_defect(int n) const
{
    LaurentPoly const& d = delta.at(n);
    LaurentPoly const& sc = scale.at(n);
    double const fallback = sc.max_abs_coefficient() + 1.0;
    double worst = 0.0;
    for (auto const& [j, dj] : d.terms()) {
        double ref = std::abs(sc.coefficient(j));
        worst = std::max(worst, std::abs(dj) / (ref > 0.0 ? ref : fallback));
    }
    return worst;
}

bool AimSession::terminates(int n, double tol) const
{
    return delta_is_zero(delta.at(n), scale.at(n), tol);
}

double aim_delta_at(AimProblem const& problem, int n, double energy, AimRootOptions const& opt)
{
    double r0 = opt.r0;
    if (r0 <= 0.0) {
        double kappa2 = opt.mass * opt.mass - energy * energy;
        if (!(kappa2 > 0.0))
            throw NoBoundStateError("aim_numeric_root: |E| must be below M");
        r0 = 1.0 / std::sqrt(kappa2);
    }
    auto [lambda0, s0] = problem(energy);
    AimSession session = aim_iterate(lambda0, s0, std::max(n, 1));
    double d = session.delta[n](r0);
    double den = std::abs(session.scale[n](r0));
    den += n == 0 ? std::abs(s0(r0)) : std::abs((session.lambda[n - 1] * session.s[n])(r0));
    return den > 0.0 ? d / den : d;
}

namespace {

std::optional<double> try_root(AimProblem const& problem, int n, double lo, double hi,
                               AimRootOptions const& opt)
{
    auto f = [&](double e) { return aim_delta_at(problem, n, e, opt); };
    try {
        return roots::bisect(f, lo, hi, opt.energy_tol);
    } catch (NoRootError const&) {
        return std::nullopt;
    }
}

} // namespace

double aim_numeric_root(AimProblem const& problem, int n, std::pair<double, double> bracket,
                        AimRootOptions const& opt)
{
    auto [lo, hi] = bracket;
    double const m = std::abs(opt.mass);
    if (!(lo < hi) || lo < -m || hi > m)
        throw DomainError("aim_numeric_root: bracket must satisfy -M <= E_lo < E_hi <= M");
    // endpoints at +-M are pulled just inside the bound-state window
    double const inset = 1e-10 * m;
    lo = std::max(lo, -m + inset);
    hi = std::min(hi, m - inset);

    auto root = try_root(problem, n, lo, hi, opt);
    if (!root)
        throw NoRootError("no root in bracket");

    if (n >= 2) {
        auto r1 = try_root(problem, n - 1, lo, hi, opt);
        auto r2 = try_root(problem, n - 2, lo, hi, opt);
        if (r1 && r2) {
            double d1 = std::abs(*root - *r1);
            double d2 = std::abs(*r1 - *r2);
            if (d1 > d2 && d1 > 1e-8 * m)
                throw ConvergenceError("AIM not converging: root moved by " + std::to_string(d1) +
                                       " at iteration " + std::to_string(n));
        }
    }
    return *root;
}

} // namespace kgaim
