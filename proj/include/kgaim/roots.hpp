#pragma once

#include "kgaim/errors.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace kgaim::roots {

using Bracket = std::pair<double, double>;

/// Bisection on a bracket with f(lo)*f(hi) <= 0. Stops when the bracket is
/// narrower than abs_tol (or cannot shrink further in double precision).
template <class F>
double bisect(F&& f, double lo, double hi, double abs_tol = 1e-12)
{
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw NoRootError("no root in bracket");
    for (int it = 0; it < 400 && hi - lo > abs_tol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        double fm = f(mid);
        if (fm == 0.0)
            return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Uniform scan of [lo, hi] for sign changes. Samples where f is not finite
/// split the admissible set: no bracket ever straddles such a sample.
template <class F>
std::vector<Bracket> scan_sign_changes(F&& f, double lo, double hi, int points)
{
    std::vector<Bracket> out;
    double px = 0.0, pf = std::nan("");
    for (int i = 0; i < points; ++i) {
        double x = lo + (hi - lo) * i / (points - 1);
        double fx = f(x);
        if (std::isfinite(fx) && std::isfinite(pf)) {
            if (fx == 0.0)
                out.emplace_back(x, x);
            else if (pf != 0.0 && std::signbit(fx) != std::signbit(pf))
                out.emplace_back(px, x);
        }
        px = x;
        pf = fx;
    }
    return out;
}

template <class F>
std::vector<double> find_roots(F&& f, double lo, double hi, int points, double abs_tol = 1e-12)
{
    std::vector<double> roots;
    for (auto [a, b] : scan_sign_changes(f, lo, hi, points))
        roots.push_back(a == b ? a : bisect(f, a, b, abs_tol));
    return roots;
}

using Vec2 = std::array<double, 2>;

/// Damped Newton iteration for a 2x2 system with a central-difference
/// Jacobian. Returns nullopt when the iteration leaves the domain (residual
/// not finite), stalls, or the Jacobian is singular.
template <class F>
std::optional<Vec2> newton2(F&& residual, Vec2 x, double tol = 1e-13, int max_iter = 100)
{
    auto norm = [](Vec2 const& v) { return std::hypot(v[0], v[1]); };
    Vec2 r = residual(x);
    if (!std::isfinite(r[0]) || !std::isfinite(r[1]))
        return std::nullopt;
    for (int it = 0; it < max_iter; ++it) {
        if (norm(r) <= tol)
            return x;
        std::array<Vec2, 2> jac{};
        for (int j = 0; j < 2; ++j) {
            double h = 1e-7 * std::max(1.0, std::abs(x[j]));
            Vec2 xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            Vec2 rp = residual(xp), rm = residual(xm);
            if (!std::isfinite(rp[0]) || !std::isfinite(rm[0]) || !std::isfinite(rp[1]) ||
                !std::isfinite(rm[1]))
                return std::nullopt;
            jac[0][j] = (rp[0] - rm[0]) / (2 * h);
            jac[1][j] = (rp[1] - rm[1]) / (2 * h);
        }
        double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if (det == 0.0 || !std::isfinite(det))
            return std::nullopt;
        Vec2 step{(r[0] * jac[1][1] - r[1] * jac[0][1]) / det,
                  (jac[0][0] * r[1] - jac[1][0] * r[0]) / det};
        double damping = 1.0;
        bool accepted = false;
        for (int k = 0; k < 30; ++k, damping *= 0.5) {
            Vec2 trial{x[0] - damping * step[0], x[1] - damping * step[1]};
            Vec2 rt = residual(trial);
            if (std::isfinite(rt[0]) && std::isfinite(rt[1]) &&
                norm(rt) < (1.0 - 1e-4 * damping) * norm(r)) {
                x = trial;
                r = rt;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            return norm(r) <= 1e3 * tol ? std::optional<Vec2>(x) : std::nullopt;
    }
    return norm(r) <= tol ? std::optional<Vec2>(x) : std::nullopt;
}

} // namespace kgaim::roots
