#include "kgaim/errors.hpp"
#include "spectra_detail.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace kgaim {

namespace detail {

double magnitude_at(LaurentPoly const& p, double x)
{
    double sum = 0.0;
    for (auto const& [e, coef] : p.terms())
        sum += std::abs(coef) * std::pow(std::abs(x), e);
    return sum;
}

// continuant of the tridiagonal system; u_{j-1} l_j = -4ab j (j-1-n)
LaurentPoly condition_polynomial_ab(int n, double ab, double c)
{
    if (n < 0)
        throw DomainError("condition polynomial: n must be nonnegative");
    LaurentPoly const minus_g = LaurentPoly::monomial(-1.0, 1);
    LaurentPoly prev = LaurentPoly::constant(1.0);
    LaurentPoly cur = minus_g;
    for (int j = 1; j <= n; ++j) {
        LaurentPoly const d = minus_g + LaurentPoly::constant(j * (j - 1.0) + 2.0 * c * j);
        LaurentPoly next = d * cur + (4.0 * ab * j * (j - 1.0 - n)) * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return n % 2 == 0 ? -cur : cur;
}

} // namespace detail

LaurentPoly condition_polynomial(int n, double a, double b, double c)
{
    return detail::condition_polynomial_ab(n, a * b, c);
}

double condition_value(int n, double ab, double c, double G)
{
    double prev = 1.0;
    double cur = -G;
    for (int j = 1; j <= n; ++j) {
        double const next =
            (j * (j - 1.0) + 2.0 * c * j - G) * cur + 4.0 * ab * j * (j - 1.0 - n) * prev;
        prev = cur;
        cur = next;
    }
    return n % 2 == 0 ? -cur : cur;
}

std::vector<std::complex<double>> polynomial_roots(std::vector<double> const& ascending)
{
    std::vector<double> p = ascending;
    while (!p.empty() && p.back() == 0.0)
        p.pop_back();
    if (p.empty())
        throw DomainError("polynomial_roots: zero polynomial");
    int const deg = static_cast<int>(p.size()) - 1;
    std::vector<std::complex<double>> out;
    if (deg == 0)
        return out;

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i)
        companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i)
        companion(i, deg - 1) = -p[i] / p[deg];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("polynomial_roots: eigenvalue iteration failed");

    auto eval = [&](std::complex<double> z) {
        std::complex<double> y = 0.0, dy = 0.0;
        for (int i = deg; i >= 0; --i) {
            dy = dy * z + y;
            y = y * z + p[i];
        }
        return std::pair{y, dy};
    };
    for (auto z : solver.eigenvalues()) {
        // a few Newton steps against the original coefficients
        for (int it = 0; it < 3; ++it) {
            auto [y, dy] = eval(z);
            if (dy == 0.0)
                break;
            auto const next = z - y / dy;
            if (std::abs(eval(next).first) >= std::abs(y))
                break;
            z = next;
        }
        out.push_back(z);
    }
    std::sort(out.begin(), out.end(), [](auto const& l, auto const& r) {
        return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
    });
    return out;
}

int MonicSystem::positive_real_roots(double imag_tol) const
{
    int count = 0;
    for (auto const& z : roots)
        if (z.real() > 1e-12 * (1.0 + std::abs(z)) && std::abs(z.imag()) <= imag_tol * (1.0 + std::abs(z)))
            ++count;
    return count;
}

double MonicSystem::relation_defect() const
{
    auto coef = [&](int j) {
        return j >= 0 && j <= n ? coefficients[static_cast<std::size_t>(j)] : 0.0;
    };
    double worst = 0.0;
    for (int j = 0; j <= n; ++j) {
        double const d = j * (j - 1.0) + 2.0 * c * j - g;
        double const u = -2.0 * a * (j + 1.0);
        double const l = 2.0 * b * (j - 1.0 - n);
        double const t0 = l * coef(j - 1), t1 = d * coef(j), t2 = u * coef(j + 1);
        double const size = std::abs(t0) + std::abs(t1) + std::abs(t2);
        double const row = t0 + t1 + t2;
        worst = std::max(worst, size > 0.0 ? std::abs(row) / size : std::abs(row));
    }
    return worst;
}

MonicSystem monic_back_substitute(int n, double a, double b, double c, double G)
{
    if (n < 0)
        throw DomainError("monic system: n must be nonnegative");
    if (!(b < 0.0))
        throw DomainError("monic system: zero pivot, requires b < 0");
    if (a > 0.0)
        throw DomainError("monic system: requires a <= 0");
    MonicSystem sys{n, a, b, c, G, std::vector<double>(static_cast<std::size_t>(n) + 1), {}};
    auto& co = sys.coefficients;
    co[static_cast<std::size_t>(n)] = 1.0;
    for (int j = n; j >= 1; --j) {
        double const d = j * (j - 1.0) + 2.0 * c * j - G;
        double const u = -2.0 * a * (j + 1.0);
        double const l = 2.0 * b * (j - 1.0 - n);
        double const next = j + 1 <= n ? co[static_cast<std::size_t>(j) + 1] : 0.0;
        co[static_cast<std::size_t>(j) - 1] = -(d * co[static_cast<std::size_t>(j)] + u * next) / l;
    }
    sys.roots = polynomial_roots(co);
    return sys;
}

MonicSolution monic_solve(int n, double a, double b, double c)
{
    if (n < 1)
        throw DomainError("monic_solve: requires n >= 1");
    if (!(b < 0.0) || a > 0.0)
        throw DomainError("monic_solve: requires b < 0 and a <= 0");

    MonicSolution sol;
    sol.condition = condition_polynomial(n, a, b, c);
    std::vector<double> coeffs(static_cast<std::size_t>(n) + 2, 0.0);
    for (auto const& [e, v] : sol.condition.terms())
        coeffs[static_cast<std::size_t>(e)] = v;

    double const ab = a * b;
    for (auto z : polynomial_roots(coeffs)) {
        if (std::abs(z.imag()) > 1e-8 * (1.0 + std::abs(z)))
            continue;
        double g = z.real();
        for (int it = 0; it < 4; ++it) {
            double const h = 1e-7 * std::max(1.0, std::abs(g));
            double const f = condition_value(n, ab, c, g);
            double const df =
                (condition_value(n, ab, c, g + h) - condition_value(n, ab, c, g - h)) / (2 * h);
            if (df == 0.0 || f == 0.0)
                break;
            double const trial = g - f / df;
            if (std::abs(condition_value(n, ab, c, trial)) >= std::abs(f))
                break;
            g = trial;
        }
        if (!sol.real_g_roots.empty() &&
            std::abs(sol.real_g_roots.back() - g) <= 1e-12 * (1.0 + std::abs(g)))
            continue;
        sol.real_g_roots.push_back(g);
    }
    for (double g : sol.real_g_roots)
        sol.systems.push_back(monic_back_substitute(n, a, b, c, g));
    return sol;
}

} // namespace kgaim
