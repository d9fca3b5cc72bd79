#include "kgaim/specfun.hpp"

#include "kgaim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kgaim::specfun {

namespace {

bool is_nonpositive_integer(double v)
{
    return v <= 0.0 && v == std::floor(v);
}

// K_0 and K_1 by their ascending series; accurate for 0 < x <= 2.
std::pair<double, double> bessel_k01_series(double x)
{
    constexpr double euler = std::numbers::egamma;
    double const q = 0.25 * x * x;
    double const lx = std::log(0.5 * x);

    double i0 = 0.0, k0_tail = 0.0, i1 = 0.0, k1_tail = 0.0;
    double t0 = 1.0; // q^k / (k!)^2
    double t1 = 1.0; // q^k / (k! (k+1)!)
    double harmonic = 0.0;
    for (int k = 0; k < 60; ++k) {
        if (k > 0) {
            t0 *= q / (double(k) * k);
            t1 *= q / (double(k) * (k + 1));
            harmonic += 1.0 / k;
        }
        i0 += t0;
        k0_tail += harmonic * t0;
        i1 += t1;
        // psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
        k1_tail += (-2.0 * euler + 2.0 * harmonic + 1.0 / (k + 1)) * t1;
        if (t0 < 1e-18 * i0 && t1 < 1e-18 * i1)
            break;
    }
    i1 *= 0.5 * x;
    double k0 = -(lx + euler) * i0 + k0_tail;
    double k1 = 1.0 / x + lx * i1 - 0.25 * x * k1_tail;
    return {k0, k1};
}

// K_0 and K_1 by Steed's continued fraction (Temme's CF2); for x > 2.
std::pair<double, double> bessel_k01_cf(double x)
{
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    double const a1 = 0.25;
    double q = a1, c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= 10000; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < 1e-17)
            break;
    }
    h *= a1;
    double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
    double k1 = k0 * (x + 0.5 - h) / x;
    return {k0, k1};
}

} // namespace

double pochhammer(double a, int k)
{
    if (k < 0)
        throw DomainError("pochhammer: k must be nonnegative");
    double p = 1.0;
    for (int j = 0; j < k; ++j)
        p *= a + j;
    return p;
}

double log_pochhammer(double a, int k)
{
    if (!(a > 0.0))
        throw DomainError("log_pochhammer: a must be positive");
    return std::lgamma(a + k) - std::lgamma(a);
}

double kummer_1f1(double a, double b, double x)
{
    if (is_nonpositive_integer(b))
        throw DomainError("kummer_1f1: b must not be a nonpositive integer");
    if (is_nonpositive_integer(a))
        return KummerPoly(static_cast<int>(-a), b)(x);
    if (x < 0.0)
        return std::exp(x) * kummer_1f1(b - a, b, -x);

    double sum = 1.0, term = 1.0;
    for (int k = 0; k < 100000; ++k) {
        term *= (a + k) / (b + k) * x / (k + 1);
        sum += term;
        if (std::abs(term) <= 1e-16 * std::abs(sum) && k > std::abs(x))
            return sum;
    }
    throw ConvergenceError("kummer_1f1: series did not converge");
}

KummerPoly::KummerPoly(int n, double alpha)
    : n_(n)
    , alpha_(alpha)
{
    if (n < 0)
        throw DomainError("KummerPoly: degree must be nonnegative");
    if (is_nonpositive_integer(alpha))
        throw DomainError("KummerPoly: alpha must not be a nonpositive integer");
    coeffs_.resize(n + 1);
    coeffs_[0] = 1.0;
    for (int k = 1; k <= n; ++k)
        coeffs_[k] = coeffs_[k - 1] * (k - 1 - n) / ((alpha + k - 1) * k);
}

double KummerPoly::operator()(double x) const
{
    double y = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        y = y * x + *it;
    return y;
}

double lemma1_integral(int n, int m, double alpha)
{
    if (!(alpha > 0.0))
        throw DomainError("lemma1_integral: alpha must be positive");
    if (n < 0 || m < 0)
        throw DomainError("lemma1_integral: n and m must be nonnegative");
    double const lg = std::lgamma(alpha);
    if (m == n)
        return (alpha + 2 * n) * std::exp(std::lgamma(n + 1.0) + lg - log_pochhammer(alpha, n));
    if (m == n - 1)
        return -std::exp(2 * lg + std::lgamma(n + 1.0) - std::lgamma(alpha + n - 1));
    if (m == n + 1)
        return -std::exp(2 * lg + std::lgamma(n + 2.0) - std::lgamma(alpha + n));
    return 0.0;
}

double bessel_k_int(int order, double x)
{
    if (!(x > 0.0))
        throw DomainError("bessel_k: argument must be positive");
    int const n = std::abs(order);
    auto [km, k] = x <= 2.0 ? bessel_k01_series(x) : bessel_k01_cf(x);
    if (n == 0)
        return km;
    // upward recurrence K_{j+1} = K_{j-1} + (2j/x) K_j is stable for K
    for (int j = 1; j < n; ++j) {
        double next = km + 2.0 * j / x * k;
        km = k;
        k = next;
    }
    return k;
}

double bessel_k_real(double nu, double x)
{
    if (!(x > 0.0))
        throw DomainError("bessel_k_real: argument must be positive");
    nu = std::abs(nu);
    auto log_integrand = [&](double t) {
        double const nt = nu * t;
        // log cosh(nt) without overflow
        double const lc = nt + std::log1p(std::exp(-2.0 * nt)) - std::numbers::ln2;
        return -x * std::cosh(t) + lc;
    };
    double const t_peak = std::asinh(nu / x);
    double const l_peak = std::max(log_integrand(0.0), log_integrand(t_peak));

    double span = std::max(1.0, 2.0 * t_peak);
    while (log_integrand(span) > l_peak - 45.0)
        span *= 1.5;

    auto f = [&](double t) { return std::exp(log_integrand(t) - l_peak); };
    int intervals = 16;
    double h = span / intervals;
    double sum = 0.5 * f(0.0);
    for (int i = 1; i < intervals; ++i)
        sum += f(i * h);
    double estimate = sum * h;
    for (int refine = 0; refine < 16; ++refine) {
        for (int i = 0; i < intervals; ++i)
            sum += f((i + 0.5) * h);
        intervals *= 2;
        h *= 0.5;
        double next = sum * h;
        bool done = std::abs(next - estimate) <= 1e-15 * next;
        estimate = next;
        if (done && refine > 1)
            break;
    }
    return estimate * std::exp(l_peak);
}

double exp_power_integral(double C, double A, double B)
{
    if (!(B > 0.0) || A < 0.0)
        throw DomainError("exp_power_integral: requires B > 0 and A >= 0");
    if (A == 0.0) {
        if (!(C > -1.0))
            throw DomainError("exp_power_integral: diverges at the origin");
        return std::exp(std::lgamma(C + 1.0) - (C + 1.0) * std::log(B));
    }
    double const order = C + 1.0;
    double const arg = 2.0 * std::sqrt(A * B);
    double const k = order == std::round(order) && std::abs(order) < 1e6
                         ? bessel_k_int(static_cast<int>(std::lround(order)), arg)
                         : bessel_k_real(order, arg);
    return 2.0 * std::pow(A / B, 0.5 * order) * k;
}

double normalization_coulomb(double c, int n, double M, double E)
{
    if (!(std::abs(E) < std::abs(M)))
        throw NoBoundStateError("not a bound state: |E| >= M");
    if (!(c > 0.0))
        throw DomainError("normalization_coulomb: exponent must be positive");
    if (n < 0)
        throw DomainError("normalization_coulomb: n must be nonnegative");
    double const kappa = std::sqrt(M * M - E * E);
    double const log_n2 = (2 * c + 1) * std::log(2 * kappa) + log_pochhammer(2 * c, n) -
                          std::log(2 * (c + n)) - std::lgamma(n + 1.0) - std::lgamma(2 * c);
    return std::exp(0.5 * log_n2);
}

double normalization_bessel(int n, double M, double E, double s2, double v2)
{
    if (!(s2 * s2 > v2 * v2))
        throw DomainError("exponential regularization absent: requires s2^2 > v2^2");
    if (!(std::abs(E) < std::abs(M)))
        throw NoBoundStateError("not a bound state: |E| >= M");
    double const a = std::sqrt(s2 * s2 - v2 * v2);
    double const kappa = std::sqrt(M * M - E * E);
    return 1.0 / std::sqrt(exp_power_integral(2.0 * n, 2.0 * a, 2.0 * kappa));
}

} // namespace kgaim::specfun
