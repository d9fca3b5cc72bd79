#pragma once

#include <vector>

namespace kgaim::specfun {

/// Rising factorial (a)_k = a (a+1) ... (a+k-1); (a)_0 = 1.
double pochhammer(double a, int k);

/// log Gamma(a+k) - log Gamma(a) for a > 0.
double log_pochhammer(double a, int k);

/// Confluent hypergeometric 1F1(a; b; x). Terminates exactly when a is a
/// nonpositive integer; otherwise sums the series to relative 1e-12.
/// Throws DomainError when b is a nonpositive integer.
double kummer_1f1(double a, double b, double x);

/// The degree-n polynomial 1F1(-n; alpha; x).
class KummerPoly
{
  public:
    KummerPoly(int n, double alpha);

    int degree() const noexcept { return n_; }
    double alpha() const noexcept { return alpha_; }
    /// coefficient of x^k is (-n)_k / ((alpha)_k k!)
    std::vector<double> const& coefficients() const noexcept { return coeffs_; }

    double operator()(double x) const;

  private:
    int n_;
    double alpha_;
    std::vector<double> coeffs_;
};

/// Integral of rho^alpha e^{-rho} 1F1(-n;alpha;rho) 1F1(-m;alpha;rho) over
/// (0, inf) in closed form. Requires alpha > 0.
double lemma1_integral(int n, int m, double alpha);

/// Modified Bessel function of the second kind, integer order.
/// K_{-n} = K_n. Throws DomainError for x <= 0.
double bessel_k_int(int order, double x);

/// Modified Bessel function of the second kind for real order, from the
/// trapezoidal rule on K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt.
double bessel_k_real(double nu, double x);

/// int_0^inf r^C exp(-B r - A/r) dr for B > 0, A >= 0, C > -1 when A = 0.
/// For A > 0 this is 2 (A/B)^{(C+1)/2} K_{C+1}(2 sqrt(AB)).
double exp_power_integral(double C, double A, double B);

/// Normalization N_n of u_n(r) = N_n r^c e^{-kappa r} 1F1(-n; 2c; 2 kappa r),
/// kappa = sqrt(M^2 - E^2).
double normalization_coulomb(double c, int n, double M, double E);

/// Normalization C_n of u(r) = C_n r^n exp(-kappa r - sqrt(s2^2 - v2^2)/r).
double normalization_bessel(int n, double M, double E, double s2, double v2);

} // namespace kgaim::specfun
