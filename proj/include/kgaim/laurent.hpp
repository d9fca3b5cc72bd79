#pragma once

#include <initializer_list>
#include <map>
#include <utility>

namespace kgaim {

/// Sparse univariate Laurent polynomial sum_e c_e x^e with integer (possibly
/// negative) exponents and real coefficients. Exactly-zero coefficients are
/// never stored.
class LaurentPoly
{
  public:
    using Terms = std::map<int, double>;

    LaurentPoly() = default;
    LaurentPoly(std::initializer_list<std::pair<int const, double>> terms);

    static LaurentPoly constant(double value);
    static LaurentPoly monomial(double coefficient, int exponent);

    double coefficient(int exponent) const;
    void set(int exponent, double coefficient);

    Terms const& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    /// Smallest / largest stored exponent; 0 for the zero polynomial.
    int min_exponent() const noexcept;
    int max_exponent() const noexcept;

    double max_abs_coefficient() const noexcept;
    bool all_finite() const noexcept;

    double operator()(double x) const;

    LaurentPoly derivative() const;

    LaurentPoly& operator+=(LaurentPoly const& rhs);
    LaurentPoly& operator-=(LaurentPoly const& rhs);
    LaurentPoly& operator*=(double scalar);

    friend LaurentPoly operator+(LaurentPoly lhs, LaurentPoly const& rhs) { return lhs += rhs; }
    friend LaurentPoly operator-(LaurentPoly lhs, LaurentPoly const& rhs) { return lhs -= rhs; }
    friend LaurentPoly operator*(LaurentPoly lhs, double s) { return lhs *= s; }
    friend LaurentPoly operator*(double s, LaurentPoly rhs) { return rhs *= s; }
    friend LaurentPoly operator-(LaurentPoly p) { return p *= -1.0; }
    friend LaurentPoly operator*(LaurentPoly const& lhs, LaurentPoly const& rhs);

    friend bool operator==(LaurentPoly const&, LaurentPoly const&) = default;

  private:
    void prune(Terms::iterator it);

    Terms terms_;
};

enum class ArithOp { add, sub, mul };

LaurentPoly laurent_arith(LaurentPoly const& a, LaurentPoly const& b, ArithOp op);
LaurentPoly laurent_diff(LaurentPoly const& a);

} // namespace kgaim
