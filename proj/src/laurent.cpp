#include "kgaim/laurent.hpp"

#include <algorithm>
#include <cmath>

namespace kgaim {

LaurentPoly::LaurentPoly(std::initializer_list<std::pair<int const, double>> terms)
{
    for (auto const& [e, c] : terms)
        set(e, coefficient(e) + c);
}

LaurentPoly LaurentPoly::constant(double value)
{
    return monomial(value, 0);
}

LaurentPoly LaurentPoly::monomial(double coefficient, int exponent)
{
    LaurentPoly p;
    p.set(exponent, coefficient);
    return p;
}

double LaurentPoly::coefficient(int exponent) const
{
    auto it = terms_.find(exponent);
    return it == terms_.end() ? 0.0 : it->second;
}

void LaurentPoly::set(int exponent, double coefficient)
{
    if (coefficient == 0.0)
        terms_.erase(exponent);
    else
        terms_[exponent] = coefficient;
}

int LaurentPoly::min_exponent() const noexcept
{
    return terms_.empty() ? 0 : terms_.begin()->first;
}

int LaurentPoly::max_exponent() const noexcept
{
    return terms_.empty() ? 0 : terms_.rbegin()->first;
}

double LaurentPoly::max_abs_coefficient() const noexcept
{
    double m = 0.0;
    for (auto const& [e, c] : terms_)
        m = std::max(m, std::abs(c));
    return m;
}

bool LaurentPoly::all_finite() const noexcept
{
    return std::all_of(terms_.begin(), terms_.end(),
                       [](auto const& t) { return std::isfinite(t.second); });
}

double LaurentPoly::operator()(double x) const
{
    double sum = 0.0;
    for (auto const& [e, c] : terms_)
        sum += c * std::pow(x, e);
    return sum;
}

LaurentPoly LaurentPoly::derivative() const
{
    LaurentPoly d;
    for (auto const& [e, c] : terms_)
        if (e != 0)
            d.terms_.emplace_hint(d.terms_.end(), e - 1, e * c);
    return d;
}

void LaurentPoly::prune(Terms::iterator it)
{
    if (it->second == 0.0)
        terms_.erase(it);
}

LaurentPoly& LaurentPoly::operator+=(LaurentPoly const& rhs)
{
    for (auto const& [e, c] : rhs.terms_) {
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            prune(it);
        }
    }
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(LaurentPoly const& rhs)
{
    for (auto const& [e, c] : rhs.terms_) {
        auto [it, inserted] = terms_.try_emplace(e, -c);
        if (!inserted) {
            it->second -= c;
            prune(it);
        }
    }
    return *this;
}

LaurentPoly& LaurentPoly::operator*=(double scalar)
{
    if (scalar == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= scalar;
        // underflow to zero is possible for tiny scalars
        if (it->second == 0.0)
            it = terms_.erase(it);
        else
            ++it;
    }
    return *this;
}

LaurentPoly operator*(LaurentPoly const& lhs, LaurentPoly const& rhs)
{
    LaurentPoly out;
    for (auto const& [ea, ca] : lhs.terms_)
        for (auto const& [eb, cb] : rhs.terms_)
            out.terms_[ea + eb] += ca * cb;
    std::erase_if(out.terms_, [](auto const& t) { return t.second == 0.0; });
    return out;
}

LaurentPoly laurent_arith(LaurentPoly const& a, LaurentPoly const& b, ArithOp op)
{
    switch (op) {
        case ArithOp::add:
            return a + b;
        case ArithOp::sub:
            return a - b;
        case ArithOp::mul:
            return a * b;
    }
    return {};
}

LaurentPoly laurent_diff(LaurentPoly const& a)
{
    return a.derivative();
}

} // namespace kgaim
