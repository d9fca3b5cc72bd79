#include "kgaim/errors.hpp"
#include "kgaim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace kgaim {

namespace {

// pointwise |u'' - q u| and term size, u'' from 4th-order differences in ln r
void residual_on(RadialEquation const& eq, std::vector<double> const& x,
                 std::vector<double> const& u, int stride, std::vector<double>& res,
                 std::vector<double>& size)
{
    int const n = static_cast<int>(x.size());
    double const h = (x[1] - x[0]) * stride;
    res.assign(x.size(), std::nan(""));
    size.assign(x.size(), 0.0);
    for (int i = 2 * stride; i + 2 * stride < n; ++i) {
        auto at = [&](int k) { return u[static_cast<std::size_t>(i + k * stride)]; };
        double const ux = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
        double const uxx =
            (-at(2) + 16.0 * at(1) - 30.0 * at(0) + 16.0 * at(-1) - at(-2)) / (12.0 * h * h);
        double const r = std::exp(x[static_cast<std::size_t>(i)]);
        double const upp = (uxx - ux) / (r * r);
        double const v = at(0);
        double const terms[] = {upp, eq.inv_r / r * v, eq.inv_r2 / (r * r) * v,
                                eq.inv_r3 / (r * r * r) * v, eq.inv_r4 / (r * r * r * r) * v,
                                eq.energy_term * v};
        double big = 0.0;
        for (double t : terms)
            big = std::max(big, std::abs(t));
        res[static_cast<std::size_t>(i)] = -upp + eq.q(r) * v;
        size[static_cast<std::size_t>(i)] = big;
    }
}

} // namespace

ResidualReport residual_report(ProblemSpec const& spec, PotentialParams const& params, double E,
                               std::function<double(double)> const& u, ResidualOptions const& opt)
{
    if (opt.points < 21 || !(opt.lo > 0.0) || !(opt.hi > opt.lo))
        throw DomainError("residual: invalid sampling grid");
    double const b = decay_b(spec, E);
    RadialEquation const eq = build_radial(spec, params, E);
    double const x0 = std::log(opt.lo / -b), x1 = std::log(opt.hi / -b);
    std::vector<double> x(static_cast<std::size_t>(opt.points)), v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = x0 + (x1 - x0) * static_cast<double>(i) / (opt.points - 1);
        v[i] = u(std::exp(x[i]));
    }

    std::vector<double> fine, fine_size, coarse, coarse_size;
    residual_on(eq, x, v, 1, fine, fine_size);
    residual_on(eq, x, v, 2, coarse, coarse_size);
    double scale = 0.0;
    for (double s : fine_size)
        scale = std::max(scale, s);
    if (scale == 0.0)
        return {};

    ResidualReport rep;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::isnan(fine[i]))
            continue;
        rep.residual = std::max(rep.residual, std::abs(fine[i]) / scale);
        if (!std::isnan(coarse[i]))
            rep.error_estimate =
                std::max(rep.error_estimate, std::abs(fine[i] - coarse[i]) / (15.0 * scale));
    }
    return rep;
}

double residual(ProblemSpec const& spec, PotentialParams const& params, double E,
                std::function<double(double)> const& u, ResidualOptions const& opt)
{
    auto const rep = residual_report(spec, params, E, u, opt);
    if (rep.error_estimate > opt.tol)
        throw ConvergenceError("grid too coarse: discretization estimate exceeds tolerance");
    return rep.residual;
}

} // namespace kgaim
