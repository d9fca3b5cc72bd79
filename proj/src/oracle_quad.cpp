#include "kgaim/errors.hpp"
#include "kgaim/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace kgaim {

namespace {

constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment
{
    double lo, hi, value, error, abs_value;
    bool operator<(Segment const& o) const { return error < o.error; }
};

Segment gk15(std::function<double(double)> const& f, double lo, double hi)
{
    double const center = 0.5 * (lo + hi);
    double const half = 0.5 * (hi - lo);
    double const fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    double abs_sum = std::abs(kronrod);
    for (int j = 0; j < 7; ++j) {
        double const dx = half * kXgk[j];
        double const f1 = f(center - dx), f2 = f(center + dx);
        kronrod += kWgk[j] * (f1 + f2);
        abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1)
            gauss += kWg[j / 2] * (f1 + f2);
    }
    return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * std::abs(half)};
}

double integrate(std::function<double(double)> const& f, std::vector<double> const& breaks,
                 QuadOptions const& opt)
{
    std::priority_queue<Segment> heap;
    double total = 0.0, error = 0.0, abs_total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        Segment s = gk15(f, breaks[i], breaks[i + 1]);
        total += s.value;
        error += s.error;
        abs_total += s.abs_value;
        heap.push(s);
    }
    auto done = [&] {
        double const target = std::max(opt.rel_tol, 50 * 2.2e-16) * abs_total;
        return error <= target || error == 0.0;
    };
    while (!done()) {
        if (static_cast<int>(heap.size()) >= opt.max_subintervals)
            throw ConvergenceError("quad_adaptive: subdivision limit reached");
        Segment const worst = heap.top();
        heap.pop();
        double const mid = 0.5 * (worst.lo + worst.hi);
        Segment const left = gk15(f, worst.lo, mid), right = gk15(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        abs_total += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
    }
    if (!std::isfinite(total))
        throw ConvergenceError("quad_adaptive: integrand not finite");
    // re-sum to shed the drift of the running updates
    double sum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        heap.pop();
    }
    return sum;
}

} // namespace

double quad_adaptive(std::function<double(double)> const& f, double lo, double hi,
                     QuadOptions const& opt)
{
    if (!(opt.rel_tol > 0.0))
        throw DomainError("quad_adaptive: rel_tol must be positive");
    if (std::isnan(lo) || std::isnan(hi) || std::isinf(lo))
        throw DomainError("quad_adaptive: invalid range");
    if (hi == lo)
        return 0.0;
    if (!std::isinf(hi))
        return hi > lo ? integrate(f, {lo, hi}, opt) : -integrate(f, {hi, lo}, opt);
    if (hi < 0.0)
        throw DomainError("quad_adaptive: only +inf is supported as an infinite limit");

    // geometric scan for the peak and for the cutoff past it
    std::vector<double> breaks{lo};
    double peak = 0.0;
    int quiet = 0;
    double prev_x = lo, prev_f = 0.0, last_x = lo, last_f = 0.0;
    for (int j = -80; j <= 320; ++j) {
        double const x = lo + std::exp2(j / 4.0);
        double const fx = std::abs(f(x));
        if (!std::isfinite(fx))
            throw ConvergenceError("quad_adaptive: integrand not finite");
        breaks.push_back(x);
        peak = std::max(peak, fx);
        prev_x = last_x;
        prev_f = last_f;
        last_x = x;
        last_f = fx;
        if (j > -80 && peak > 0.0 && fx <= 1e-16 * peak) {
            if (++quiet >= 4)
                break;
        } else {
            quiet = 0;
        }
        if (j == 320)
            throw ConvergenceError("quad_adaptive: integrand does not decay");
    }
    // drop the sub-resolution breaks near lo
    std::vector<double> trimmed{lo};
    for (double x : breaks)
        if (x > trimmed.back() && x - lo >= 1e-12 * (last_x - lo))
            trimmed.push_back(x);
    double value = integrate(f, trimmed, opt);

    // exponential envelope through the last two samples bounds the tail
    if (last_f > 0.0 && prev_f > last_f) {
        double const rate = std::log(prev_f / last_f) / (last_x - prev_x);
        double const tail = last_f / rate;
        value += std::copysign(tail, f(last_x));
    }
    return value;
}

} // namespace kgaim
