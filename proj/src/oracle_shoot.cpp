#include "kgaim/errors.hpp"
#include "kgaim/oracle.hpp"
#include "kgaim/roots.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace kgaim {

namespace {

constexpr int kMaxPoints = 4'000'000;

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// w(x) = u(e^x)/sqrt(r) obeys w'' = g w with g = r^2 q(r) + 1/4
struct Problem
{
    RadialEquation eq;
    double kappa;

    double g(double r) const { return r * r * eq.q(r) + 0.25; }
};

struct Grid
{
    double x0 = 0.0;
    double h = 0.0;
    int points = 0;
    int match = 0;
    std::vector<double> g;

    double r(int i) const { return std::exp(x0 + h * i); }
};

// log of the leading small-r behavior of w; sets r_min when not given
struct OriginStart
{
    double r_min;
    double c0 = 0.0, beta = 0.0, alpha = 0.0, p = 0.0;
    enum { power, quartic, cubic } kind;

    double log_w(double r) const
    {
        switch (kind) {
            case quartic: return -alpha / r + (p - 0.5) * std::log(r);
            case cubic: return -2.0 * std::sqrt(alpha / r) + 0.25 * std::log(r);
            case power: break;
        }
        return (c0 - 0.5) * std::log(r) + std::log1p(beta * r);
    }
};

OriginStart origin_start(Problem const& pb, ShootingConfig const& cfg)
{
    auto const& eq = pb.eq;
    OriginStart st{0.0, 0.0, 0.0, 0.0, 0.0, OriginStart::power};
    if (eq.inv_r4 > 0.0) {
        st.kind = OriginStart::quartic;
        st.alpha = std::sqrt(eq.inv_r4);
        st.p = 1.0 + eq.inv_r3 / (2.0 * st.alpha);
        st.r_min = st.alpha / 50.0;
    } else if (eq.inv_r4 < 0.0 || eq.inv_r3 < 0.0) {
        throw DomainError("fall to center: attractive singularity at the origin");
    } else if (eq.inv_r3 > 0.0) {
        st.kind = OriginStart::cubic;
        st.alpha = eq.inv_r3;
        st.r_min = 4.0 * eq.inv_r3 / 2500.0;
    } else {
        double const disc = 0.25 + eq.inv_r2;
        if (disc < 0.0)
            throw OvercriticalError("fall to center: no regular solution at the origin");
        st.c0 = 0.5 + std::sqrt(disc);
        st.beta = eq.inv_r / (2.0 * st.c0);
        st.r_min = 1e-8 / std::max({std::abs(eq.inv_r), pb.kappa, 1.0});
    }
    if (cfg.r_min > 0.0)
        st.r_min = cfg.r_min;
    return st;
}

// outermost r with q(r) < 0, or 0 when the equation has no allowed region
double outer_turning_point(Problem const& pb, double r_min)
{
    auto const& eq = pb.eq;
    double const k2 = pb.kappa * pb.kappa;
    double const r_big =
        8.0 * std::max({std::abs(eq.inv_r) / k2, std::sqrt(std::abs(eq.inv_r2) / k2),
                        std::cbrt(std::abs(eq.inv_r3) / k2),
                        std::sqrt(std::sqrt(std::abs(eq.inv_r4) / k2)), 1.0 / pb.kappa});
    int const samples = 4000;
    double const step = std::log(r_big / r_min) / samples;
    for (int i = samples; i >= 0; --i) {
        double const r = r_min * std::exp(step * i);
        if (eq.q(r) < 0.0) {
            double lo = r, hi = r * std::exp(step);
            for (int it = 0; it < 60; ++it) {
                double const mid = 0.5 * (lo + hi);
                (eq.q(mid) < 0.0 ? lo : hi) = mid;
            }
            return lo;
        }
    }
    return 0.0;
}

struct Setup
{
    Problem pb;
    OriginStart start;
    Grid grid;
    double turning;
};

Setup make_setup(ProblemSpec const& spec, PotentialParams const& params, double E,
                 ShootingConfig const& cfg)
{
    double const M = spec.mass();
    Problem pb{build_radial(spec, params, E), std::sqrt((M - E) * (M + E))};
    OriginStart const start = origin_start(pb, cfg);
    double const turning = outer_turning_point(pb, start.r_min);
    double const r_max =
        cfg.r_max > 0.0 ? cfg.r_max : std::max(turning, 1.0 / pb.kappa) + cfg.tail_lengths / pb.kappa;
    if (!(r_max > start.r_min))
        throw DomainError("shooting window is empty (r_min=" + num(start.r_min) + ")");

    double const g_edge = std::max({pb.g(r_max), pb.g(start.r_min), 1.0});
    double h = std::min(cfg.step, 1.0 / std::sqrt(g_edge));
    double const span = std::log(r_max / start.r_min);
    double const want = std::ceil(span / h);
    if (want + 1 > kMaxPoints)
        throw ConvergenceError("shooting grid too large (r_min=" + num(start.r_min) + ")");

    Grid grid;
    grid.points = static_cast<int>(want) + 1;
    grid.h = span / (grid.points - 1);
    grid.x0 = std::log(start.r_min);
    grid.g.resize(static_cast<std::size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i)
        grid.g[static_cast<std::size_t>(i)] = pb.g(grid.r(i));
    double const match = cfg.match > 0.0 ? cfg.match : (turning > 0.0 ? turning : 1.0 / pb.kappa);
    int m = static_cast<int>(std::lround((std::log(match) - grid.x0) / grid.h));
    grid.match = std::clamp(m, 2, grid.points - 4);
    return {pb, start, std::move(grid), turning};
}

struct Sweep
{
    int nodes = 0;
    double w_a = 0.0; ///< value at the match index
    double w_b = 0.0; ///< value at the match index + 1
};

class NodeCounter
{
  public:
    explicit NodeCounter(double tol)
        : tol_(tol)
    {
    }
    void see(double w)
    {
        double const amp = std::abs(w);
        peak_ = std::max(peak_, amp);
        if (w == 0.0 || amp < tol_ * peak_)
            return;
        int const sign = w > 0.0 ? 1 : -1;
        if (last_ != 0 && sign != last_)
            ++count_;
        last_ = sign;
    }
    void rescale(double f) { peak_ *= f; }
    int count() const { return count_; }

  private:
    double tol_;
    double peak_ = 0.0;
    int last_ = 0;
    int count_ = 0;
};

// Numerov from index `from` towards `to` (either direction), seeded with the
// two first values. Counts nodes and records the values at match, match+1.
Sweep numerov(Grid const& grid, int from, int to, double w0, double w1, double node_tol)
{
    int const dir = to >= from ? 1 : -1;
    double const h12 = grid.h * grid.h / 12.0;
    auto f = [&](int i) { return 1.0 - h12 * grid.g[static_cast<std::size_t>(i)]; };

    Sweep out;
    NodeCounter nodes(node_tol);
    double prev = w0, cur = w1;
    nodes.see(prev);
    nodes.see(cur);
    auto record = [&](int i, double w) {
        if (i == grid.match)
            out.w_a = w;
        else if (i == grid.match + 1)
            out.w_b = w;
    };
    record(from, prev);
    record(from + dir, cur);
    for (int i = from + dir; i != to; i += dir) {
        double const next = ((12.0 - 10.0 * f(i)) * cur - f(i - dir) * prev) / f(i + dir);
        prev = cur;
        cur = next;
        if (std::abs(cur) > 1e150) {
            prev *= 1e-150;
            cur *= 1e-150;
            nodes.rescale(1e-150);
            // keep the recorded pair consistent when only half of it is stored
            if (dir > 0 && i + dir == grid.match + 1)
                out.w_a *= 1e-150;
            if (dir < 0 && i + dir == grid.match)
                out.w_b *= 1e-150;
        }
        nodes.see(cur);
        record(i + dir, cur);
    }
    out.nodes = nodes.count();
    return out;
}

Sweep outward(Setup const& s, int to, double node_tol)
{
    double const l0 = s.start.log_w(s.grid.r(0));
    double const l1 = s.start.log_w(s.grid.r(1));
    return numerov(s.grid, 0, to, 1.0, std::exp(l1 - l0), node_tol);
}

Sweep inward(Setup const& s, int to, double node_tol)
{
    int const last = s.grid.points - 1;
    double const kappa = s.pb.kappa;
    double const beta = -s.pb.eq.inv_r / (2.0 * kappa);
    auto log_w = [&](double r) { return (beta - 0.5) * std::log(r) - kappa * r; };
    double const ratio = std::exp(log_w(s.grid.r(last - 1)) - log_w(s.grid.r(last)));
    return numerov(s.grid, last, to, 1.0, ratio, node_tol);
}

// normalized Casoratian of the two sweeps at the match point
double mismatch(Setup const& s, double node_tol)
{
    Sweep const l = outward(s, s.grid.match + 1, node_tol);
    Sweep const r = inward(s, s.grid.match, node_tol);
    double const nl = std::hypot(l.w_a, l.w_b), nr = std::hypot(r.w_a, r.w_b);
    return (l.w_a * r.w_b - l.w_b * r.w_a) / (nl * nr);
}

void check_bracket(ProblemSpec const& spec, std::pair<double, double> bracket)
{
    double const M = spec.mass();
    if (!(bracket.first < bracket.second) || !(bracket.first > -M) || !(bracket.second < M))
        throw DomainError("shooting bracket must satisfy -M < lo < hi < M");
}

} // namespace

int shooting_node_count(ProblemSpec const& spec, PotentialParams const& params, double E,
                        ShootingConfig const& cfg)
{
    if (!(std::abs(E) < spec.mass()))
        throw NoBoundStateError("not a bound state: |E| >= M");
    Setup const s = make_setup(spec, params, E, cfg);
    return outward(s, s.grid.points - 1, cfg.node_tol).nodes;
}

ShootResult shoot(ProblemSpec const& spec, PotentialParams const& params, int n_nodes,
                  std::pair<double, double> bracket, ShootingConfig const& cfg)
{
    check_bracket(spec, bracket);
    if (n_nodes < 0)
        throw DomainError("node count must be nonnegative");
    double const M = spec.mass();
    auto count = [&](double E) { return shooting_node_count(spec, params, E, cfg); };

    double lo = bracket.first, hi = bracket.second;
    int const n_lo = count(lo), n_hi = count(hi);
    bool increasing;
    if (n_lo <= n_nodes && n_hi > n_nodes)
        increasing = true;
    else if (n_hi <= n_nodes && n_lo > n_nodes)
        increasing = false;
    else
        throw NoRootError("no matching E in bracket");

    // isolate the level on the node count, then match on a fixed grid
    while (hi - lo > 1e-9 * M) {
        double const mid = 0.5 * (lo + hi);
        bool const above = count(mid) > n_nodes;
        (above == increasing ? hi : lo) = mid;
    }
    double const centre = 0.5 * (lo + hi);
    Setup const s = make_setup(spec, params, centre, cfg);
    auto d = [&](double E) {
        Setup local = s;
        local.pb = Problem{build_radial(spec, params, E), std::sqrt((M - E) * (M + E))};
        for (int i = 0; i < local.grid.points; ++i)
            local.grid.g[static_cast<std::size_t>(i)] = local.pb.g(local.grid.r(i));
        return mismatch(local, cfg.node_tol);
    };

    double E = centre;
    bool matched = false;
    for (double widen = 1e-8 * M; widen <= 1e-3 * M; widen *= 10.0) {
        double const a = std::max(lo - widen, -M + 1e-12 * M);
        double const b = std::min(hi + widen, M - 1e-12 * M);
        double const da = d(a), db = d(b);
        if (std::signbit(da) != std::signbit(db)) {
            E = roots::bisect(d, a, b, 1e-14 * M);
            matched = true;
            break;
        }
    }
    if (!matched)
        throw ConvergenceError("shooting: no log-derivative match near the level");

    Setup fin = s;
    fin.pb = Problem{build_radial(spec, params, E), std::sqrt((M - E) * (M + E))};
    for (int i = 0; i < fin.grid.points; ++i)
        fin.grid.g[static_cast<std::size_t>(i)] = fin.pb.g(fin.grid.r(i));
    Sweep const l = outward(fin, fin.grid.match + 1, cfg.node_tol);
    Sweep const r = inward(fin, fin.grid.match + 1, cfg.node_tol);
    int const nodes = l.nodes + r.nodes;
    if (nodes != n_nodes)
        throw ConvergenceError("shooting: matched solution has " + std::to_string(nodes) +
                               " nodes, expected " + std::to_string(n_nodes));
    return {E, nodes, fin.grid.r(0), fin.grid.r(fin.grid.points - 1),
            fin.grid.r(fin.grid.match), fin.grid.points};
}

double shoot_eigenvalue(ProblemSpec const& spec, PotentialParams const& params, int n_nodes,
                        std::pair<double, double> bracket, ShootingConfig const& cfg)
{
    return shoot(spec, params, n_nodes, bracket, cfg).energy;
}

} // namespace kgaim
