#include "doctest.h"

#include "kgaim/aim.hpp"
#include "kgaim/errors.hpp"
#include "kgaim/oracle.hpp"
#include "kgaim/spectra.hpp"

#include <cmath>
#include <random>

using namespace kgaim;

namespace {

double norm_by_quadrature(BoundState const& st)
{
    return quad_adaptive([&](double r) { double const u = st(r); return u * u; }, 0.0, kInf);
}

int sign_changes(BoundState const& st)
{
    int count = 0;
    double prev = 0.0;
    double const scale = 1.0 / -st.b;
    for (int i = 0; i <= 20000; ++i) {
        double const r = scale * std::pow(10.0, -4.0 + 7.0 * i / 20000.0);
        double const u = st(r);
        if (u != 0.0 && prev != 0.0 && (u > 0) != (prev > 0))
            ++count;
        if (u != 0.0)
            prev = u;
    }
    return count;
}

} // namespace

TEST_CASE("coulomb energies")
{
    ProblemSpec const spec(1.0, 3, 0);
    CHECK(coulomb_energy(spec, 0.5, 0.5, 0) == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(coulomb_energy(spec, 0.5, 0.0, 0) == doctest::Approx(0.910180).epsilon(1e-6));
    CHECK(coulomb_energy(spec, 0.0, 0.25, 0) == doctest::Approx(0.965925826289).epsilon(1e-11));
    CHECK(coulomb_energy(spec, 0.5, 0.0, 0, Branch::minus) ==
          doctest::Approx(-coulomb_energy(spec, 0.5, 0.0, 0)));
    // s = v leaves only the upper branch: the lower one sits at E = -M
    CHECK_THROWS_AS(coulomb_energy(spec, 0.5, 0.5, 0, Branch::minus), NoBoundStateError);
    // a pure vector coupling has no lower-branch state either
    CHECK_THROWS_AS(coulomb_energy(spec, 0.0, 0.25, 0, Branch::minus), NoBoundStateError);
    CHECK_THROWS_AS(coulomb_energy(ProblemSpec(1.0, 2, 0), 0.0, 0.5, 0), OvercriticalError);
    CHECK_THROWS_AS(coulomb_energy(spec, 0.5, 0.5, -1), DomainError);
}

TEST_CASE("coulomb energies satisfy the quantization condition")
{
    for (int k : {1, 3, 5})
        for (auto [s, v] : {std::pair{0.5, 0.0}, {0.5, 0.5}, {0.6, 0.3}, {1.2, 0.1}})
            for (int n = 0; n <= 3; ++n)
                for (auto br : {Branch::plus, Branch::minus}) {
                    ProblemSpec const spec(1.7, k, 0);
                    double E;
                    try {
                        E = coulomb_energy(spec, s, v, n, br);
                    } catch (NoBoundStateError const&) {
                        continue;
                    }
                    double const M = spec.mass();
                    double const lhs = (M * s + E * v) / std::sqrt(M * M - E * E);
                    CHECK(lhs == doctest::Approx(n + coulomb_exponent(spec, s, v)).epsilon(1e-12));
                    CHECK(std::abs(E) < M);
                }
}

TEST_CASE("energies depend on d and l through k")
{
    for (int d = 1; d <= 4; ++d)
        for (int l = 0; l <= 2; ++l) {
            ProblemSpec const a(1.0, d, l + 1), b(1.0, d + 2, l);
            CHECK(coulomb_energy(a, 0.6, 0.3, 1) == coulomb_energy(b, 0.6, 0.3, 1));
            CHECK(equal_kratzer_energy(a, 0.1, 0.5, 1) == equal_kratzer_energy(b, 0.1, 0.5, 1));
            CHECK(equal_kratzer_nonrel(a, 0.1, 0.5, 1) == equal_kratzer_nonrel(b, 0.1, 0.5, 1));
        }
}

TEST_CASE("coulomb wavefunctions")
{
    ProblemSpec const spec(1.0, 3, 0);
    double const E0 = coulomb_energy(spec, 0.5, 0.5, 0);
    auto const s0 = coulomb_wavefunction(spec, 0.5, 0.5, 0, E0);
    CHECK(s0.family == Family::coulomb_1f1);
    CHECK(sign_changes(s0) == 0);
    CHECK(s0(1.0) > 0.0);
    CHECK(norm_by_quadrature(s0) == doctest::Approx(1.0).epsilon(1e-10));

    double const E1 = coulomb_energy(spec, 0.5, 0.0, 1);
    auto const s1 = coulomb_wavefunction(spec, 0.5, 0.0, 1, E1);
    double const c = coulomb_exponent(spec, 0.5, 0.0);
    double const kappa = std::sqrt(1.0 - E1 * E1);
    CHECK(sign_changes(s1) == 1);
    // 1 - x/(2c) vanishes at x = 2c, x = 2 kappa r
    CHECK(std::abs(s1(c / kappa)) < 1e-12);
    CHECK(s1.node_count() == 1);
    CHECK(norm_by_quadrature(s1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s0(0.0) == 0.0);
}

TEST_CASE("equal kratzer")
{
    ProblemSpec const spec(1.0, 3, 0);
    CHECK(equal_kratzer_energy(spec, 0.0, 0.5, 0) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(equal_kratzer_energy(spec, 0.1, 0.5, 0) ==
          doctest::Approx(0.732451214398748).epsilon(1e-12));
    CHECK_THROWS_AS(equal_kratzer_energy(spec, 0.1, 0.0, 0), NoBoundStateError);
    CHECK_THROWS_AS(equal_kratzer_energy(spec, 0.1, -0.3, 0), NoBoundStateError);
    for (int n = 0; n <= 3; ++n) {
        CHECK(equal_kratzer_energy(spec, 0.0, 0.5, n) ==
              doctest::Approx(coulomb_energy(spec, 0.5, 0.5, n)).epsilon(1e-12));
        CHECK(equal_kratzer_nonrel(spec, 0.0, 0.3, n) ==
              doctest::Approx(-2.0 * 0.09 / ((n + 1.0) * (n + 1.0))));
    }
    CHECK(equal_kratzer_nonrel(spec, 0.1, 0.0, 2) == 0.0);

    for (int n = 0; n <= 2; ++n) {
        double const E = equal_kratzer_energy(spec, 0.1, 0.5, n);
        auto const st = equal_kratzer_wavefunction(spec, 0.1, 0.5, n, E);
        CHECK(st.family == Family::kratzer_1f1);
        CHECK(sign_changes(st) == n);
        CHECK(norm_by_quadrature(st) == doctest::Approx(1.0).epsilon(1e-10));
    }
    double const E = coulomb_energy(spec, 0.5, 0.5, 1);
    auto const a = equal_kratzer_wavefunction(spec, 0.0, 0.5, 1, E);
    auto const b = coulomb_wavefunction(spec, 0.5, 0.5, 1, E);
    for (double r : {0.1, 1.0, 4.0})
        CHECK(a(r) == doctest::Approx(b(r)).epsilon(1e-13));
}

TEST_CASE("monic condition polynomials")
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ua(-1.0, 0.0), ub(-1.5, -0.1), uc(0.2, 3.0);
    for (int t = 0; t < 10; ++t) {
        double const a = ua(rng), b = ub(rng), c = uc(rng), ab = a * b;
        auto const g1 = condition_polynomial(1, a, b, c);
        CHECK(g1 == LaurentPoly{{2, 1.0}, {1, -2.0 * c}, {0, -4.0 * ab}});
        auto const g2 = condition_polynomial(2, a, b, c);
        CHECK(g2.coefficient(3) == 1.0);
        CHECK(g2.coefficient(2) == doctest::Approx(-2.0 * (3.0 * c + 1.0)));
        CHECK(g2.coefficient(1) == doctest::Approx(4.0 * (2.0 * c * c + c - 4.0 * ab)));
        CHECK(g2.coefficient(0) == doctest::Approx(16.0 * ab * (2.0 * c + 1.0)));
        for (double G : {-1.3, 0.2, 2.7})
            CHECK(condition_value(2, ab, c, G) == doctest::Approx(g2(G)));
    }
    CHECK(condition_polynomial(0, -0.3, -0.5, 1.0) == LaurentPoly{{1, 1.0}});
}

TEST_CASE("monic solutions satisfy their linear system")
{
    for (int n = 1; n <= 4; ++n) {
        auto const sol = monic_solve(n, -0.4, -0.7, 1.3);
        CHECK(sol.condition.max_exponent() == n + 1);
        CHECK(sol.condition.coefficient(n + 1) == 1.0);
        for (auto const& sys : sol.systems) {
            CHECK(sys.coefficients.back() == 1.0);
            CHECK(sys.relation_defect() < 1e-9);
            CHECK(sys.roots.size() == static_cast<std::size_t>(n));
            CHECK(std::abs(sol.condition(sys.g)) <
                  1e-9 * std::max(1.0, std::pow(std::abs(sys.g), n + 1)));
        }
    }
    // with a = 0 the first-order condition factors as G (G - 2c)
    auto const deg = monic_solve(1, 0.0, -0.5, 0.8);
    REQUIRE(deg.real_g_roots.size() == 2);
    CHECK(deg.real_g_roots[0] == doctest::Approx(0.0));
    CHECK(deg.real_g_roots[1] == doctest::Approx(1.6));
    CHECK_THROWS_AS(monic_solve(0, -0.4, -0.7, 1.3), DomainError);
    CHECK_THROWS_AS(monic_solve(2, -0.4, 0.0, 1.3), DomainError);
    CHECK_THROWS_AS(monic_solve(2, 0.4, -0.7, 1.3), DomainError);
}

TEST_CASE("first excited monic state has its node at 2a/G")
{
    auto const sol = monic_solve(1, -0.4, -0.7, 1.3);
    for (auto const& sys : sol.systems) {
        REQUIRE(sys.roots.size() == 1);
        CHECK(sys.roots[0].real() == doctest::Approx(2.0 * sys.a / sys.g));
    }
}

TEST_CASE("polynomial roots")
{
    auto const r = polynomial_roots({6.0, -5.0, 1.0});
    REQUIRE(r.size() == 2);
    CHECK(r[0].real() == doctest::Approx(2.0));
    CHECK(r[1].real() == doctest::Approx(3.0));
    auto const z = polynomial_roots({1.0, 0.0, 1.0});
    REQUIRE(z.size() == 2);
    CHECK(std::abs(z[0].imag()) == doctest::Approx(1.0));
    CHECK(polynomial_roots({4.0}).empty());
    CHECK_THROWS_AS(polynomial_roots({0.0, 0.0}), DomainError);
}

TEST_CASE("monic condition matches AIM termination")
{
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ua(-1.0, -0.05), ub(-1.5, -0.1), uc(0.2, 3.0);
    for (int t = 0; t < 4; ++t) {
        double const a = ua(rng), b = ub(rng), c = uc(rng);
        for (int n = 1; n <= 3; ++n) {
            auto const sol = monic_solve(n, a, b, c);
            for (double G : sol.real_g_roots) {
                LaurentPoly const l0{{-2, 2.0 * a}, {-1, -2.0 * c}, {0, -2.0 * b}};
                LaurentPoly const s0{{-1, 2.0 * n * b}, {-2, G}};
                CHECK(aim_iterate(l0, s0, n + 1).terminates(n, 1e-9));
            }
        }
    }
}

TEST_CASE("unequal kratzer reductions")
{
    ProblemSpec const spec(1.0, 3, 0);
    // s2 = v2 = 0 is the Coulomb problem
    auto const st = unequal_ground_solve(spec, {0.5, 0.3, 0.0, 0.0});
    CHECK(st.energy == doctest::Approx(coulomb_energy(spec, 0.5, 0.3, 0)).epsilon(1e-12));
    CHECK(st.exponent == doctest::Approx(coulomb_exponent(spec, 0.5, 0.3)).epsilon(1e-10));
    CHECK(norm_by_quadrature(st) == doctest::Approx(1.0).epsilon(1e-10));

    // equal potentials behave like the equal case
    auto const eq = unequal_ground_solve(spec, {0.5, 0.5, 0.1, 0.1});
    CHECK(eq.energy == doctest::Approx(equal_kratzer_energy(spec, 0.1, 0.5, 0)).epsilon(1e-12));

    // pure scalar: the equation reads P/kappa = 1/2 + sqrt(1/4 + 2 s1 s2 kappa + 2 M s2 + s1^2 + 2 s1 a')
    PotentialParams const ps{0.8, 0.0, 0.3, 0.0};
    for (double E : {-0.5, 0.2, 0.7}) {
        double const kappa = std::sqrt(1.0 - E * E);
        double const expect = 0.8 / kappa - 0.5 -
                              std::sqrt(0.25 + 2 * 0.8 * 0.3 * kappa + 0.6 + 0.64 + 2 * 0.8 * 0.3);
        CHECK(unequal_ground_equation(spec, ps, E) == doctest::Approx(expect));
    }
}

TEST_CASE("unequal kratzer with generic couplings is inconsistent")
{
    ProblemSpec const spec(1.0, 3, 0);
    PotentialParams const p{1.0, 0.5, 0.5, 0.3};
    auto const cands = unequal_ground_candidates(spec, p);
    CHECK(cands.size() == 2);
    for (auto const& c : cands) {
        CHECK(std::abs(c.equation_residual) < 1e-10);
        CHECK(std::abs(c.quantization_defect) < 1e-12);
        CHECK_FALSE(c.consistent);
    }
    CHECK_THROWS_AS(unequal_ground_solve(spec, p), NoBoundStateError);
    CHECK_THROWS_AS(unequal_ground_solve(spec, {1.0, 0.5, 0.3, 0.5}), DomainError);
}

TEST_CASE("nodeless constrained states")
{
    ProblemSpec const spec(1.0, 3, 0);
    auto const sol = unequal_constraint_solve(spec, {0.0, 0.0, 0.5, 0.3}, 1);
    CHECK(sol.params.s1 == doctest::Approx(1.00566205333528).epsilon(1e-10));
    CHECK(sol.params.v1 == doctest::Approx(5.0 / 3.0 * sol.params.s1).epsilon(1e-12));
    CHECK(sol.state.energy == doctest::Approx(-0.00338151608186979).epsilon(1e-9));
    CHECK(sol.state.family == Family::nodeless_bessel);
    CHECK(sol.state.exponent == 1.0);

    for (int n = 1; n <= 3; ++n)
        for (auto const& cs : unequal_constraint_solutions(spec, {0.0, 0.0, 0.5, 0.3}, n)) {
            auto const cand = unequal_residuals(spec, cs.params, 0, cs.state.energy, n);
            CHECK(std::abs(cand.quantization_defect) <= 1e-10);
            CHECK(std::abs(cand.condition_defect) <= 1e-10);
            CHECK(std::abs(cand.exponent_defect) <= 1e-10);
            CHECK(sign_changes(cs.state) == 0);
            CHECK(cs.state(1.0) > 0.0);
            CHECK(norm_by_quadrature(cs.state) == doctest::Approx(1.0).epsilon(1e-10));
            if (n == 1) {
                CHECK(cs.params.v1 * cs.params.v2 == doctest::Approx(cs.params.s1 * cs.params.s2));
                CHECK(cs.params.s2 > cs.params.v2);
                CHECK(cs.params.v1 > cs.params.s1);
            }
        }

    // v2 = 0 fixes s1 instead
    auto const pv = unequal_constraint_solutions(spec, {0.0, 0.0, 0.5, 0.0}, 2);
    for (auto const& cs : pv)
        CHECK(cs.params.s1 == doctest::Approx(-1.0));
    CHECK_THROWS_AS(unequal_constraint_solve(spec, {0.0, 0.0, 0.3, 0.3}, 1), DomainError);
    CHECK_THROWS_AS(unequal_constraint_solve(spec, {0.0, 0.0, 0.5, 0.3}, 0), DomainError);
}

TEST_CASE("excited unequal states on completed couplings")
{
    ProblemSpec const spec(1.0, 3, 0);
    for (int n = 1; n <= 2; ++n) {
        auto const sols = monic_constraint_solutions(spec, {1.0, 0.5, 0.5, 0.3}, n, Coupling::v1);
        REQUIRE_FALSE(sols.empty());
        for (auto const& cs : sols) {
            auto const& st = cs.state;
            CHECK(st.family == Family::monic_poly);
            CHECK(st.poly.size() == static_cast<std::size_t>(n + 1));
            CHECK(st.poly.back() == 1.0);
            CHECK(sign_changes(st) == st.node_count());
            CHECK(norm_by_quadrature(st) == doctest::Approx(1.0).epsilon(1e-10));

            auto const again = n == 1 ? g1_excited_solve(spec, cs.params) : g2_excited_solve(spec, cs.params);
            auto const cands = unequal_family_candidates(spec, cs.params, n);
            bool found = false;
            for (auto const& c : cands)
                found = found || (c.consistent && std::abs(c.energy - st.energy) < 1e-10);
            CHECK(found);
            CHECK(std::abs(again.energy) < 1.0);
        }
    }
}

TEST_CASE("first-order family with vanishing a")
{
    ProblemSpec const spec(1.0, 3, 0);
    PotentialParams const p{0.5, 0.5, 0.2, 0.2};
    double const e0 = equal_kratzer_energy(spec, 0.2, 0.5, 0);
    double const e1 = equal_kratzer_energy(spec, 0.2, 0.5, 1);
    // G = 0 is the one-node state, G = 2c the ground state with f = r
    auto const cands = unequal_family_candidates(spec, p, 1);
    bool saw0 = false, saw1 = false;
    for (auto const& c : cands) {
        if (!c.consistent) {
            CHECK(c.exponent <= 0.0);
            continue;
        }
        saw0 = saw0 || std::abs(c.energy - e0) < 1e-10;
        saw1 = saw1 || std::abs(c.energy - e1) < 1e-10;
    }
    CHECK(saw0);
    CHECK(saw1);
    auto const st = g1_excited_solve(spec, p);
    CHECK(st.g > 0.0);
    CHECK(st.energy == doctest::Approx(e0).epsilon(1e-10));
    REQUIRE(st.poly_roots.size() == 1);
    CHECK(std::abs(st.poly_roots[0]) < 1e-12);
    CHECK(st.node_count() == 0);
}
