#include <cmath>

#include "doctest.h"
#include "layerpot/conditions.hpp"

using namespace layerpot;

namespace {

// Closed form of the equivalent-norm product for Gamma = r^beta: both factor
// integrals are pure powers, so the product is constant in r.
double eqnorm_closed_form(double N, double p, double beta) {
    const double pc = p / (p - 1);
    return std::pow(N - p + beta * p, -1 / p) * std::pow((N - 1) / (p - 1) + beta * pc - 1, -1 / pc);
}

bool not_holds(const ConditionReport& r) { return r.verdict != Verdict::Holds; }

}  // namespace

TEST_CASE("equivalent norm against the closed form") {
    const auto mc = ModelConstants::make(3, 2.0);
    const auto r0 = check_equivalent_norm(RadialWeight::power(0.0), mc);
    CHECK(r0.verdict == Verdict::Holds);
    REQUIRE(r0.sup_estimate);
    CHECK(*r0.sup_estimate == doctest::Approx(1.0).epsilon(1e-8));
    const auto r4 = check_equivalent_norm(RadialWeight::power(0.4), mc);
    CHECK(r4.verdict == Verdict::Holds);
    REQUIRE(r4.sup_estimate);
    CHECK(*r4.sup_estimate == doctest::Approx(1.0 / 1.8).epsilon(1e-6));
    CHECK(eqnorm_closed_form(3, 2, 0.4) == doctest::Approx(1.0 / 1.8).epsilon(1e-14));
    for (double beta : {-0.3, 0.1, 0.9, 1.3}) {
        const auto r = check_equivalent_norm(RadialWeight::power(beta), mc);
        REQUIRE(r.sup_estimate);
        CHECK(*r.sup_estimate == doctest::Approx(eqnorm_closed_form(3, 2, beta)).epsilon(1e-6));
    }
    const auto crit = check_equivalent_norm(RadialWeight::power(1.0 - 3.0 / 2.0), mc);
    CHECK(not_holds(crit));
    CHECK_FALSE(crit.sup_estimate);
    CHECK(check_equivalent_norm(RadialWeight::power(-0.8), mc).verdict == Verdict::Fails);
}

TEST_CASE("existence conditions") {
    const auto mc = ModelConstants::make(3, 2.0);
    const auto flat = LipschitzGraph::flat(3);
    const auto one = RadialWeight::power(0.0);
    const auto [j1, j2] = check_existence_conditions(one, one, flat, mc);
    CHECK(j1.verdict == Verdict::Holds);
    CHECK(j2.verdict == Verdict::Holds);
    // closed form for J2 at gamma = Gamma = 1: (r^N/N)^{1/p} (r^{-Np'/p} p/(N p'))^{1/p'}
    const double N = 3, p = 2, pc = 2;
    const double j2_exact = std::pow(1 / N, 1 / p) * std::pow(p / (N * pc), 1 / pc);
    REQUIRE(j2.sup_estimate);
    CHECK(*j2.sup_estimate == doctest::Approx(j2_exact).epsilon(1e-7));
    // J1 at gamma = Gamma = 1 with M = N: (r^{p'(N - N/p)}/(p'(N-N/p)))^{1/p'} (r^{N-Np}/(Np-N))^{1/p}
    const double e1 = pc * (N - N / p);
    const double j1_exact = std::pow(1 / e1, 1 / pc) * std::pow(1 / (N * p - N), 1 / p);
    REQUIRE(j1.sup_estimate);
    CHECK(*j1.sup_estimate == doctest::Approx(j1_exact).epsilon(1e-7));

    // cone: product changes by at most the exponential of the Dini range
    const auto cone = LipschitzGraph::cone(3, 0.05);
    const auto [c1, c2] = check_existence_conditions(one, one, cone, mc);
    CHECK(c1.verdict == Verdict::Holds);
    CHECK(c2.verdict == Verdict::Holds);
    REQUIRE(c2.sup_estimate);
    const double range = std::log(1e6 / 1e-6);
    CHECK(*c2.sup_estimate <= j2_exact * std::exp(mc.c1 * 0.05 * range));
    CHECK(*c2.sup_estimate >= j2_exact * std::exp(-mc.c1 * 0.05 * range));

    // supercritical gamma = Gamma = r^beta, beta >= N - N/p
    const auto big = RadialWeight::power(1.6);
    CHECK(check_existence_conditions(big, big, flat, mc).first.verdict == Verdict::Fails);

    const auto mc_bad = ModelConstants::make(2, 2.0);
    try {
        check_existence_conditions(one, one, LipschitzGraph::flat(2), mc_bad);
        FAIL("expected PreconditionViolated");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PreconditionViolated);
    }
}

TEST_CASE("inverse conditions agree with existence conditions") {
    const auto mc = ModelConstants::make(3, 2.0);
    const auto flat = LipschitzGraph::flat(3);
    const auto bump = LipschitzGraph::bump(3, 0.1, 1.0);
    for (const auto* surf : {&flat, &bump}) {
        const auto g = RadialWeight::power(0.3);
        const auto [e1, e2] = check_existence_conditions(g, g, *surf, mc);
        const auto [i1, i2] = check_inverse_conditions(g, g, *surf, mc);
        CHECK(i1.verdict == Verdict::Holds);
        CHECK(i2.verdict == Verdict::Holds);
        REQUIRE(e1.sup_estimate);
        REQUIRE(i1.sup_estimate);
        CHECK(*e1.sup_estimate == *i1.sup_estimate);
        CHECK(*e2.sup_estimate == *i2.sup_estimate);
    }
    const auto [b1, b2] =
        check_inverse_conditions(RadialWeight::power(0.3), RadialWeight::power(-0.3), flat, mc);
    CHECK(b1.verdict == Verdict::Fails);
    (void)b2;
}

TEST_CASE("uniqueness asymptotics") {
    const auto mc = ModelConstants::make(3, 2.0);
    const auto flat = LipschitzGraph::flat(3);
    CHECK(check_uniqueness_asymptotics(RadialWeight::power(1.0), flat, mc).first.verdict == Verdict::Holds);
    CHECK(check_uniqueness_asymptotics(RadialWeight::power(1.7), flat, mc).first.verdict == Verdict::Fails);
    CHECK(check_uniqueness_asymptotics(RadialWeight::power(-2.0), flat, mc).second.verdict == Verdict::Fails);
    CHECK(check_uniqueness_asymptotics(RadialWeight::power(-1.0), flat, mc).second.verdict == Verdict::Holds);

    // the cone shifts the fitted exponent at infinity by c1 * eps
    const double eps = 0.05;
    const auto cone = LipschitzGraph::cone(3, eps);
    const auto g = RadialWeight::power(-1.0);
    const double s_flat = *check_uniqueness_asymptotics(g, flat, mc).second.sup_estimate;
    const double s_cone = *check_uniqueness_asymptotics(g, cone, mc).second.sup_estimate;
    CHECK(s_cone - s_flat == doctest::Approx(mc.c1 * eps).epsilon(1e-6));
}

TEST_CASE("inclusion conditions") {
    const auto mc = ModelConstants::make(3, 2.0);
    const auto one = RadialWeight::power(0.0);
    const auto [x, y] = check_inclusion_conditions(one, one, mc);
    CHECK(x.verdict == Verdict::Holds);
    REQUIRE(x.sup_estimate);
    // int_0^1 s^2 ds + int_1^inf s^{-4} ds
    CHECK(*x.sup_estimate == doctest::Approx(1.0 / 3 + 1.0 / 3).epsilon(1e-9));
    CHECK(y.verdict == Verdict::Holds);
    CHECK(not_holds(check_inclusion_conditions(RadialWeight::power(-1.5), one, mc).first));
    const double crit = mc.M() - mc.N / mc.p;
    CHECK(check_inclusion_conditions(one, RadialWeight::power(crit), mc).second.verdict == Verdict::Marginal);
}

TEST_CASE("continuity conditions") {
    const auto mc = ModelConstants::make(3, 2.0);
    const auto one = RadialWeight::power(0.0);
    const auto [b1, b2] = check_continuity_conditions(one, one, mc);
    CHECK(b1.verdict == Verdict::Holds);
    CHECK(b2.verdict == Verdict::Holds);
    REQUIRE(b1.sup_estimate);
    CHECK(*b1.sup_estimate == doctest::Approx(1.0 / 3).epsilon(1e-7));
    CHECK(check_continuity_conditions(one, RadialWeight::power(1.6), mc).first.verdict == Verdict::Fails);
    CHECK(check_continuity_conditions(one, RadialWeight::power(0.5), mc).first.verdict == Verdict::Fails);
}

TEST_CASE("log-derivative isomorphism criteria") {
    const auto mc = ModelConstants::make(3, 2.0);
    const auto flat = LipschitzGraph::flat(3);
    const auto zero = RadialWeight::power(0.0);
    CHECK(check_isomorphism_logderiv(zero, zero, flat, mc).verdict == Verdict::Holds);
    const auto two = RadialWeight::power(2.0);
    CHECK(check_isomorphism_logderiv(two, two, flat, mc).verdict == Verdict::Fails);
    const auto pl = RadialWeight::powerlog(1.0);
    CHECK(check_isomorphism_logderiv(pl, pl, flat, mc).verdict == Verdict::Holds);
    CHECK(check_isomorphism_logderiv(RadialWeight::power(0.0), RadialWeight::power(0.5), flat, mc).verdict ==
          Verdict::Fails);
    CHECK_THROWS_AS(check_isomorphism_logderiv(zero, zero, LipschitzGraph::flat(2), ModelConstants::make(2, 2.0)),
                    Error);
}

TEST_CASE("power window") {
    const auto mc = ModelConstants::make(3, 2.0);
    CHECK(check_power_alpha(0.0, mc).verdict == Verdict::Holds);
    CHECK(check_power_alpha(-0.5, mc).verdict == Verdict::Marginal);
    CHECK(check_power_alpha(1.5, mc).verdict == Verdict::Marginal);
    CHECK(check_power_alpha(2.0, mc).verdict == Verdict::Fails);
}

TEST_CASE("log-derivative verdict boundary matches the power window") {
    const auto mc = ModelConstants::make(3, 2.0);
    const auto flat = LipschitzGraph::flat(3);
    for (double a = -1.0; a <= 2.5; a += 0.125) {
        const auto w = RadialWeight::power(a);
        CHECK(check_isomorphism_logderiv(w, w, flat, mc).verdict == check_power_alpha(a, mc).verdict);
    }
}

TEST_CASE("verdicts are invariant under weight rescaling") {
    const auto mc = ModelConstants::make(3, 2.0);
    const auto flat = LipschitzGraph::flat(3);
    for (double a : {-0.75, 0.0, 0.8, 1.75}) {
        const auto w = RadialWeight::power(a);
        const auto b1 = run_condition_battery(w, w, flat, mc);
        const auto b2 = run_condition_battery(w.scaled(5.0), w.scaled(0.2), flat, mc);
        REQUIRE(b1.size() == b2.size());
        for (std::size_t i = 0; i < b1.size(); ++i) CHECK(b1[i].verdict == b2[i].verdict);
    }
}

TEST_CASE("power-weight verdicts change at most once per direction") {
    const auto mc = ModelConstants::make(3, 2.0);
    const auto flat = LipschitzGraph::flat(3);
    std::vector<std::vector<Verdict>> rows;
    for (double a = -2.0; a <= 3.0; a += 0.25) {
        const auto w = RadialWeight::power(a);
        const auto b = run_condition_battery(w, w, flat, mc);
        std::vector<Verdict> v;
        for (const auto& r : b) v.push_back(r.verdict);
        rows.push_back(v);
    }
    for (std::size_t c = 0; c < rows.front().size(); ++c) {
        // Holds occupies one contiguous interval of alpha
        int changes = 0;
        for (std::size_t i = 1; i < rows.size(); ++i)
            if ((rows[i][c] == Verdict::Holds) != (rows[i - 1][c] == Verdict::Holds)) ++changes;
        CHECK(changes <= 2);
    }
}

TEST_CASE("condition battery order and content") {
    const auto mc = ModelConstants::make(3, 2.0);
    const auto w = RadialWeight::power(0.0);
    const auto b = run_condition_battery(w, w, LipschitzGraph::flat(3), mc);
    REQUIRE(b.size() == 13);
    for (std::size_t i = 0; i < b.size(); ++i) {
        CHECK(static_cast<std::size_t>(b[i].condition_id) == i);
        CHECK(b[i].verdict == Verdict::Holds);
    }
}

TEST_CASE("hardy sandwich, classical pair") {
    const auto U = [](double r) { return 1.0 / r; };
    const auto V = [](double) { return 1.0; };
    for (double p : {2.0, 3.0}) {
        const auto mc = ModelConstants::make(3, p);
        const auto rep = hardy_verify(U, V, mc, HardyDirection::FromZero);
        CHECK(rep.B == doctest::Approx(std::pow(p - 1, -1 / p)).epsilon(1e-6));
        CHECK(rep.sandwich_holds);
        CHECK(rep.C_empirical >= rep.B);
        CHECK(rep.C_empirical <= rep.C_upper * (1 + 1e-9));
        CHECK(rep.C_upper == doctest::Approx(p / (p - 1)).epsilon(1e-6));
        if (p == 2.0) CHECK(rep.C_empirical >= 1.95);
    }
}

TEST_CASE("hardy from infinity and degenerate cases") {
    const auto mc = ModelConstants::make(3, 2.0);
    // dual classical pair: || int_r^inf g || <= C || r g ||, B = 1, sharp constant p
    const auto rep =
        hardy_verify([](double) { return 1.0; }, [](double r) { return r; }, mc, HardyDirection::FromInfinity);
    CHECK(rep.B == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.sandwich_holds);
    CHECK(rep.C_empirical >= 1.9);

    const auto zero = hardy_verify([](double) { return 0.0; }, [](double) { return 1.0; }, mc,
                                   HardyDirection::FromZero);
    CHECK(zero.B == 0.0);
    CHECK(zero.C_empirical == 0.0);
    try {
        hardy_verify([](double) { return 1.0; }, [](double) { return 1.0; }, mc, HardyDirection::FromZero);
        FAIL("expected DivergentB");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DivergentB);
    }
}

TEST_CASE("integration-by-parts lemma") {
    const RadialGrid grid = RadialGrid::standard();
    for (double delta : {-0.7, 0.0, 0.4}) {
        const auto g = RadialWeight::power(delta);
        const double alpha = 2.0, beta = 1.0;
        const auto z = verify_pi_lemma(g, alpha, beta, grid, TailEnd::Zero);
        CHECK(z.hypothesis_holds);
        CHECK(z.C == doctest::Approx(1 + beta * delta / alpha).epsilon(1e-14));
        CHECK(z.bound_holds);
        for (const auto& n : z.nodes) CHECK(n.lhs == doctest::Approx(n.rhs).epsilon(1e-8));
        const auto i = verify_pi_lemma(g, alpha, beta, grid, TailEnd::Infinity);
        CHECK(i.hypothesis_holds);
        CHECK(i.bound_holds);
        for (const auto& n : i.nodes) CHECK(n.lhs == doctest::Approx(n.rhs).epsilon(1e-8));
    }
    const auto pl = verify_pi_lemma(RadialWeight::powerlog(1.0), 2.0, 1.0, grid, TailEnd::Infinity);
    CHECK(pl.hypothesis_holds);
    CHECK(pl.C == doctest::Approx(0.5));
    CHECK(pl.bound_holds);
    const auto bad = verify_pi_lemma(RadialWeight::power(-3.0), 1.0, 1.0, grid, TailEnd::Zero);
    CHECK_FALSE(bad.hypothesis_holds);
}
