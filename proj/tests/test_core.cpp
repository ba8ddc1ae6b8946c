#include <cmath>

#include "doctest.h"
#include "layerpot/core.hpp"

using namespace layerpot;

TEST_CASE("model constants defaults and invariants") {
    const auto mc = ModelConstants::make(3, 2.0);
    CHECK(mc.lambda_star == doctest::Approx(0.5));
    CHECK(mc.p_conj() == 2.0);
    CHECK(mc.M() == 3.0);
    CHECK(mc.exponent_admissible());

    const auto mc4 = ModelConstants::make(3, 1.5);
    CHECK(mc4.p_conj() == 1.5 / 0.5);

    CHECK_THROWS_AS(ModelConstants::make(1, 2.0), Error);
    CHECK_THROWS_AS(ModelConstants::make(3, 1.0), Error);
    CHECK_THROWS_AS(ModelConstants::make(3, 2.0, 0.0, 1.0, 1.0, 1.0, 0.6), Error);

    auto rough = ModelConstants::make(3, 2.0, 0.7);
    CHECK_THROWS_AS(rough.require_small_lipschitz(), Error);
    auto n2 = ModelConstants::make(2, 2.0);
    CHECK_FALSE(n2.exponent_admissible());
    CHECK_THROWS_AS(n2.require_exponent_window(), Error);
}

TEST_CASE("radial grid is geometric with the requested density") {
    RadialGrid g(1e-3, 1e3, 10);
    CHECK(g.size() == 60);
    CHECK(g.nodes().front() == 1e-3);
    CHECK(g.nodes().back() == 1e3);
    for (std::size_t i = 1; i < g.size(); ++i)
        CHECK(g.nodes()[i] / g.nodes()[i - 1] == doctest::Approx(g.ratio()).epsilon(1e-12));
    CHECK(RadialGrid::standard().size() == 384);
    CHECK_THROWS_AS(RadialGrid(0.0, 1.0, 4), Error);
    CHECK_THROWS_AS(RadialGrid(2.0, 1.0, 4), Error);
}

TEST_CASE("adaptive integral reference values") {
    CHECK(adaptive_integral([](double s) { return s; }, 0, 1, 1e-10) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(adaptive_integral([](double s) { return 1 / (s * s); }, 1, kInf, 1e-10) ==
          doctest::Approx(1.0).epsilon(1e-10));
    // s^{N-1-p} with N = 3, p = 2
    CHECK(adaptive_integral([](double s) { return std::pow(s, 0.0); }, 0, 1, 1e-10) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adaptive integral is exact on polynomials and power laws") {
    for (int k = 0; k <= 12; ++k) {
        const double v = adaptive_integral([k](double s) { return std::pow(s, k); }, 0.5, 3.0, 1e-12);
        const double exact = (std::pow(3.0, k + 1) - std::pow(0.5, k + 1)) / (k + 1);
        CHECK(v == doctest::Approx(exact).epsilon(1e-12));
    }
    for (double e : {-0.9, -0.5, 0.3, 2.5}) {
        const double v = adaptive_integral([e](double s) { return std::pow(s, e); }, 0, 2, 1e-11);
        CHECK(v == doctest::Approx(std::pow(2.0, e + 1) / (e + 1)).epsilon(1e-9));
    }
    for (double e : {-1.1, -1.5, -3.0}) {
        const double v = adaptive_integral([e](double s) { return std::pow(s, e); }, 2, kInf, 1e-11);
        CHECK(v == doctest::Approx(-std::pow(2.0, e + 1) / (e + 1)).epsilon(1e-9));
    }
    CHECK(adaptive_integral([](double s) { return std::exp(-s); }, 0, kInf, 1e-12) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(adaptive_integral([](double s) { return s * std::exp(-s * s); }, 1e-3, 1e3, 1e-12) ==
          doctest::Approx(0.5 * std::exp(-1e-6)).epsilon(1e-11));
}

TEST_CASE("adaptive integral handles slowly decaying tails and kinks") {
    const double v = adaptive_integral([](double s) { return std::pow(s, -1.05); }, 1, kInf, 1e-10);
    CHECK(v == doctest::Approx(20.0).epsilon(1e-8));
    const double z = adaptive_integral([](double s) { return std::pow(s, -0.95); }, 0, 1, 1e-10);
    CHECK(z == doctest::Approx(20.0).epsilon(1e-8));
    // logarithmic decay cannot be resolved to tolerance: reported, not truncated
    try {
        adaptive_integral(
            [](double s) {
                const double l = std::log(s);
                return 1 / (s * l * l);
            },
            std::exp(1.0), kInf, 1e-9);
        FAIL("expected ToleranceNotMet");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ToleranceNotMet);
    }
    const double kink = adaptive_integral([](double s) { return std::abs(s - 0.3); }, 0, 1, 1e-12);
    CHECK(kink == doctest::Approx(0.045 + 0.245).epsilon(1e-10));
}

TEST_CASE("adaptive integral errors") {
    CHECK_THROWS_AS(adaptive_integral([](double) { return std::nan(""); }, 0, 1, 1e-8), Error);
    try {
        adaptive_integral([](double) { return kInf; }, 0, 1, 1e-8);
        FAIL("expected NonFinite");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonFinite);
    }
    CHECK_THROWS_AS(adaptive_integral([](double s) { return s; }, 1, 0.5, 1e-8), Error);
}

TEST_CASE("log integral and cumulative integrals") {
    const double li = log_integral([](double s) { return 500.0 + 2.0 * std::log(s); }, 0, 1, 1e-12);
    CHECK(li == doctest::Approx(500.0 + std::log(1.0 / 3.0)).epsilon(1e-12));
    RadialGrid g(1e-2, 1e2, 4);
    auto from0 = log_cumulative_from_zero([](double s) { return std::log(s); }, g.nodes(), 1e-12);
    auto toinf = log_cumulative_to_infinity([](double s) { return -3.0 * std::log(s); }, g.nodes(), 1e-12);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.nodes()[i];
        CHECK(std::exp(from0[i]) == doctest::Approx(r * r / 2).epsilon(1e-10));
        CHECK(std::exp(toinf[i]) == doctest::Approx(1 / (2 * r * r)).epsilon(1e-10));
    }
}

TEST_CASE("tail classification") {
    auto c = tail_classify([](double s) { return 1 / (s * s); }, TailEnd::Infinity);
    CHECK(c.verdict == TailVerdict::Convergent);
    CHECK(c.fitted_exponent == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(tail_classify([](double s) { return 1 / s; }, TailEnd::Infinity).verdict == TailVerdict::Marginal);
    CHECK(tail_classify([](double s) { return std::pow(s, -0.5); }, TailEnd::Infinity).verdict ==
          TailVerdict::Divergent);
    CHECK(tail_classify([](double s) { return std::pow(s, -1.5); }, TailEnd::Zero).verdict ==
          TailVerdict::Divergent);
    CHECK(tail_classify([](double s) { return std::pow(s, 2.0); }, TailEnd::Zero).verdict ==
          TailVerdict::Convergent);
    auto logc = tail_classify(
        [](double s) {
            const double l = std::log(s);
            return 1 / (s * l * l);
        },
        TailEnd::Infinity);
    CHECK(logc.verdict == TailVerdict::Marginal);

    for (double e : {-3.7, -1.2, 0.4, 5.0}) {
        for (TailEnd end : {TailEnd::Zero, TailEnd::Infinity}) {
            const auto tc = tail_classify_log([e](double s) { return e * std::log(s); }, end);
            CHECK(tc.fitted_exponent == doctest::Approx(e).epsilon(1e-6));
        }
    }
    TailProbe few;
    few.samples = 3;
    CHECK_THROWS_AS(tail_classify([](double s) { return s; }, TailEnd::Zero, few), Error);
}

TEST_CASE("supremum scan") {
    RadialGrid g(1e-3, 1e3, 32);
    auto s = supremum_scan([](double r) { return r * std::exp(-r); }, g);
    CHECK(s.sup_value == doctest::Approx(std::exp(-1.0)).epsilon(1e-3));
    CHECK(s.argmax_r == doctest::Approx(1.0).epsilon(0.05));
    CHECK_FALSE(s.boundary_flag);
    auto c = supremum_scan([](double) { return 1.0; }, g);
    CHECK(c.sup_value == 1.0);
    CHECK(c.argmax_r == g.nodes().front());
    CHECK(c.boundary_flag);
    CHECK_THROWS_AS(supremum_scan([](double r) { return r > 1 ? kInf : 0.0; }, g), Error);
    // refinement invariance for a smooth profile
    auto fine = supremum_scan([](double r) { return r * std::exp(-r); }, g.refined(2));
    CHECK(std::abs(fine.sup_value - s.sup_value) < 1e-3);
}

TEST_CASE("gauss legendre rules integrate polynomials exactly") {
    for (int n : {1, 2, 5, 10, 20}) {
        const auto& rule = gauss_legendre(n);
        double wsum = 0;
        for (double w : rule.w) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        for (int k = 0; k < 2 * n; ++k) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += rule.w[static_cast<std::size_t>(i)] * std::pow(rule.x[static_cast<std::size_t>(i)], k);
            const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
            CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1));
        }
        for (int i = 1; i < n; ++i) CHECK(rule.x[static_cast<std::size_t>(i)] > rule.x[static_cast<std::size_t>(i - 1)]);
    }
}
