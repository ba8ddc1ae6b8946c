#include <cmath>

#include "doctest.h"
#include "layerpot/weights.hpp"

using namespace layerpot;

TEST_CASE("weight evaluation") {
    CHECK(RadialWeight::power(2).eval(3) == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(RadialWeight::powerlog(1).eval(std::exp(1.0) - 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(RadialWeight::piecewise(0.5, -0.5).eval(4) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(RadialWeight::piecewise(0.5, -0.5).eval(0.25) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(RadialWeight::power(1).eval(0.0), Error);
    CHECK_THROWS_AS(RadialWeight::power(1).eval(-1.0), Error);
}

TEST_CASE("piecewise weight is continuous at the break") {
    const auto w = RadialWeight::piecewise(0.2, 0.7);
    CHECK(w.eval(1.0) == 1.0);
    CHECK(w.eval(1.0 - 1e-12) == doctest::Approx(1.0).epsilon(1e-10));
    try {
        w.log_derivative(1.0);
        FAIL("expected NotDifferentiable");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotDifferentiable);
    }
}

TEST_CASE("log derivative") {
    for (double r : {1e-3, 1.0, 77.0}) CHECK(RadialWeight::power(-0.3).log_derivative(r) == -0.3);
    const auto pl = RadialWeight::powerlog(2);
    const double r = 3.0;
    CHECK(pl.log_derivative(r) == doctest::Approx(2 * r / ((1 + r) * std::log1p(r))).epsilon(1e-15));
    // custom weight built from samples of r^1.5
    std::vector<double> rs, vs;
    for (double s = 0.01; s < 200; s *= 1.5) {
        rs.push_back(s);
        vs.push_back(std::pow(s, 1.5));
    }
    const auto cw = RadialWeight::custom(rs, vs);
    for (std::size_t i = 1; i + 1 < rs.size(); ++i) CHECK(std::abs(cw.log_derivative(rs[i]) - 1.5) < 1e-3);
}

TEST_CASE("log derivative bounds") {
    const auto g = RadialGrid::standard();
    auto b = RadialWeight::power(1).log_derivative_bounds(g);
    CHECK(b.ess_inf == 1.0);
    CHECK(b.ess_sup == 1.0);
    auto pl = RadialWeight::powerlog(2).log_derivative_bounds(g);
    CHECK(pl.ess_inf <= 1e-4);
    CHECK(pl.ess_sup >= 1.999);
    CHECK(pl.inf_at_boundary);
    auto pw = RadialWeight::piecewise(0.2, 0.7).log_derivative_bounds(g);
    CHECK(pw.ess_inf == doctest::Approx(0.2));
    CHECK(pw.ess_sup == doctest::Approx(0.7));
}

TEST_CASE("doubling constant") {
    const auto g = RadialGrid::standard();
    CHECK(RadialWeight::power(2).doubling_constant(g) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(RadialWeight::power(-1).doubling_constant(g) == doctest::Approx(0.5).epsilon(1e-14));
    const double pl = RadialWeight::powerlog(1).doubling_constant(g);
    // fine-grid oracle at 10x density
    double oracle = 0;
    for (double r : g.refined(10).nodes()) oracle = std::max(oracle, std::log1p(2 * r) / std::log1p(r));
    CHECK(pl <= 2.0);
    CHECK(pl == doctest::Approx(oracle).epsilon(1e-5));
}

TEST_CASE("weight properties") {
    const RadialGrid grid(1e-3, 1e3, 16);
    std::vector<RadialWeight> ws = {RadialWeight::power(0.7), RadialWeight::piecewise(-0.4, 1.1),
                                    RadialWeight::powerlog(1.3), RadialWeight::powerlog(-0.6)};
    for (const auto& w : ws) {
        // reconstruct gamma from its log-derivative
        const double r0 = grid.nodes().front();
        double acc = 0;
        double prev = r0;
        for (double r : grid.nodes()) {
            if (r == r0) continue;
            const int steps = 200;
            const double la = std::log(prev), lb = std::log(r), h = (lb - la) / steps;
            for (int i = 0; i < steps; ++i) {
                // midpoint rule in log r avoids the breakpoint at r = 1
                acc += h * w.log_derivative(std::exp(la + (i + 0.5) * h));
            }
            prev = r;
            CHECK(w.eval(r0) * std::exp(acc) == doctest::Approx(w.eval(r)).epsilon(1e-6));
        }
        // rescaling invariance of the log-derivative bounds
        const auto b1 = w.log_derivative_bounds(grid);
        const auto b2 = w.scaled(17.0).log_derivative_bounds(grid);
        CHECK(b1.ess_inf == doctest::Approx(b2.ess_inf).epsilon(1e-12));
        CHECK(b1.ess_sup == doctest::Approx(b2.ess_sup).epsilon(1e-12));
        for (double r : grid.nodes()) CHECK(w.eval(r) > 0);
    }
}
