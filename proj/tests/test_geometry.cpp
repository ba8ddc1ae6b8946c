#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "layerpot/geometry.hpp"

using namespace layerpot;

TEST_CASE("lift") {
    CHECK(LipschitzGraph::flat(2).lift({1, 0}) == Point{1, 0, 0});
    const auto c = LipschitzGraph::cone(2, 0.1).lift({3, 4});
    CHECK(c[2] == doctest::Approx(0.5).epsilon(1e-15));
    const auto b = LipschitzGraph::bump(3, 0.1, 1.0).lift({0, 0, 0});
    for (double v : b) CHECK(v == 0.0);
}

TEST_CASE("surface element") {
    CHECK(LipschitzGraph::flat(3).surface_element(Point{0.3, -2, 7}) == 1.0);
    const auto cone = LipschitzGraph::cone(2, 0.1);
    CHECK(cone.surface_element(Point{1, 2}) == doctest::Approx(std::sqrt(1.01)).epsilon(1e-15));
    try {
        cone.surface_element(Point{0, 0});
        FAIL("expected GradientUnavailable");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GradientUnavailable);
    }
    const auto bump = LipschitzGraph::bump(2, 0.1, 1.0);
    CHECK(bump.surface_element(Point{0, 0}) == 1.0);
    // finite-difference gradient at the bump centre
    const double h = 1e-6;
    CHECK(std::abs(bump.phi(Point{h, 0}) - bump.phi(Point{-h, 0})) / (2 * h) < 1e-9);
    for (double x = -3; x <= 3; x += 0.37) CHECK(bump.surface_element(Point{x, 0.5 * x}) >= 1.0);
}

TEST_CASE("bump gradient matches finite differences") {
    const auto bump = LipschitzGraph::bump(3, 0.2, 1.5);
    const Point x{0.4, -0.7, 0.3};
    const auto g = bump.grad_phi(x);
    for (int k = 0; k < 3; ++k) {
        Point xp = x, xm = x;
        xp[static_cast<std::size_t>(k)] += 1e-6;
        xm[static_cast<std::size_t>(k)] -= 1e-6;
        CHECK(g[static_cast<std::size_t>(k)] == doctest::Approx((bump.phi(xp) - bump.phi(xm)) / 2e-6).epsilon(1e-7));
    }
}

TEST_CASE("local lipschitz profile") {
    CHECK(LipschitzGraph::flat(2).local_lipschitz(3.0) == 0.0);
    const auto cone = LipschitzGraph::cone(2, 0.1);
    for (double r : {1e-3, 1.0, 1e3}) CHECK(cone.local_lipschitz(r) == 0.1);

    const auto bump = LipschitzGraph::bump(2, 0.1, 1.0);
    CHECK(bump.lambda0() == 0.1);
    double prev = 0;
    for (double r = 0.01; r < 10; r *= 1.2) {
        const double l = bump.local_lipschitz(r);
        CHECK(l >= prev);
        CHECK(l <= bump.lambda0() + 1e-15);
        prev = l;
    }
    for (double r : {0.05, 0.15, 0.3, 1.0}) {
        const double analytic = bump.local_lipschitz(r);
        const double sampled = sampled_lipschitz(bump, r, 100000, 7);
        CHECK(sampled <= analytic * 1.0001);
        CHECK(sampled >= analytic * 0.98);
    }
}

TEST_CASE("dini integral") {
    CHECK(LipschitzGraph::flat(2).dini_integral(0.1, 10) == 0.0);
    CHECK(LipschitzGraph::cone(2, 0.1).dini_integral(1, std::exp(1.0)) == doctest::Approx(0.1).epsilon(1e-14));
    const auto bump = LipschitzGraph::bump(2, 0.1, 1.0);
    // log-trapezoid oracle on a fine grid
    const double a = 1e-3, b = 5.0;
    const int n = 200000;
    const double la = std::log(a), lb = std::log(b), h = (lb - la) / n;
    double trap = 0;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        trap += w * bump.local_lipschitz(std::exp(la + i * h));
    }
    trap *= h;
    CHECK(bump.dini_integral(a, b) == doctest::Approx(trap).epsilon(1e-7));
    CHECK(bump.dini_integral(a, 0.3) + bump.dini_integral(0.3, b) ==
          doctest::Approx(bump.dini_integral(a, b)).epsilon(2e-10));
    CHECK(std::isfinite(bump.dini_integral(0.0, 1.0)));
    CHECK(LipschitzGraph::cone(2, 0.1).dini_integral(0.0, 1.0) == kInf);
}

TEST_CASE("custom surface from tensor grid") {
    // phi = 0.1 x + 0.05 y sampled on a grid: bilinear interpolation is exact
    std::vector<double> ax;
    for (int i = -4; i <= 4; ++i) ax.push_back(0.5 * i);
    std::vector<double> vals;
    for (double x : ax)
        for (double y : ax) vals.push_back(0.1 * x + 0.05 * y);
    const auto s = LipschitzGraph::custom(2, {ax, ax}, vals, std::nullopt, 3);
    CHECK(s.phi(Point{0.3, -0.7}) == doctest::Approx(0.03 - 0.035).epsilon(1e-12));
    const auto g = s.grad_phi(Point{0.3, -0.7});
    CHECK(g[0] == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(g[1] == doctest::Approx(0.05).epsilon(1e-6));
    const double lip = std::sqrt(0.01 + 0.0025);
    CHECK(s.lambda0() <= lip + 1e-9);
    CHECK(s.lambda0() >= 0.99 * lip);
    double prev = 0;
    for (double r = 0.05; r < 5; r *= 1.3) {
        CHECK(s.local_lipschitz(r) >= prev);
        prev = s.local_lipschitz(r);
    }
    const auto capped = LipschitzGraph::custom(2, {ax, ax}, vals, 0.05, 3);
    CHECK(capped.lambda0() == 0.05);
    CHECK(capped.local_lipschitz(10.0) <= 0.05);
    CHECK(capped.dini_integral(1, 2) >= 0.0);

    std::vector<double> bad = vals;
    for (auto& v : bad) v += 1.0;
    CHECK_THROWS_AS(LipschitzGraph::custom(2, {ax, ax}, bad), Error);
}

TEST_CASE("custom surface CSV parsing") {
    const std::string path = "test_surface.csv";
    {
        std::ofstream out(path);
        out << "x,y,phi\n";
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j) out << i << "," << j << "," << 0.1 * std::abs(i) << "\n";
    }
    const auto s = LipschitzGraph::from_csv(2, path);
    CHECK(s.phi(Point{0.5, 0.2}) == doctest::Approx(0.05).epsilon(1e-12));
    {
        std::ofstream out(path);
        out << "0,0,0\n1,0\n";
    }
    CHECK_THROWS_AS(LipschitzGraph::from_csv(2, path), Error);
    std::remove(path.c_str());
}
