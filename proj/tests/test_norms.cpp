#include <array>
#include <cmath>
#include <random>

#include "doctest.h"
#include "layerpot/norms.hpp"
#include "layerpot/operators.hpp"

using namespace layerpot;

namespace {

std::shared_ptr<const PolarGrid> grid(int N, double r_max, int panels, int order, int angular) {
    return std::make_shared<const PolarGrid>(PolarGrid::make(N, r_max, panels, order, angular));
}

double sphere_area(int N) { return N == 2 ? 2 * kPi : 4 * kPi; }

}  // namespace

TEST_CASE("seminorm of a power") {
    const auto g = grid(2, 4.0, 8, 10, 8);
    const auto u = PolarGridFunction::radial(g, [](double r) { return std::pow(r, -0.5); });
    CHECK(seminorm(u, 1.0, 2.0) == doctest::Approx(std::sqrt(2 * kPi)).epsilon(1e-9));
    // N_p(u, r) = r^{-a} N_p(u, 1)
    CHECK(seminorm(u, 0.5, 2.0) == doctest::Approx(std::sqrt(2 * kPi) * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(seminorm(u, 0.7, 2.0) == doctest::Approx(std::sqrt(2 * kPi) / std::sqrt(0.7)).epsilon(1e-7));
    CHECK_THROWS_AS(seminorm(u, 0.0, 2.0), Error);
}

TEST_CASE("seminorm of a constant is radius independent") {
    for (int N : {2, 3})
        for (double p : {1.0, 2.0, 3.0}) {
            const auto g = grid(N, 4.0, 4, 4, N == 2 ? 8 : 4);
            const auto u = PolarGridFunction::radial(g, [](double) { return 1.7; });
            const double expect = 1.7 * std::pow(sphere_area(N) * (std::pow(2.0, N) - 1) / N, 1 / p);
            for (double r : {0.1, 0.7, 1.3}) CHECK(seminorm(u, r, p) == doctest::Approx(expect).epsilon(1e-10));
        }
}

TEST_CASE("weighted Lebesgue norms of the ball indicator") {
    const auto g = std::make_shared<const PolarGrid>(PolarGrid::with_breaks(2, {0, 0.5, 1, 1.5, 2}, 4, 8));
    const auto u = PolarGridFunction::radial(g, [](double r) { return r < 1 ? 1.0 : 0.0; });
    const auto mc = ModelConstants::make(2, 2.0);
    CHECK(weighted_Lp_norm(u, RadialWeight::power(0), mc) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
    CHECK(weighted_Lp_norm(u, RadialWeight::power(1), mc) == doctest::Approx(std::sqrt(kPi / 2)).epsilon(1e-12));
}

TEST_CASE("weighted Sobolev norm of a tent") {
    auto tent = [](double r) { return std::max(0.0, 1 - r); };
    const auto g2 = std::make_shared<const PolarGrid>(PolarGrid::with_breaks(2, {0, 0.5, 1, 2}, 4, 8));
    const auto s2 = weighted_sobolev_norm(PolarGridFunction::radial(g2, tent), RadialWeight::power(0), ModelConstants::make(2, 2.0));
    CHECK(s2.gradient_part * s2.gradient_part == doctest::Approx(kPi).epsilon(1e-10));

    // the Hardy term is dominated by the gradient term with constant 2/(N-2) = 2
    const auto g3 = std::make_shared<const PolarGrid>(PolarGrid::with_breaks(3, {0, 0.5, 1, 2}, 4, 4));
    const auto s3 = weighted_sobolev_norm(PolarGridFunction::radial(g3, tent), RadialWeight::power(0), ModelConstants::make(3, 2.0));
    const double hardy_part = std::sqrt(s3.full * s3.full - s3.gradient_part * s3.gradient_part);
    CHECK(s3.gradient_part * s3.gradient_part == doctest::Approx(4 * kPi / 3).epsilon(1e-10));
    CHECK(hardy_part <= 2 * s3.gradient_part);
    CHECK(hardy_part * hardy_part == doctest::Approx(4 * kPi / 3).epsilon(1e-8));
}

TEST_CASE("grid gradient of smooth functions") {
    for (int N : {2, 3}) {
        const auto g = grid(N, 3.0, 8, 8, N == 2 ? 24 : 16);
        auto f = [](const Point& x) { return std::exp(-(x[0] - 0.2) * (x[0] - 0.2) - x[1] * x[1]); };
        const auto grad = grid_gradient(PolarGridFunction::sample(g, f));
        REQUIRE(grad.size() == static_cast<std::size_t>(N));
        double err = 0;
        for (std::size_t i = 0; i < g->n_radial(); ++i)
            for (std::size_t j = 0; j < g->n_angular(); ++j) {
                const Point x = g->node(i, j);
                double r2 = 0;
                for (double c : x) r2 += c * c;
                if (r2 > 1.5 * 1.5) continue;
                const double e = f(x);
                err = std::max(err, std::abs(grad[0].at(i, j) + 2 * (x[0] - 0.2) * e));
                err = std::max(err, std::abs(grad[1].at(i, j) + 2 * x[1] * e));
                if (N == 3) err = std::max(err, std::abs(grad[2].at(i, j)));
            }
        CHECK(err < 1e-5);
    }
}

TEST_CASE("zero function has zero norms") {
    const auto g = grid(2, 2.0, 2, 4, 8);
    const auto z = PolarGridFunction::zeros(g);
    const auto mc = ModelConstants::make(2, 2.0);
    CHECK(seminorm(z, 0.5, 2.0) == 0.0);
    CHECK(weighted_Lp_norm(z, RadialWeight::power(1), mc) == 0.0);
    const auto s = weighted_sobolev_norm(z, RadialWeight::power(0), mc);
    CHECK(s.full == 0.0);
    CHECK(s.gradient_part == 0.0);
    CHECK(xp_norm(z, mc) == 0.0);
    CHECK(y_norm(z, mc) == 0.0);
}

TEST_CASE("two-sided comparison of Riesz mass and seminorm integral") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(0, 1);
    for (int N : {2, 3})
        for (int trial = 0; trial < 10; ++trial) {
            const auto g = grid(N, 4.0, 8, 6, N == 2 ? 16 : 6);
            std::vector<std::array<double, 4>> bumps;
            for (int b = 0; b < 3; ++b) bumps.push_back({3 * U(rng) - 1.5, 3 * U(rng) - 1.5, 0.5 + 4 * U(rng), 0.2 + U(rng)});
            const auto u = PolarGridFunction::sample(g, [&](const Point& x) {
                double v = 0.01;
                for (const auto& b : bumps)
                    v += b[3] * std::exp(-b[2] * ((x[0] - b[0]) * (x[0] - b[0]) + (x[1] - b[1]) * (x[1] - b[1])));
                return v;
            });
            const double M1 = 0.1 + U(rng), M2 = M1 + 0.2 + 1.5 * U(rng);
            const auto mc = mass_comparison(u, M1, M2);
            CHECK(mc.C == doctest::Approx((N - 1.0) / (std::pow(2.0, N - 1) - 1)));
            CHECK(mc.left > 0);
            CHECK(mc.holds(1e-8));
        }
}

TEST_CASE("X norm of an annulus indicator") {
    const auto g = std::make_shared<const PolarGrid>(PolarGrid::with_breaks(2, {0, 0.5, 1, 1.5, 2, 3, 4}, 4, 8));
    const auto u = PolarGridFunction::radial(g, [](double r) { return r >= 1 && r < 2 ? 1.0 : 0.0; });
    const auto mc = ModelConstants::make(2, 2.0);
    // N_2(u, s)^2 = pi (min(2s, 2)^2 - max(s, 1)^2)_+ / s^2
    auto np = [](double s) {
        const double a = std::max(s, 1.0), b = std::min(2 * s, 2.0);
        return b > a ? std::sqrt(kPi * (b * b - a * a)) / s : 0.0;
    };
    // s = 1/2 + t^2 on [1/2, 1] and s = 2 - t^2 on [1, 2] remove the square-root endpoints
    double expect = 0;
    const auto& gl = gauss_legendre(40);
    for (std::size_t m = 0; m < gl.x.size(); ++m) {
        const double t1 = std::sqrt(0.5) * 0.5 * (1 + gl.x[m]), s1 = 0.5 + t1 * t1;
        expect += std::sqrt(0.5) * 0.5 * gl.w[m] * 2 * t1 * s1 * np(s1);
        const double t2 = 0.5 * (1 + gl.x[m]), s2 = 2 - t2 * t2;
        expect += 0.5 * gl.w[m] * 2 * t2 * np(s2);
    }
    CHECK(xp_norm(u, mc) == doctest::Approx(expect).epsilon(1e-8));
    // the annulus Riesz mass sits between C times the seminorm integral on either side
    const auto cmp = mass_comparison(u, 1.0, 2.0);
    CHECK(cmp.C == 1.0);
    CHECK(cmp.left == doctest::Approx(2 * kPi).epsilon(1e-10));
    CHECK(cmp.holds());
}

TEST_CASE("singular operator estimate constant is refinement stable") {
    const auto mc = ModelConstants::make(2, 2.0);
    const auto spec = QuadratureSpec::defaults(2);
    const auto flat = LipschitzGraph::flat(2);
    auto density = [](const Point& x) { return std::exp(-2 * ((x[0] - 0.3) * (x[0] - 0.3) + x[1] * x[1])); };
    std::vector<double> fits;
    for (int panels : {8, 16}) {
        const auto g = grid(2, 6.0, panels, 4, 12);
        const auto u = PolarGridFunction::sample(g, density);
        auto t = PolarGridFunction::zeros(g);
        t.values = singular_Tk_apply(u, flat, 1, g->nodes(), spec).values;
        double fit = 0;
        for (double r : {0.25, 0.5, 1.0, 2.0})
            fit = std::max(fit, seminorm(t, r, mc.p) / singular_estimate_rhs(u, r, mc));
        fits.push_back(fit);
    }
    CHECK(std::isfinite(fits[0]));
    CHECK(fits[0] > 0);
    CHECK(std::abs(fits[1] / fits[0] - 1) < 0.2);
}
