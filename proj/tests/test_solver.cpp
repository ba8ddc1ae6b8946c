#include <cmath>

#include "doctest.h"
#include "layerpot/solver.hpp"

using namespace layerpot;

namespace {

std::shared_ptr<const PolarGrid> small_grid() {
    return std::make_shared<const PolarGrid>(PolarGrid::make(2, 6.0, 8, 4, 8));
}

const ModelConstants mc2 = ModelConstants::make(2, 2.0);

}  // namespace

TEST_CASE("assembled rows reproduce operator application") {
    const auto g = small_grid();
    const auto spec = QuadratureSpec::defaults(2);
    const auto sys = assemble(LipschitzGraph::flat(2), g, spec, mc2);
    const auto u = PolarGridFunction::radial(g, [](double r) { return std::exp(-r * r); });
    const Eigen::Map<const Eigen::VectorXd> uv(u.values.data(), static_cast<Eigen::Index>(u.values.size()));
    const Eigen::VectorXd Au = sys.matrix * uv;
    const auto direct = single_layer_apply(u, LipschitzGraph::flat(2), sys.targets, spec).values;
    double err = 0;
    for (std::size_t k = 0; k < direct.size(); ++k)
        err = std::max(err, std::abs(Au(static_cast<Eigen::Index>(k)) - direct[k]) / std::abs(direct[k]));
    CHECK(err < 1e-6);
    CHECK((sys.matrix * Eigen::VectorXd::Zero(sys.matrix.cols())).norm() == 0.0);
}

TEST_CASE("cone entries are a small perturbation of flat entries") {
    const auto g = small_grid();
    const auto spec = QuadratureSpec::defaults(2);
    const double eps = 0.05;
    const auto flat = assemble(LipschitzGraph::flat(2), g, spec, mc2);
    const auto cone = assemble(LipschitzGraph::cone(2, eps), g, spec, mc2);
    double worst = 0;
    for (Eigen::Index i = 0; i < flat.matrix.rows(); ++i)
        for (Eigen::Index k = 0; k < flat.matrix.cols(); ++k) {
            const double a = flat.matrix(i, k);
            if (a != 0) worst = std::max(worst, std::abs(cone.matrix(i, k) - a) / std::abs(a));
        }
    CHECK(worst <= 3 * eps);
    CHECK(worst > 0);
}

TEST_CASE("rough surfaces are refused") {
    auto mc = ModelConstants::make(2, 2.0);
    try {
        assemble(LipschitzGraph::cone(2, 0.9), small_grid(), QuadratureSpec::defaults(2), mc);
        FAIL("expected SurfaceTooRough");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SurfaceTooRough);
    }
}

TEST_CASE("manufactured recovery on a coarse layout") {
    const auto g = small_grid();
    const auto spec = QuadratureSpec::defaults(2);
    QuadratureSpec fine = spec;
    fine.angular_order = 96;
    fine.radial_order = 10;
    SolveOptions opt;
    opt.mc = mc2;
    for (const auto& surf : {LipschitzGraph::flat(2), LipschitzGraph::cone(2, 0.05)}) {
        const auto sys = assemble(surf, g, spec, mc2);
        const auto m = manufactured_gaussian(surf, g, fine);
        const auto r = solve(sys, m.f, opt);
        CHECK(relative_error(r.u, m.u0, opt.gamma, mc2) < 0.05);
        CHECK(r.diag.residual_rel < 1e-8);
        CHECK_FALSE(r.diag.ill_conditioned);
        REQUIRE(r.diag.bound_fit_c3.has_value());
        CHECK(std::isfinite(*r.diag.bound_fit_c3));
        CHECK(r.diag.ratio_norms > 0);
        CHECK(r.diag.seminorm_profile.size() == default_probe_radii(*g).size());
    }
}

TEST_CASE("homogeneous data gives the zero solution") {
    const auto g = small_grid();
    const auto sys = assemble(LipschitzGraph::flat(2), g, QuadratureSpec::defaults(2), mc2);
    SolveOptions opt;
    opt.mc = mc2;
    const auto r = solve(sys, std::vector<double>(g->size(), 0.0), opt);
    double mx = 0;
    for (double v : r.u.values) mx = std::max(mx, std::abs(v));
    CHECK(mx == 0.0);
    CHECK(r.diag.bound_fit_c3.value_or(-1) == 0.0);
}

TEST_CASE("rotating the data rotates the solution") {
    const auto g = small_grid();
    const auto sys = assemble(LipschitzGraph::flat(2), g, QuadratureSpec::defaults(2), mc2);
    const auto u0 = PolarGridFunction::sample(g, [](const Point& x) { return std::exp(-2 * ((x[0] - 0.5) * (x[0] - 0.5) + x[1] * x[1])); });
    const Eigen::Map<const Eigen::VectorXd> uv(u0.values.data(), static_cast<Eigen::Index>(u0.values.size()));
    const Eigen::VectorXd fv = sys.matrix * uv;
    const std::size_t na = g->n_angular();
    std::vector<double> f(fv.data(), fv.data() + fv.size()), frot(f.size());
    for (std::size_t i = 0; i < g->n_radial(); ++i)
        for (std::size_t j = 0; j < na; ++j) frot[g->index(i, (j + 1) % na)] = f[g->index(i, j)];
    SolveOptions opt;
    opt.mc = mc2;
    opt.fit_bound = false;
    const auto a = solve(sys, f, opt), b = solve(sys, frot, opt);
    double err = 0, scale = 0;
    for (std::size_t i = 0; i < g->n_radial(); ++i)
        for (std::size_t j = 0; j < na; ++j) {
            err = std::max(err, std::abs(b.u.at(i, (j + 1) % na) - a.u.at(i, j)));
            scale = std::max(scale, std::abs(a.u.at(i, j)));
        }
    CHECK(err / scale < 1e-6);
}

TEST_CASE("solution bound fit") {
    const auto g = small_grid();
    const auto z = PolarGridFunction::zeros(g);
    CHECK(verify_solution_bound(z, z, LipschitzGraph::flat(2), mc2, default_probe_radii(*g)) == 0.0);
    // u nonzero on an annulus where the data's gradient vanishes identically
    const auto u = PolarGridFunction::radial(g, [](double) { return 1.0; });
    CHECK_THROWS_AS(verify_solution_bound(u, z, LipschitzGraph::flat(2), mc2, {0.5}), Error);
}

TEST_CASE("isomorphism probe on a flat surface") {
    const std::vector<GridLevel> levels{{6.0, 6, 4, 8}, {6.0, 8, 4, 8}};
    const auto rep = probe_isomorphism(LipschitzGraph::flat(2), RadialWeight::power(0), RadialWeight::power(0), mc2,
                                       levels, QuadratureSpec::defaults(2));
    CHECK(rep.basket.size() >= 5);
    CHECK(rep.conditions_verdict == "PreconditionViolated");
    REQUIRE(rep.levels.size() == 2);
    for (const auto& lv : rep.levels)
        for (std::size_t k = 0; k < lv.forward.size(); ++k) CHECK(lv.forward[k] * lv.reverse[k] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.growth_forward < 1.25);
    CHECK(rep.growth_reverse < 1.25);
    CHECK(rep.assessment == "consistent");
}
