#include "layerpot/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "layerpot/conditions.hpp"
#include "layerpot/parallel.hpp"

namespace layerpot {

namespace {

double norm2(const Point& x) {
    double s = 0;
    for (double c : x) s += c * c;
    return s;
}

PolarGridFunction from_values(std::shared_ptr<const PolarGrid> g, std::vector<double> v) {
    PolarGridFunction u = PolarGridFunction::zeros(std::move(g));
    u.values = std::move(v);
    return u;
}

}  // namespace

CollocationSystem assemble(const LipschitzGraph& surf, std::shared_ptr<const PolarGrid> grid, const QuadratureSpec& spec,
                           const ModelConstants& mc) {
    if (!grid) throw Error(ErrorCode::InvalidInput, "assembly needs a grid");
    if (grid->dim() != surf.dim()) throw Error(ErrorCode::InvalidInput, "surface and grid dimensions differ");
    spec.validate();
    if (surf.lambda0() > mc.lambda_star) {
        std::ostringstream os;
        os << "Lipschitz constant " << surf.lambda0() << " exceeds lambda_star " << mc.lambda_star;
        throw Error(ErrorCode::SurfaceTooRough, os.str());
    }
    CollocationSystem sys{grid, surf, spec, grid->nodes(), Eigen::MatrixXd()};
    const std::size_t n = grid->size();
    sys.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<std::vector<double>> rows(n);
    parallel_for(n, [&](std::size_t i) { rows[i] = single_layer_row(*grid, surf, sys.targets[i], spec); });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            sys.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    return sys;
}

std::vector<double> default_probe_radii(const PolarGrid& grid, int count) {
    std::vector<double> r;
    const double lo = grid.r_max() / 64, hi = grid.r_max() / 4;
    for (int i = 0; i < count; ++i) r.push_back(lo * std::pow(hi / lo, count > 1 ? double(i) / (count - 1) : 0.0));
    return r;
}

double verify_solution_bound(const PolarGridFunction& u, const PolarGridFunction& f, const LipschitzGraph& surf,
                             const ModelConstants& mc, const std::vector<double>& probe_radii) {
    const GridGradient grad = grid_gradient(f);
    double c3 = 0;
    for (double r : probe_radii) {
        const double lhs = seminorm(u, r, mc.p);
        const double rhs = solution_bound_rhs(grad, surf, r, mc);
        if (!(rhs > 0)) {
            if (lhs > 0) {
                std::ostringstream os;
                os << "bound right side vanishes at r = " << r << " while N_p(u, r) = " << lhs;
                throw Error(ErrorCode::ZeroRHS, os.str());
            }
            continue;
        }
        c3 = std::max(c3, lhs / rhs);
    }
    return c3;
}

SolveResult solve(const CollocationSystem& sys, const std::vector<double>& f, const SolveOptions& opt) {
    const Eigen::Index n = sys.matrix.cols();
    if (static_cast<Eigen::Index>(f.size()) != sys.matrix.rows())
        throw Error(ErrorCode::InvalidInput, "right side size does not match the targets");
    for (double v : f)
        if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "right side has non-finite samples");
    if (opt.mc.N != sys.grid->dim()) throw Error(ErrorCode::InvalidInput, "model dimension differs from the grid");

    const Eigen::Map<const Eigen::VectorXd> b(f.data(), static_cast<Eigen::Index>(f.size()));
    Eigen::BDCSVD<Eigen::MatrixXd> svd(sys.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    SolveDiagnostics d;
    d.unknowns = static_cast<int>(n);
    d.sigma_max = s.size() ? s(0) : 0.0;
    const double cut = opt.rcond * d.sigma_max;
    Eigen::VectorXd coef = svd.matrixU().transpose() * b;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (s(k) > cut && s(k) > 0) {
            coef(k) /= s(k);
            ++d.rank;
            d.sigma_min_kept = s(k);
        } else {
            coef(k) = 0;
        }
    }
    const Eigen::VectorXd x = svd.matrixV() * coef;
    const double bn = b.norm();
    d.residual_rel = bn > 0 ? (sys.matrix * x - b).norm() / bn : 0.0;
    if (d.rank < 0.9 * static_cast<double>(n)) {
        d.ill_conditioned = true;
        std::ostringstream os;
        os << "IllConditioned: effective rank " << d.rank << " of " << n << " unknowns";
        d.warnings.push_back(os.str());
    }

    SolveResult out{from_values(sys.grid, std::vector<double>(x.data(), x.data() + x.size())), d};
    const PolarGridFunction fg = from_values(sys.grid, f);
    const GridGradient grad = grid_gradient(fg);
    const double num = weighted_Lp_norm(out.u, opt.gamma, opt.mc);
    const double den = weighted_sobolev_norm(fg, opt.Gamma, opt.mc, &grad).gradient_part;
    out.diag.ratio_norms = den > 0 ? num / den : 0.0;
    const std::vector<double> radii = opt.probe_radii.empty() ? default_probe_radii(*sys.grid) : opt.probe_radii;
    for (double r : radii) out.diag.seminorm_profile.emplace_back(r, seminorm(out.u, r, opt.mc.p));
    if (opt.fit_bound) {
        try {
            out.diag.bound_fit_c3 = verify_solution_bound(out.u, fg, sys.surface, opt.mc, radii);
        } catch (const Error& e) {
            out.diag.warnings.push_back(e.what());
        }
    }
    return out;
}

std::vector<BasketDensity> density_basket(int N) {
    const double shift = 0.5;
    return {
        {"gaussian", [](const Point& x) { return std::exp(-norm2(x)); }},
        {"offset_gaussian",
         [shift](const Point& x) {
             Point y = x;
             y[0] -= shift;
             return std::exp(-2 * norm2(y));
         }},
        {"wide_gaussian", [](const Point& x) { return std::exp(-0.6 * norm2(x)); }},
        {"ring",
         [](const Point& x) {
             const double r = std::sqrt(norm2(x)) - 1.5;
             return std::exp(-4 * r * r);
         }},
        {"ballcap",
         [](const Point& x) {
             const double t = 1 - norm2(x) / 4;
             return t > 0 ? t * t * t : 0.0;
         }},
        {"dipole", [N](const Point& x) { return x[static_cast<std::size_t>(N - 1)] * std::exp(-norm2(x)); }},
    };
}

std::shared_ptr<const PolarGrid> GridLevel::make(int N) const {
    return std::make_shared<const PolarGrid>(PolarGrid::make(N, r_max, panels, order, angular));
}

IsomorphismReport probe_isomorphism(const LipschitzGraph& surf, const RadialWeight& gamma, const RadialWeight& Gamma,
                                    const ModelConstants& mc, const std::vector<GridLevel>& levels,
                                    const QuadratureSpec& spec) {
    if (levels.empty()) throw Error(ErrorCode::InvalidInput, "isomorphism probe needs at least one level");
    IsomorphismReport rep;
    try {
        rep.conditions_verdict = to_string(check_isomorphism_logderiv(gamma, Gamma, surf, mc).verdict);
    } catch (const Error& e) {
        rep.conditions_verdict = to_string(e.code());
        rep.warnings.push_back(e.what());
    }
    const auto basket = density_basket(surf.dim());
    for (const auto& b : basket) rep.basket.push_back(b.name);
    for (const GridLevel& lv : levels) {
        const auto grid = lv.make(surf.dim());
        const CollocationSystem sys = assemble(surf, grid, spec, mc);
        IsomorphismLevel out{lv, {}, {}, 0.0, 0.0};
        for (const auto& b : basket) {
            const PolarGridFunction u = PolarGridFunction::sample(grid, b.eval);
            const Eigen::Map<const Eigen::VectorXd> uv(u.values.data(), static_cast<Eigen::Index>(u.values.size()));
            const Eigen::VectorXd fv = sys.matrix * uv;
            const PolarGridFunction f = from_values(grid, std::vector<double>(fv.data(), fv.data() + fv.size()));
            const double num = weighted_Lp_norm(u, gamma, mc);
            const double den = weighted_sobolev_norm(f, Gamma, mc).gradient_part;
            out.forward.push_back(den > 0 ? num / den : 0.0);
            out.reverse.push_back(num > 0 ? den / num : 0.0);
        }
        out.max_forward = *std::max_element(out.forward.begin(), out.forward.end());
        out.max_reverse = *std::max_element(out.reverse.begin(), out.reverse.end());
        rep.levels.push_back(std::move(out));
    }
    if (rep.levels.size() >= 2) {
        const auto& a = rep.levels[rep.levels.size() - 2];
        const auto& b = rep.levels.back();
        rep.growth_forward = b.max_forward / a.max_forward;
        rep.growth_reverse = b.max_reverse / a.max_reverse;
        rep.assessment = rep.growth_forward < 1.25 && rep.growth_reverse < 1.25 ? "consistent" : "not consistent";
    } else {
        rep.assessment = "undetermined";
    }
    return rep;
}

Manufactured manufactured_radial(const LipschitzGraph& surf, std::shared_ptr<const PolarGrid> grid,
                                 const RadialFunction& profile, double support, const QuadratureSpec& fine) {
    Manufactured m{PolarGridFunction::radial(grid, profile), {}};
    support = std::min(support, grid->r_max());
    if (surf.is_flat()) {
        const int N = grid->dim();
        std::vector<double> radial(grid->n_radial());
        parallel_for(radial.size(), [&](std::size_t i) {
            radial[i] = riesz_oracle_radial(profile, N, grid->radial_nodes()[i], support);
        });
        m.f.resize(grid->size());
        for (std::size_t i = 0; i < grid->n_radial(); ++i)
            for (std::size_t j = 0; j < grid->n_angular(); ++j) m.f[grid->index(i, j)] = radial[i];
    } else {
        QuadratureSpec spec = fine;
        if (support < grid->r_max()) spec.split_radii.push_back(support);
        m.f = single_layer_apply(m.u0, surf, grid->nodes(), spec).values;
    }
    return m;
}

Manufactured manufactured_gaussian(const LipschitzGraph& surf, std::shared_ptr<const PolarGrid> grid,
                                   const QuadratureSpec& fine) {
    return manufactured_radial(surf, grid, [](double s) { return std::exp(-s * s); }, grid->r_max(), fine);
}

double relative_error(const PolarGridFunction& u, const PolarGridFunction& u0, const RadialWeight& gamma,
                      const ModelConstants& mc) {
    if (u.grid.get() != u0.grid.get() || u.values.size() != u0.values.size())
        throw Error(ErrorCode::InvalidInput, "functions live on different grids");
    PolarGridFunction d = u;
    for (std::size_t k = 0; k < d.values.size(); ++k) d.values[k] -= u0.values[k];
    const double ref = weighted_Lp_norm(u0, gamma, mc);
    return ref > 0 ? weighted_Lp_norm(d, gamma, mc) / ref : weighted_Lp_norm(d, gamma, mc);
}

}  // namespace layerpot
