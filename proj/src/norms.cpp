#include "layerpot/norms.hpp"

#include <algorithm>
#include <cmath>

#include "layerpot/parallel.hpp"

namespace layerpot {

namespace {

const PolarGrid& grid_of(const std::vector<const PolarGridFunction*>& v) {
    if (v.empty() || !v.front() || !v.front()->grid) throw Error(ErrorCode::InvalidInput, "no grid function given");
    const auto& g = v.front()->grid;
    for (const auto* c : v) {
        if (!c || c->grid.get() != g.get()) throw Error(ErrorCode::InvalidInput, "components live on different grids");
        if (c->values.size() != g->size()) throw Error(ErrorCode::InvalidInput, "grid function size mismatch");
    }
    return *g;
}

// int_a^b k(s) sum_j w_j h(|v(s, omega_j)|) ds over the panels of the grid.
template <class K, class H>
double radial_angular(const std::vector<const PolarGridFunction*>& v, double a, double b, K&& kfac, H&& h) {
    const PolarGrid& g = grid_of(v);
    a = std::max(a, 0.0);
    b = std::min(b, g.r_max());
    if (!(b > a)) return 0.0;
    std::vector<double> cuts{a, b};
    for (double x : g.breaks())
        if (x > a && x < b) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    const GaussRule& gl = gauss_legendre(g.order() + 3);
    const std::size_t na = g.n_angular();
    std::vector<double> lw;
    std::vector<double> terms;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double lo = cuts[c], half = 0.5 * (cuts[c + 1] - lo);
        for (std::size_t m = 0; m < gl.x.size(); ++m) {
            const double s = lo + half * (1 + gl.x[m]);
            std::size_t first = 0;
            if (!g.radial_stencil(s, first, lw)) continue;
            double ang = 0;
            for (std::size_t j = 0; j < na; ++j) {
                double mag2 = 0;
                for (std::size_t k = 0; k < v.size(); ++k) {
                    double val = 0;
                    for (std::size_t l = 0; l < lw.size(); ++l) val += lw[l] * v[k]->values[g.index(first + l, j)];
                    mag2 += val * val;
                }
                ang += g.sphere_weights()[j] * h(std::sqrt(mag2));
            }
            terms.push_back(half * gl.w[m] * kfac(s) * ang);
        }
    }
    return pairwise_sum(terms);
}

// Points where N_p(u, s) loses smoothness: s or 2s on a panel boundary.
std::vector<double> seminorm_cuts(const PolarGrid& g, double lo, double hi) {
    std::vector<double> c{lo, hi};
    for (double b : g.breaks())
        for (double x : {b, 0.5 * b})
            if (x > lo && x < hi) c.push_back(x);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

double piecewise(const RadialFunction& f, const std::vector<double>& cuts) {
    double s = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += adaptive_integral(f, cuts[i], cuts[i + 1], 1e-11);
    return s;
}

std::vector<const PolarGridFunction*> pointers(const GridGradient& g) {
    std::vector<const PolarGridFunction*> v;
    for (const auto& c : g) v.push_back(&c);
    return v;
}

void check_p(double p) {
    if (!(p >= 1) || !std::isfinite(p)) throw Error(ErrorCode::InvalidInput, "seminorm exponent must be >= 1");
}

}  // namespace

GridGradient grid_gradient(const PolarGridFunction& f) {
    f.validate();
    const auto comps = f.grid->gradient(f.values);
    GridGradient out;
    for (const auto& c : comps) {
        PolarGridFunction g = PolarGridFunction::zeros(f.grid);
        g.values = c;
        out.push_back(std::move(g));
    }
    return out;
}

double annulus_lp_integral(const std::vector<const PolarGridFunction*>& v, double a, double b, double p) {
    check_p(p);
    const int N = grid_of(v).dim();
    return radial_angular(
        v, a, b, [N](double s) { return std::pow(s, N - 1); }, [p](double m) { return std::pow(m, p); });
}

double annulus_lp_integral(const PolarGridFunction& u, double a, double b, double p) {
    return annulus_lp_integral(std::vector<const PolarGridFunction*>{&u}, a, b, p);
}

double annulus_riesz_mass(const PolarGridFunction& u, double a, double b) {
    return radial_angular(
        {&u}, a, b, [](double) { return 1.0; }, [](double m) { return m; });
}

double seminorm(const GridGradient& g, double r, double p) {
    if (!(r > 0) || !std::isfinite(r)) throw Error(ErrorCode::OutOfCoverage, "seminorm radius must be positive");
    const auto v = pointers(g);
    const int N = grid_of(v).dim();
    return std::pow(annulus_lp_integral(v, r, 2 * r, p) / std::pow(r, N), 1.0 / p);
}

double seminorm(const PolarGridFunction& u, double r, double p) {
    if (!(r > 0) || !std::isfinite(r)) throw Error(ErrorCode::OutOfCoverage, "seminorm radius must be positive");
    return std::pow(annulus_lp_integral(u, r, 2 * r, p) / std::pow(r, u.grid->dim()), 1.0 / p);
}

double seminorm(const PolarGridFunction& u, double r, const ModelConstants& mc) { return seminorm(u, r, mc.p); }

double weighted_Lp_norm(const PolarGridFunction& u, const RadialWeight& gamma, const ModelConstants& mc) {
    u.validate();
    const PolarGrid& g = *u.grid;
    const double p = mc.p;
    std::vector<double> terms;
    terms.reserve(g.size());
    for (std::size_t i = 0; i < g.n_radial(); ++i) {
        const double gp = std::pow(gamma.eval(g.radial_nodes()[i]), p);
        for (std::size_t j = 0; j < g.n_angular(); ++j)
            terms.push_back(g.volume_weight(i, j) * gp * std::pow(std::abs(u.at(i, j)), p));
    }
    return std::pow(pairwise_sum(terms), 1.0 / p);
}

SobolevNorm weighted_sobolev_norm(const PolarGridFunction& f, const RadialWeight& Gamma, const ModelConstants& mc,
                                  const GridGradient* grad) {
    f.validate();
    GridGradient own;
    if (!grad) {
        own = grid_gradient(f);
        grad = &own;
    }
    const PolarGrid& g = *f.grid;
    if (grad->size() != static_cast<std::size_t>(g.dim())) throw Error(ErrorCode::InvalidInput, "gradient needs N components");
    const double p = mc.p;
    std::vector<double> t1, t2;
    for (std::size_t i = 0; i < g.n_radial(); ++i) {
        const double r = g.radial_nodes()[i];
        const double gp = std::pow(Gamma.eval(r), p);
        for (std::size_t j = 0; j < g.n_angular(); ++j) {
            const std::size_t k = g.index(i, j);
            double m2 = 0;
            for (const auto& c : *grad) m2 += c.values[k] * c.values[k];
            const double w = g.volume_weight(i, j) * gp;
            t1.push_back(w * std::pow(std::abs(f.values[k]) / r, p));
            t2.push_back(w * std::pow(m2, 0.5 * p));
        }
    }
    const double a = pairwise_sum(t1), b = pairwise_sum(t2);
    return {std::pow(a + b, 1.0 / p), std::pow(b, 1.0 / p)};
}

double xp_norm(const PolarGridFunction& u, const ModelConstants& mc) {
    u.validate();
    const PolarGrid& g = *u.grid;
    const int N = g.dim();
    const double p = mc.p;
    auto np = [&](double s) { return seminorm(u, s, p); };
    double v = piecewise([&](double s) { return std::pow(s, N - 1) * np(s); }, seminorm_cuts(g, 0.0, std::min(1.0, g.r_max())));
    if (g.r_max() > 1) v += piecewise(np, seminorm_cuts(g, 1.0, g.r_max()));
    return v;
}

double y_norm(const PolarGridFunction& f, const ModelConstants& mc, const GridGradient* grad) {
    GridGradient own;
    if (!grad) {
        own = grid_gradient(f);
        grad = &own;
    }
    const PolarGrid& g = *f.grid;
    const double M = mc.M(), p = mc.p;
    auto np = [&](double s) { return seminorm(*grad, s, p); };
    double v = piecewise([&](double s) { return std::pow(s, M - 1) * np(s); }, seminorm_cuts(g, 0.0, std::min(1.0, g.r_max())));
    if (g.r_max() > 1) v += piecewise(np, seminorm_cuts(g, 1.0, g.r_max()));
    return v;
}

bool MassComparison::holds(double rel_tol) const {
    return left <= middle * (1 + rel_tol) + 1e-300 && middle <= right * (1 + rel_tol) + 1e-300;
}

MassComparison mass_comparison(const PolarGridFunction& u, double M1, double M2) {
    u.validate();
    if (!(M1 >= 0) || !(M2 > M1) || !std::isfinite(M2))
        throw Error(ErrorCode::InvalidInput, "mass comparison needs 0 <= M1 < M2 < inf");
    const PolarGrid& g = *u.grid;
    const int N = g.dim();
    MassComparison mc;
    mc.C = (N - 1.0) / (std::pow(2.0, N - 1) - 1.0);
    mc.left = annulus_riesz_mass(u, M1, M2);
    mc.right = annulus_riesz_mass(u, 0.5 * M1, 2 * M2);
    const double hi = std::min(M2, g.r_max());
    if (hi > 0.5 * M1)
        mc.middle = mc.C * piecewise([&](double rho) { return seminorm(u, rho, 1.0); }, seminorm_cuts(g, 0.5 * M1, hi));
    return mc;
}

double singular_estimate_rhs(const PolarGridFunction& u, double r, const ModelConstants& mc) {
    if (!(r > 0)) throw Error(ErrorCode::OutOfCoverage, "estimate radius must be positive");
    const PolarGrid& g = *u.grid;
    const int N = g.dim();
    const double p = mc.p;
    auto np = [&](double s) { return seminorm(u, s, p); };
    double v = piecewise([&](double s) { return std::pow(s / r, N) / s * np(s); }, seminorm_cuts(g, 0.0, std::min(r, g.r_max())));
    if (g.r_max() > r) v += piecewise([&](double s) { return np(s) / s; }, seminorm_cuts(g, r, g.r_max()));
    return v;
}

double solution_bound_rhs(const GridGradient& grad, const LipschitzGraph& surf, double r, const ModelConstants& mc) {
    if (!(r > 0)) throw Error(ErrorCode::OutOfCoverage, "estimate radius must be positive");
    const auto v = pointers(grad);
    const PolarGrid& g = grid_of(v);
    const double p = mc.p;
    const double M = g.dim() - mc.c2 * surf.lambda0();
    auto np = [&](double s) { return seminorm(grad, s, p); };
    double total =
        piecewise([&](double s) { return std::pow(s / r, M) / s * np(s); }, seminorm_cuts(g, 0.0, std::min(r, g.r_max())));
    if (g.r_max() > r) {
        auto far = [&](double s) {
            const double d = surf.is_flat() ? 0.0 : surf.dini_integral(r, s);
            return std::exp(mc.c1 * d) * np(s) / s;
        };
        total += piecewise(far, seminorm_cuts(g, r, g.r_max()));
    }
    return total;
}

}  // namespace layerpot
