#pragma once

// Collocation solver for S u = f on a polar grid, with weighted-norm
// diagnostics: norm ratios, seminorm profiles and the fitted constant of the
// solution bound.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "layerpot/geometry.hpp"
#include "layerpot/norms.hpp"
#include "layerpot/operators.hpp"
#include "layerpot/polar_grid.hpp"
#include "layerpot/weights.hpp"

namespace layerpot {

/// Square Nystrom system: unknowns are the grid samples of u, targets are
/// the grid nodes.
struct CollocationSystem {
    std::shared_ptr<const PolarGrid> grid;
    LipschitzGraph surface;
    QuadratureSpec spec;
    std::vector<Point> targets;
    Eigen::MatrixXd matrix;
};

/// Throws SurfaceTooRough if the surface's Lambda0 exceeds mc.lambda_star.
CollocationSystem assemble(const LipschitzGraph& surf, std::shared_ptr<const PolarGrid> grid,
                           const QuadratureSpec& spec, const ModelConstants& mc);

struct SolveOptions {
    RadialWeight gamma = RadialWeight::power(0);
    RadialWeight Gamma = RadialWeight::power(0);
    ModelConstants mc = ModelConstants::make(2, 2.0);
    /// Singular values below rcond * sigma_max are dropped.
    double rcond = 1e-10;
    /// Radii of the seminorm profile and of the bound fit; empty selects a
    /// geometric set inside the grid.
    std::vector<double> probe_radii;
    bool fit_bound = true;
};

struct SolveDiagnostics {
    double residual_rel = 0.0;
    /// ||u||_{L^p, gamma} / gradient part of ||f||_{Gamma}.
    double ratio_norms = 0.0;
    std::vector<std::pair<double, double>> seminorm_profile;
    std::optional<double> bound_fit_c3;
    int rank = 0;
    int unknowns = 0;
    double sigma_max = 0.0;
    double sigma_min_kept = 0.0;
    bool ill_conditioned = false;
    std::vector<std::string> warnings;
};

struct SolveResult {
    PolarGridFunction u;
    SolveDiagnostics diag;
};

/// Truncated-SVD least squares. f holds the samples at sys.targets.
SolveResult solve(const CollocationSystem& sys, const std::vector<double>& f, const SolveOptions& opt = {});

/// Geometric probe radii r_max/64 ... r_max/4 (seminorms need 2r inside the grid).
std::vector<double> default_probe_radii(const PolarGrid& grid, int count = 9);

/// Smallest c3 with N_p(u, r) <= c3 * RHS(r) at every probe radius. Throws
/// ZeroRHS when the right side vanishes while the left does not.
double verify_solution_bound(const PolarGridFunction& u, const PolarGridFunction& f, const LipschitzGraph& surf,
                             const ModelConstants& mc, const std::vector<double>& probe_radii);

/// Named test densities used by the isomorphism probe and manufactured runs.
struct BasketDensity {
    std::string name;
    std::function<double(const Point&)> eval;
};
std::vector<BasketDensity> density_basket(int N);

struct GridLevel {
    double r_max = 6.0;
    int panels = 16;
    int order = 4;
    int angular = 16;
    std::shared_ptr<const PolarGrid> make(int N) const;
};

struct IsomorphismLevel {
    GridLevel level;
    /// Per basket member: ||u||_gamma / |S u|_{Gamma} and its reverse.
    std::vector<double> forward;
    std::vector<double> reverse;
    double max_forward = 0.0;
    double max_reverse = 0.0;
};

struct IsomorphismReport {
    std::vector<std::string> basket;
    std::vector<IsomorphismLevel> levels;
    /// Level-to-level growth of the maximal ratios (last two levels).
    double growth_forward = 0.0;
    double growth_reverse = 0.0;
    /// "Holds", "Fails", ... from the log-derivative conditions, or the error
    /// code when their preconditions are not met.
    std::string conditions_verdict;
    /// "consistent" when both growth factors are below 1.25.
    std::string assessment;
    std::vector<std::string> warnings;
};

IsomorphismReport probe_isomorphism(const LipschitzGraph& surf, const RadialWeight& gamma, const RadialWeight& Gamma,
                                    const ModelConstants& mc, const std::vector<GridLevel>& levels,
                                    const QuadratureSpec& spec);

/// Manufactured data: u0 = exp(-|x|^2) and f = S u0 at the grid nodes. Flat
/// surfaces use the radial oracle; others apply the operator with `fine`.
struct Manufactured {
    PolarGridFunction u0;
    std::vector<double> f;
};
Manufactured manufactured_gaussian(const LipschitzGraph& surf, std::shared_ptr<const PolarGrid> grid,
                                   const QuadratureSpec& fine);
/// Same for a radial profile supported in [0, support].
Manufactured manufactured_radial(const LipschitzGraph& surf, std::shared_ptr<const PolarGrid> grid,
                                 const RadialFunction& profile, double support, const QuadratureSpec& fine);

/// ||u - u0||_{L^p, gamma} / ||u0||_{L^p, gamma}.
double relative_error(const PolarGridFunction& u, const PolarGridFunction& u0, const RadialWeight& gamma,
                      const ModelConstants& mc);

}  // namespace layerpot
