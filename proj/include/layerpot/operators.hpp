#pragma once

// The single layer potential, the singular operators T_k and the gradient
// identity on a Lipschitz graph, evaluated by quadrature on rays centred at
// the target point.
//
// In polar coordinates y = x + rho * omega the weakly singular kernel of S
// times the Jacobian rho^{N-1} is bounded, so every ray is integrated from
// rho = 0 with Gauss rules on the pieces cut out by the radial panels of the
// density grid. T_k combines antipodal rays, which cancels the odd 1/rho part
// of its kernel; the shells of radius eps, eps/2, eps/4 around x provide the
// convergence check of the principal value.

#include <string>
#include <vector>

#include "layerpot/geometry.hpp"
#include "layerpot/polar_grid.hpp"

namespace layerpot {

struct QuadratureSpec {
    /// The density is treated as zero outside r_min <= |y| <= r_max.
    double r_min = 0.0;
    double r_max = kInf;
    /// Principal-value shell radius in units of the local radial spacing.
    double split_radius_factor = 2.0;
    /// Gauss points per ray segment.
    int radial_order = 8;
    /// Ray directions: count on the circle (N = 2) or azimuthal count with
    /// half as many cos(theta) nodes (N = 3). Must be even.
    int angular_order = 64;
    bool pv_symmetrization = true;
    /// Align the ray rule with the target and split it where rays graze the
    /// support boundary or a sphere in `split_radii`.
    bool tangent_splitting = true;
    /// Radii across which the density jumps.
    std::vector<double> split_radii;

    static QuadratureSpec defaults(int N);
    void validate() const;
    /// Coarser rule used for error estimates.
    QuadratureSpec coarse() const;
};

struct OperatorResult {
    std::vector<double> values;
    /// max |fine - coarse| over targets.
    double error_estimate = 0.0;
    std::vector<std::string> warnings;
};

/// S u(x) = int u(y) sqrt(1 + |grad phi(y)|^2) / |lambda(x) - lambda(y)|^{N-1} dy.
OperatorResult single_layer_apply(const PolarGridFunction& u, const LipschitzGraph& surf,
                                  const std::vector<Point>& targets, const QuadratureSpec& spec);

/// T_k u(x) = p.v. int (lambda(x) - lambda(y))_k / |lambda(x) - lambda(y)|^{N+1}
/// u(y) sqrt(1 + |grad phi(y)|^2) dy, k = 1..N+1. Throws PVNotConverged when
/// the shells around x do not shrink like a bounded integrand.
OperatorResult singular_Tk_apply(const PolarGridFunction& u, const LipschitzGraph& surf, int k,
                                 const std::vector<Point>& targets, const QuadratureSpec& spec);

struct GradientResult {
    /// One gradient (N components) per target.
    std::vector<Point> values;
    double error_estimate = 0.0;
    std::vector<std::string> warnings;
};

/// grad S u = (1 - N) (T_k u + d_k phi T_{N+1} u), k = 1..N.
GradientResult gradient_single_layer(const PolarGridFunction& u, const LipschitzGraph& surf,
                                     const std::vector<Point>& targets, const QuadratureSpec& spec);

/// Central differences of S u with step h, for checking the gradient identity.
std::vector<Point> gradient_finite_difference(const PolarGridFunction& u, const LipschitzGraph& surf,
                                              const std::vector<Point>& targets, const QuadratureSpec& spec,
                                              double h);

/// Coefficients c with S u(x) = sum_j c_j u_j for every density on the grid.
std::vector<double> single_layer_row(const PolarGrid& grid, const LipschitzGraph& surf, const Point& x,
                                     const QuadratureSpec& spec);

/// Flat surface, radial density: S u(x) = int_0^inf u(s) s^{N-1} K_N(|x|, s) ds
/// with the spherical mean K_N of |x - y|^{1-N} in closed form
/// (complete elliptic integral for N = 2, logarithm for N = 3).
/// u vanishes beyond `support`; `breaks` lists its discontinuities.
double riesz_oracle_radial(const RadialFunction& u, int N, double target_radius, double support,
                           const std::vector<double>& breaks = {}, double tol = 1e-12);

/// int_{S^{N-1}} |x - s omega|^{1-N} d omega for |x| = t.
double riesz_sphere_mean(int N, double t, double s);

}  // namespace layerpot
