#pragma once

// Norms and seminorms of grid functions: annular seminorms N_p(u, r),
// weighted Lebesgue and Sobolev norms, the X^p and Y^{1,p}_M norms and the
// majorants appearing in the seminorm estimates.

#include <vector>

#include "layerpot/geometry.hpp"
#include "layerpot/polar_grid.hpp"
#include "layerpot/weights.hpp"

namespace layerpot {

/// Cartesian gradient samples, one grid function per component.
using GridGradient = std::vector<PolarGridFunction>;

/// Differentiates the interpolant: radial panel polynomials and the
/// trigonometric / Lagrange angular interpolants.
GridGradient grid_gradient(const PolarGridFunction& f);

/// int_{a <= |x| < b} |v(x)|^p dx, v the interpolant (vector-valued: the
/// Euclidean norm of the components). Zero beyond the grid.
double annulus_lp_integral(const std::vector<const PolarGridFunction*>& v, double a, double b, double p);
double annulus_lp_integral(const PolarGridFunction& u, double a, double b, double p);
/// int_{a <= |x| < b} |u(x)| / |x|^{N-1} dx.
double annulus_riesz_mass(const PolarGridFunction& u, double a, double b);

/// N_p(u, r) = (r^{-N} int_{r <= |x| < 2r} |u|^p dx)^{1/p}. Throws OutOfCoverage
/// unless r > 0 is finite.
double seminorm(const PolarGridFunction& u, double r, double p);
double seminorm(const PolarGridFunction& u, double r, const ModelConstants& mc);
double seminorm(const GridGradient& g, double r, double p);

/// (int gamma^p |u|^p dx)^{1/p} by the grid tensor rule.
double weighted_Lp_norm(const PolarGridFunction& u, const RadialWeight& gamma, const ModelConstants& mc);

struct SobolevNorm {
    double full = 0.0;
    double gradient_part = 0.0;
};

/// full = (int Gamma^p |x|^{-p} |f|^p + int Gamma^p |grad f|^p)^{1/p},
/// gradient_part = (int Gamma^p |grad f|^p)^{1/p}. The gradient is computed
/// from the grid when not supplied.
SobolevNorm weighted_sobolev_norm(const PolarGridFunction& f, const RadialWeight& Gamma, const ModelConstants& mc,
                                  const GridGradient* grad = nullptr);

/// int_0^1 s^N N_p(u, s) ds/s + int_1^inf N_p(u, s) ds.
double xp_norm(const PolarGridFunction& u, const ModelConstants& mc);
/// int_0^1 s^M N_p(grad f, s) ds/s + int_1^inf N_p(grad f, s) ds.
double y_norm(const PolarGridFunction& f, const ModelConstants& mc, const GridGradient* grad = nullptr);

/// The three quantities of the two-sided comparison between the Riesz mass on
/// [M1, M2) and the integral of N_1 over [M1/2, M2).
struct MassComparison {
    double left = 0.0;    ///< int_{M1 <= |x| < M2} |u| / |x|^{N-1}
    double middle = 0.0;  ///< C int_{M1/2}^{M2} N_1(u, rho) drho
    double right = 0.0;   ///< int_{M1/2 <= |x| < 2 M2} |u| / |x|^{N-1}
    double C = 0.0;       ///< (N-1) / (2^{N-1} - 1)
    bool holds(double rel_tol = 1e-8) const;
};
MassComparison mass_comparison(const PolarGridFunction& u, double M1, double M2);

/// int_0^r (s/r)^N N_p(u, s) ds/s + int_r^inf N_p(u, s) ds/s.
double singular_estimate_rhs(const PolarGridFunction& u, double r, const ModelConstants& mc);

/// int_0^r (s/r)^M N_p(grad f, s) ds/s
///   + int_r^inf exp(c1 int_r^s Lambda dnu/nu) N_p(grad f, s) ds/s.
double solution_bound_rhs(const GridGradient& grad, const LipschitzGraph& surf, double r, const ModelConstants& mc);

}  // namespace layerpot
