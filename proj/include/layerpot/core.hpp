#pragma once

// Shared numerical substrate: model constants, radial probe grids, 1-D
// adaptive quadrature, tail classification and supremum scanning.

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace layerpot {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode {
    NonFinite,
    ToleranceNotMet,
    InsufficientSamples,
    DomainError,
    NotDifferentiable,
    GradientUnavailable,
    PreconditionViolated,
    OutOfCoverage,
    PVNotConverged,
    Truncation,
    SurfaceTooRough,
    ZeroRHS,
    DivergentB,
    InvalidInput,
};

std::string to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(to_string(code) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

using RadialFunction = std::function<double(double)>;

/// Dimension, exponent and the abstract constants of the theory.
///
/// `lambda0` is the global Lipschitz constant of the active surface; it is
/// copied in from the surface when a run is set up.
struct ModelConstants {
    int N = 3;
    double p = 2.0;
    double c1 = 1.0;
    double c2 = 1.0;
    double c3 = 1.0;
    double lambda_star = 0.5;
    double lambda0 = 0.0;

    /// Builds constants with lambda_star = min(1/(2 c1), (N-1)/(2 c2)) unless given.
    static ModelConstants make(int N, double p, double lambda0 = 0.0, double c1 = 1.0,
                               double c2 = 1.0, double c3 = 1.0,
                               std::optional<double> lambda_star = std::nullopt);

    double p_conj() const { return p / (p - 1.0); }
    double M() const { return N - c2 * lambda0; }

    /// Throws InvalidInput on violated standing assumptions.
    void validate() const;
    /// True iff N/M < p < N.
    bool exponent_admissible() const;
    /// Throws PreconditionViolated unless N/M < p < N.
    void require_exponent_window() const;
    /// Throws SurfaceTooRough unless lambda0 <= lambda_star.
    void require_small_lipschitz() const;
};

/// Geometric probe grid on [r_min, r_max].
class RadialGrid {
public:
    RadialGrid(double r_min, double r_max, int points_per_decade);
    static RadialGrid standard() { return RadialGrid(1e-6, 1e6, 32); }

    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }
    int points_per_decade() const { return ppd_; }
    const std::vector<double>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    double ratio() const { return ratio_; }
    RadialGrid refined(int factor) const { return RadialGrid(r_min_, r_max_, ppd_ * factor); }

private:
    double r_min_;
    double r_max_;
    int ppd_;
    double ratio_;
    std::vector<double> nodes_;
};

enum class TailEnd { Zero, Infinity };
enum class TailVerdict { Convergent, Divergent, Marginal };
std::string to_string(TailVerdict v);

struct TailClass {
    TailVerdict verdict = TailVerdict::Convergent;
    double fitted_exponent = 0.0;
    double residual = 0.0;
};

/// Where tail exponents are fitted. The fit uses the decade
/// [far_radius/10, far_radius] at infinity and [1/far_radius, 10/far_radius]
/// at zero.
struct TailProbe {
    double far_radius = 1e30;
    int samples = 9;
    double marginal_band = 0.05;
};

/// Knobs shared by every scan-based check.
struct NumericsConfig {
    double quad_tol = 1e-10;
    TailProbe tail{};
    RadialGrid grid = RadialGrid::standard();
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

/// Integral of f over (a, b), 0 <= a < b <= inf.
///
/// Ends at 0 and inf are integrated in the logarithmic variable, one decade
/// per panel, with a geometric remainder for power-like ends. The returned error satisfies error <= tol * max(1, integral of |f|),
/// otherwise ToleranceNotMet is thrown.
IntegralResult integrate(const RadialFunction& f, double a, double b, double tol);
double adaptive_integral(const RadialFunction& f, double a, double b, double tol);

/// log of the integral of exp(log_f) over (a, b). Works in a rescaled frame so
/// integrands spanning hundreds of orders of magnitude stay representable.
double log_integral(const RadialFunction& log_f, double a, double b, double tol);

/// log of int_0^{r_i} exp(log_f) for each node r_i.
std::vector<double> log_cumulative_from_zero(const RadialFunction& log_f,
                                             const std::vector<double>& nodes, double tol);
/// log of int_{r_i}^inf exp(log_f) for each node r_i.
std::vector<double> log_cumulative_to_infinity(const RadialFunction& log_f,
                                               const std::vector<double>& nodes, double tol);

/// Local power-law exponent of a positive function near 0 or infinity.
TailClass tail_classify(const RadialFunction& f, TailEnd end, const TailProbe& probe = {});
/// Same, for a function given through its logarithm.
TailClass tail_classify_log(const RadialFunction& log_f, TailEnd end,
                            const TailProbe& probe = {});
/// Nodes at which tail fits sample the function.
std::vector<double> tail_probe_nodes(TailEnd end, const TailProbe& probe = {});
/// Least-squares slope of y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& log_y);
/// Fitted log-log slope only, no verdict.
double tail_slope_log(const RadialFunction& log_f, TailEnd end, const TailProbe& probe = {});

struct ScanResult {
    double sup_value = 0.0;
    double argmax_r = 0.0;
    bool boundary_flag = false;
    std::size_t argmax_index = 0;
};

ScanResult supremum_scan(const RadialFunction& g, const RadialGrid& grid);
ScanResult supremum_scan(const std::vector<double>& values, const RadialGrid& grid);

/// Gauss-Legendre rule on [-1, 1]; cached per order.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};
const GaussRule& gauss_legendre(int n);

}  // namespace layerpot
