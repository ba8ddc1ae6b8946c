#pragma once

// Lipschitz graph surfaces x -> (x, phi(x)) over R^N with phi(0) = 0.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "layerpot/core.hpp"

namespace layerpot {

using Point = std::vector<double>;

enum class SurfaceFamily { Flat, Cone, SmoothBump, Custom };
std::string to_string(SurfaceFamily f);

class LipschitzGraph {
public:
    static LipschitzGraph flat(int N);
    /// phi(x) = eps |x|.
    static LipschitzGraph cone(int N, double eps);
    /// Radial bump with |grad phi| peaking at eps, reached at |x| = width / sqrt(2).
    static LipschitzGraph bump(int N, double eps, double width);
    /// Tensor-grid samples with multilinear interpolation. `axes[d]` holds the
    /// sorted coordinates of axis d; `values` is row-major with the last axis
    /// fastest.
    static LipschitzGraph custom(int N, std::vector<std::vector<double>> axes, std::vector<double> values,
                                 std::optional<double> lambda0 = std::nullopt, std::uint64_t seed = 0);
    /// Rows "x_1,...,x_N,phi" (an optional non-numeric header is skipped).
    static LipschitzGraph from_csv(int N, const std::string& path,
                                   std::optional<double> lambda0 = std::nullopt, std::uint64_t seed = 0);

    int dim() const { return N_; }
    SurfaceFamily family() const { return family_; }
    double eps() const { return eps_; }
    double width() const { return width_; }
    bool is_flat() const { return family_ == SurfaceFamily::Flat; }

    /// Radius around an apex inside which gradients are not requested.
    double puncture_radius() const { return puncture_; }

    double phi(const double* x) const;
    /// Writes N partial derivatives. Throws GradientUnavailable at the cone apex.
    void grad_phi(const double* x, double* g) const;

    double phi(const Point& x) const { return phi(x.data()); }
    Point grad_phi(const Point& x) const;
    Point lift(const Point& x) const;
    double surface_element(const Point& x) const;
    double surface_element(const double* x) const;

    /// Lambda(r): Lipschitz constant of phi on the ball of radius 2r.
    double local_lipschitz(double r) const;
    /// Global Lipschitz constant (declared value for Custom surfaces if given).
    double lambda0() const;
    /// int_a^b Lambda(nu) dnu / nu, 0 <= a < b.
    double dini_integral(double a, double b, double tol = 1e-10) const;

private:
    struct CustomData;
    LipschitzGraph() = default;
    void check_point(const double* x) const;

    int N_ = 2;
    SurfaceFamily family_ = SurfaceFamily::Flat;
    double eps_ = 0.0;
    double width_ = 1.0;
    double puncture_ = 1e-12;
    std::shared_ptr<const CustomData> custom_;
};

/// Brute-force estimate of Lambda(r) from random pairs in the ball of radius
/// 2r, at several separation scales. Deterministic for a fixed seed.
double sampled_lipschitz(const LipschitzGraph& surf, double r, int pairs, std::uint64_t seed);

}  // namespace layerpot
