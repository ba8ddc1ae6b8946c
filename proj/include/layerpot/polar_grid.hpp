#pragma once

// Polar tensor grids on R^N (N = 2, 3) and sampled functions on them.
//
// Radial nodes are Gauss points on panels [b_k, b_{k+1}] of [0, r_max];
// angular nodes are equispaced on the circle (N = 2) or Gauss in cos(theta)
// times equispaced in the azimuth (N = 3). Between nodes a function is
// represented by its interpolant: Lagrange within each radial panel,
// trigonometric in the periodic angle and Lagrange in cos(theta). Outside the
// ball of radius r_max it is zero.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "layerpot/core.hpp"
#include "layerpot/geometry.hpp"

namespace layerpot {

class PolarGrid {
public:
    /// `angular` is the number of circle nodes (N = 2) or of cos(theta)
    /// nodes (N = 3, with 2 * angular azimuthal nodes).
    static PolarGrid make(int N, double r_max, int panels, int order, int angular);
    static PolarGrid with_breaks(int N, std::vector<double> breaks, int order, int angular);

    int dim() const { return N_; }
    int order() const { return order_; }
    const std::vector<double>& breaks() const { return breaks_; }
    double r_max() const { return breaks_.back(); }
    int panels() const { return static_cast<int>(breaks_.size()) - 1; }

    const std::vector<double>& radial_nodes() const { return r_; }
    /// Gauss weights for dr (without the r^{N-1} Jacobian).
    const std::vector<double>& radial_weights() const { return wr_; }
    const std::vector<Point>& sphere_nodes() const { return dirs_; }
    /// Quadrature weights on S^{N-1}; they sum to its area.
    const std::vector<double>& sphere_weights() const { return wdir_; }

    std::size_t n_radial() const { return r_.size(); }
    std::size_t n_angular() const { return dirs_.size(); }
    std::size_t size() const { return r_.size() * dirs_.size(); }
    std::size_t index(std::size_t i, std::size_t j) const { return i * dirs_.size() + j; }

    Point node(std::size_t i, std::size_t j) const;
    std::vector<Point> nodes() const;
    /// Volume weight of node (i, j): w_r r^{N-1} w_dir.
    double volume_weight(std::size_t i, std::size_t j) const;
    /// Panel width divided by the order, at radius r.
    double local_spacing(double r) const;
    /// Index of the panel containing r, or -1 outside [0, r_max).
    int panel_of(double r) const;

    /// Interpolation weights of a point: value = sum_a sum_b radial[a] * angular[b]
    /// * v[index(first_radial + a, b)].
    struct Stencil {
        bool inside = false;
        std::size_t first_radial = 0;
        std::vector<double> radial;
        std::vector<double> angular;
    };
    void stencil(const double* y, Stencil& out) const;
    /// Radial Lagrange weights at radius r within its panel.
    bool radial_stencil(double r, std::size_t& first, std::vector<double>& w) const;
    /// Derivative of the radial Lagrange weights at r.
    bool radial_stencil_derivative(double r, std::size_t& first, std::vector<double>& w) const;

    /// N = 3 only: number of cos(theta) and azimuth nodes.
    int n_mu() const { return n_mu_; }
    int n_phi() const { return n_phi_; }
    const std::vector<double>& mu_nodes() const { return mu_; }

    /// Cartesian gradient of the interpolant at every node, one array per
    /// component.
    std::vector<std::vector<double>> gradient(const std::vector<double>& values) const;

    std::string describe() const;

private:
    PolarGrid() = default;
    void build_angular(int angular);
    void angular_weights(const double* unit, std::vector<double>& w) const;

    int N_ = 2;
    int order_ = 4;
    std::vector<double> breaks_;
    std::vector<double> r_, wr_;
    std::vector<double> ref_x_, bary_;
    std::vector<Point> dirs_;
    std::vector<double> wdir_;
    int n_mu_ = 0, n_phi_ = 0;
    std::vector<double> mu_, mu_bary_;
};

/// Samples of a function at the nodes of a grid, stored radial-major.
struct PolarGridFunction {
    std::shared_ptr<const PolarGrid> grid;
    std::vector<double> values;
    std::optional<double> p_context;

    static PolarGridFunction zeros(std::shared_ptr<const PolarGrid> g);
    /// Samples f(x) at every node.
    template <class F>
    static PolarGridFunction sample(std::shared_ptr<const PolarGrid> g, F&& f) {
        PolarGridFunction u = zeros(g);
        for (std::size_t i = 0; i < g->n_radial(); ++i)
            for (std::size_t j = 0; j < g->n_angular(); ++j) u.values[g->index(i, j)] = f(g->node(i, j));
        return u;
    }
    /// Samples a radial profile.
    static PolarGridFunction radial(std::shared_ptr<const PolarGrid> g, const RadialFunction& f);

    double at(std::size_t i, std::size_t j) const { return values[grid->index(i, j)]; }
    /// Interpolated value; zero outside the grid ball.
    double eval(const Point& y) const;
    double eval(const double* y) const;
    /// Throws NonFinite on non-finite samples.
    void validate() const;
};

/// Rows "r,angular_index,value" with a header line.
void write_grid_function_csv(const PolarGridFunction& u, const std::string& path);
/// Reads samples for `grid`; every node must appear exactly once. Errors carry
/// row and column numbers.
PolarGridFunction read_grid_function_csv(const std::string& path, std::shared_ptr<const PolarGrid> grid);

}  // namespace layerpot
