#pragma once

// Positive radial weights gamma(r), Gamma(r) on (0, inf).

#include <string>
#include <vector>

#include "layerpot/core.hpp"

namespace layerpot {

enum class WeightFamily { Power, PiecewisePower, PowerLog, Custom };
std::string to_string(WeightFamily f);

struct LogDerivBounds {
    double ess_inf = 0.0;
    double ess_sup = 0.0;
    bool inf_at_boundary = false;
    bool sup_at_boundary = false;
};

class RadialWeight {
public:
    /// r^alpha
    static RadialWeight power(double alpha, double scale = 1.0);
    /// r^alpha1 on (0, break_r), continued continuously by r^alpha2 beyond.
    static RadialWeight piecewise(double alpha1, double alpha2, double break_r = 1.0, double scale = 1.0);
    /// (log(1 + r))^alpha
    static RadialWeight powerlog(double alpha, double scale = 1.0);
    /// log gamma interpolated linearly in log r through (r_i, value_i);
    /// constant log-slope extrapolation past the ends.
    static RadialWeight custom(std::vector<double> r, std::vector<double> values);
    /// CSV rows "r,value" (optional header).
    static RadialWeight from_csv(const std::string& path);

    WeightFamily family() const { return family_; }
    double alpha() const { return a1_; }
    double alpha2() const { return a2_; }
    double break_r() const { return break_r_; }
    double scale() const { return scale_; }
    std::string describe() const;

    double eval(double r) const;
    double log_eval(double r) const;
    /// r gamma'(r) / gamma(r). Throws NotDifferentiable at breakpoints.
    double log_derivative(double r) const;
    /// Limits of the log-derivative as r -> 0 and r -> inf.
    double log_derivative_limit(TailEnd end) const;
    /// True if r is a breakpoint where the log-derivative jumps.
    bool is_breakpoint(double r) const;

    /// Extreme log-derivatives over the grid, widened by the analytic end
    /// limits of the family; flags mark extremes attained only at the ends.
    LogDerivBounds log_derivative_bounds(const RadialGrid& grid) const;
    /// sup over nodes of eval(2r) / eval(r).
    double doubling_constant(const RadialGrid& grid) const;

    /// Copy multiplied by c > 0.
    RadialWeight scaled(double c) const;

private:
    RadialWeight() = default;
    WeightFamily family_ = WeightFamily::Power;
    double a1_ = 0.0;
    double a2_ = 0.0;
    double break_r_ = 1.0;
    double scale_ = 1.0;
    std::vector<double> log_r_;
    std::vector<double> log_v_;
};

}  // namespace layerpot
