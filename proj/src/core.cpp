#include "layerpot/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace layerpot {

std::string to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NotDifferentiable: return "NotDifferentiable";
    case ErrorCode::GradientUnavailable: return "GradientUnavailable";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::OutOfCoverage: return "OutOfCoverage";
    case ErrorCode::PVNotConverged: return "PVNotConverged";
    case ErrorCode::Truncation: return "TruncationWarning";
    case ErrorCode::SurfaceTooRough: return "SurfaceTooRough";
    case ErrorCode::ZeroRHS: return "ZeroRHS";
    case ErrorCode::DivergentB: return "DivergentB";
    case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

std::string to_string(TailVerdict v) {
    switch (v) {
    case TailVerdict::Convergent: return "Convergent";
    case TailVerdict::Divergent: return "Divergent";
    case TailVerdict::Marginal: return "Marginal";
    }
    return "Unknown";
}

ModelConstants ModelConstants::make(int N, double p, double lambda0, double c1, double c2,
                                    double c3, std::optional<double> lambda_star) {
    ModelConstants mc;
    mc.N = N;
    mc.p = p;
    mc.c1 = c1;
    mc.c2 = c2;
    mc.c3 = c3;
    mc.lambda0 = lambda0;
    mc.lambda_star = lambda_star.value_or(std::min(1.0 / (2.0 * c1), (N - 1.0) / (2.0 * c2)));
    mc.validate();
    return mc;
}

void ModelConstants::validate() const {
    if (N < 2) throw Error(ErrorCode::InvalidInput, "N must be >= 2");
    if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidInput, "p must lie in (1, inf)");
    if (c1 < 0 || c2 < 0 || c3 < 0) throw Error(ErrorCode::InvalidInput, "c1, c2, c3 must be nonnegative");
    if (!(lambda_star > 0)) throw Error(ErrorCode::InvalidInput, "lambda_star must be positive");
    if (lambda0 < 0) throw Error(ErrorCode::InvalidInput, "lambda0 must be nonnegative");
    constexpr double slack = 1e-12;
    if (c1 * lambda_star > 0.5 + slack)
        throw Error(ErrorCode::InvalidInput, "c1 * lambda_star must not exceed 1/2");
    if (c2 * lambda_star > (N - 1) / 2.0 + slack)
        throw Error(ErrorCode::InvalidInput, "c2 * lambda_star must not exceed (N-1)/2");
}

bool ModelConstants::exponent_admissible() const {
    const double m = M();
    return m > 0 && N / m < p && p < N;
}

void ModelConstants::require_exponent_window() const {
    if (!exponent_admissible())
        throw Error(ErrorCode::PreconditionViolated,
                    "p = " + std::to_string(p) + " outside (N/M, N) = (" +
                        std::to_string(N / M()) + ", " + std::to_string(N) + ")");
}

void ModelConstants::require_small_lipschitz() const {
    if (lambda0 > lambda_star)
        throw Error(ErrorCode::SurfaceTooRough, "Lipschitz constant " + std::to_string(lambda0) +
                                                    " exceeds lambda_star " +
                                                    std::to_string(lambda_star));
}

RadialGrid::RadialGrid(double r_min, double r_max, int points_per_decade)
    : r_min_(r_min), r_max_(r_max), ppd_(points_per_decade) {
    if (!(r_min > 0) || !(r_max > r_min) || !std::isfinite(r_max))
        throw Error(ErrorCode::InvalidInput, "radial grid needs 0 < r_min < r_max < inf");
    if (points_per_decade < 1) throw Error(ErrorCode::InvalidInput, "points_per_decade must be >= 1");
    const double decades = std::log10(r_max / r_min);
    const auto count = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil(points_per_decade * decades - 1e-9)));
    ratio_ = std::pow(r_max / r_min, 1.0 / static_cast<double>(count - 1));
    nodes_.resize(count);
    const double lmin = std::log(r_min);
    const double step = std::log(r_max / r_min) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) nodes_[i] = std::exp(lmin + step * static_cast<double>(i));
    nodes_.front() = r_min;
    nodes_.back() = r_max;
}

std::vector<double> tail_probe_nodes(TailEnd end, const TailProbe& probe) {
    if (probe.samples < 4)
        throw Error(ErrorCode::InsufficientSamples,
                    "tail fit needs at least 4 probe nodes, got " + std::to_string(probe.samples));
    const double lo = end == TailEnd::Infinity ? probe.far_radius / 10.0 : 1.0 / probe.far_radius;
    std::vector<double> s(static_cast<std::size_t>(probe.samples));
    for (int k = 0; k < probe.samples; ++k)
        s[static_cast<std::size_t>(k)] = lo * std::pow(10.0, static_cast<double>(k) / (probe.samples - 1));
    return s;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& log_y) {
    if (x.size() != log_y.size() || x.size() < 2)
        throw Error(ErrorCode::InsufficientSamples, "slope fit needs at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += log_y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (log_y[i] - my);
    }
    return sxy / sxx;
}

namespace {

struct Fit {
    double slope;
    double residual;
};

Fit fit_slope(const RadialFunction& log_f, TailEnd end, const TailProbe& probe) {
    const auto s = tail_probe_nodes(end, probe);
    std::vector<double> x, y;
    int neg_inf = 0;
    for (double si : s) {
        const double v = log_f(si);
        if (std::isnan(v) || v == kInf) throw Error(ErrorCode::NonFinite, "tail probe value not finite");
        if (v == -kInf) {
            ++neg_inf;
            continue;
        }
        x.push_back(std::log(si));
        y.push_back(v);
    }
    if (neg_inf == static_cast<int>(s.size())) {
        // identically zero near the end: treat as infinitely fast decay
        return {end == TailEnd::Infinity ? -kInf : kInf, 0.0};
    }
    if (x.size() < 4) throw Error(ErrorCode::InsufficientSamples, "too few positive tail samples");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    double res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = y[i] - (my + slope * (x[i] - mx));
        res += d * d;
    }
    return {slope, std::sqrt(res / n)};
}

}  // namespace

double tail_slope_log(const RadialFunction& log_f, TailEnd end, const TailProbe& probe) {
    return fit_slope(log_f, end, probe).slope;
}

TailClass tail_classify_log(const RadialFunction& log_f, TailEnd end, const TailProbe& probe) {
    const Fit fit = fit_slope(log_f, end, probe);
    TailClass tc;
    tc.fitted_exponent = fit.slope;
    tc.residual = fit.residual;
    if (std::abs(fit.slope + 1.0) < probe.marginal_band) {
        tc.verdict = TailVerdict::Marginal;
    } else if (end == TailEnd::Infinity) {
        tc.verdict = fit.slope > -1.0 ? TailVerdict::Divergent : TailVerdict::Convergent;
    } else {
        tc.verdict = fit.slope < -1.0 ? TailVerdict::Divergent : TailVerdict::Convergent;
    }
    return tc;
}

TailClass tail_classify(const RadialFunction& f, TailEnd end, const TailProbe& probe) {
    return tail_classify_log(
        [&f](double s) {
            const double v = f(s);
            if (v < 0) throw Error(ErrorCode::DomainError, "tail_classify needs a positive function");
            return std::log(v);
        },
        end, probe);
}

ScanResult supremum_scan(const std::vector<double>& values, const RadialGrid& grid) {
    if (values.size() != grid.size())
        throw Error(ErrorCode::InvalidInput, "scan values do not match grid size");
    ScanResult res;
    res.sup_value = -kInf;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw Error(ErrorCode::NonFinite, "scan value not finite at r = " + std::to_string(grid.nodes()[i]));
        if (values[i] > res.sup_value) {
            res.sup_value = values[i];
            res.argmax_index = i;
        }
    }
    res.argmax_r = grid.nodes()[res.argmax_index];
    res.boundary_flag = res.argmax_index == 0 || res.argmax_index + 1 == values.size();
    return res;
}

ScanResult supremum_scan(const RadialFunction& g, const RadialGrid& grid) {
    std::vector<double> values;
    values.reserve(grid.size());
    for (double r : grid.nodes()) values.push_back(g(r));
    return supremum_scan(values, grid);
}

const GaussRule& gauss_legendre(int n) {
    static std::mutex mtx;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1) throw Error(ErrorCode::InvalidInput, "Gauss order must be >= 1");
    GaussRule rule;
    rule.x.resize(static_cast<std::size_t>(n));
    rule.w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        if (n == 1) p0 = 1;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        // ascending order
        rule.x[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.w[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    if (n == 1) {
        rule.x[0] = 0.0;
        rule.w[0] = 2.0;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace layerpot
