#include "layerpot/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace layerpot {

std::string to_string(WeightFamily f) {
    switch (f) {
    case WeightFamily::Power: return "power";
    case WeightFamily::PiecewisePower: return "piecewise";
    case WeightFamily::PowerLog: return "powerlog";
    case WeightFamily::Custom: return "custom";
    }
    return "unknown";
}

namespace {
void check_param(double v, const char* name) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, std::string("weight parameter ") + name + " not finite");
}
void check_scale(double c) {
    if (!(c > 0) || !std::isfinite(c)) throw Error(ErrorCode::InvalidInput, "weight scale must be positive");
}
}  // namespace

RadialWeight RadialWeight::power(double alpha, double scale) {
    check_param(alpha, "alpha");
    check_scale(scale);
    RadialWeight w;
    w.family_ = WeightFamily::Power;
    w.a1_ = w.a2_ = alpha;
    w.scale_ = scale;
    return w;
}

RadialWeight RadialWeight::piecewise(double alpha1, double alpha2, double break_r, double scale) {
    check_param(alpha1, "alpha1");
    check_param(alpha2, "alpha2");
    check_scale(scale);
    if (!(break_r > 0) || !std::isfinite(break_r)) throw Error(ErrorCode::InvalidInput, "break_r must be positive");
    RadialWeight w;
    w.family_ = WeightFamily::PiecewisePower;
    w.a1_ = alpha1;
    w.a2_ = alpha2;
    w.break_r_ = break_r;
    w.scale_ = scale;
    return w;
}

RadialWeight RadialWeight::powerlog(double alpha, double scale) {
    check_param(alpha, "alpha");
    check_scale(scale);
    RadialWeight w;
    w.family_ = WeightFamily::PowerLog;
    w.a1_ = alpha;
    w.scale_ = scale;
    return w;
}

RadialWeight RadialWeight::custom(std::vector<double> r, std::vector<double> values) {
    if (r.size() != values.size() || r.size() < 2)
        throw Error(ErrorCode::InvalidInput, "custom weight needs >= 2 matching (r, value) samples");
    RadialWeight w;
    w.family_ = WeightFamily::Custom;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0) || !std::isfinite(r[i]))
            throw Error(ErrorCode::InvalidInput, "custom weight radii must be positive");
        if (!(values[i] > 0) || !std::isfinite(values[i]))
            throw Error(ErrorCode::InvalidInput, "custom weight values must be positive");
        if (i > 0 && !(r[i] > r[i - 1])) throw Error(ErrorCode::InvalidInput, "custom weight radii not increasing");
        w.log_r_.push_back(std::log(r[i]));
        w.log_v_.push_back(std::log(values[i]));
    }
    const std::size_t n = w.log_r_.size();
    w.a1_ = (w.log_v_[1] - w.log_v_[0]) / (w.log_r_[1] - w.log_r_[0]);
    w.a2_ = (w.log_v_[n - 1] - w.log_v_[n - 2]) / (w.log_r_[n - 1] - w.log_r_[n - 2]);
    return w;
}

RadialWeight RadialWeight::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open weight file " + path);
    std::vector<double> r, v;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::stringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
            throw Error(ErrorCode::InvalidInput, path + ":" + std::to_string(lineno) + ": expected 2 columns");
        try {
            r.push_back(std::stod(a));
            v.push_back(std::stod(b));
        } catch (const std::exception&) {
            if (lineno == 1) continue;
            throw Error(ErrorCode::InvalidInput, path + ":" + std::to_string(lineno) + ": non-numeric cell");
        }
    }
    return custom(std::move(r), std::move(v));
}

std::string RadialWeight::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (family_) {
    case WeightFamily::Power: os << "r^" << a1_; break;
    case WeightFamily::PiecewisePower: os << "r^" << a1_ << " | r^" << a2_ << " @ " << break_r_; break;
    case WeightFamily::PowerLog: os << "log(1+r)^" << a1_; break;
    case WeightFamily::Custom: os << "custom(" << log_r_.size() << " samples)"; break;
    }
    if (scale_ != 1.0) os << " * " << scale_;
    return os.str();
}

double RadialWeight::log_eval(double r) const {
    if (!(r > 0) || std::isnan(r)) throw Error(ErrorCode::DomainError, "weight evaluated at r <= 0");
    const double ls = std::log(scale_);
    switch (family_) {
    case WeightFamily::Power: return ls + a1_ * std::log(r);
    case WeightFamily::PiecewisePower:
        return ls + (r < break_r_ ? a1_ : a2_) * std::log(r / break_r_);
    case WeightFamily::PowerLog: return ls + (a1_ == 0 ? 0.0 : a1_ * std::log(std::log1p(r)));
    case WeightFamily::Custom: {
        const double lr = std::log(r);
        const std::size_t n = log_r_.size();
        if (lr <= log_r_.front()) return log_v_.front() + a1_ * (lr - log_r_.front());
        if (lr >= log_r_.back()) return log_v_.back() + a2_ * (lr - log_r_.back());
        const auto it = std::upper_bound(log_r_.begin(), log_r_.end(), lr);
        const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - log_r_.begin()), n - 1) - 1;
        const double t = (lr - log_r_[i]) / (log_r_[i + 1] - log_r_[i]);
        return log_v_[i] + t * (log_v_[i + 1] - log_v_[i]);
    }
    }
    return 0.0;
}

double RadialWeight::eval(double r) const { return std::exp(log_eval(r)); }

bool RadialWeight::is_breakpoint(double r) const {
    return family_ == WeightFamily::PiecewisePower && r == break_r_ && a1_ != a2_;
}

double RadialWeight::log_derivative(double r) const {
    if (!(r > 0) || std::isnan(r)) throw Error(ErrorCode::DomainError, "weight evaluated at r <= 0");
    switch (family_) {
    case WeightFamily::Power: return a1_;
    case WeightFamily::PiecewisePower:
        if (is_breakpoint(r))
            throw Error(ErrorCode::NotDifferentiable, "piecewise weight has a kink at r = " + std::to_string(r));
        return r < break_r_ ? a1_ : a2_;
    case WeightFamily::PowerLog: return a1_ * r / ((1.0 + r) * std::log1p(r));
    case WeightFamily::Custom: {
        const double lr = std::log(r);
        const std::size_t n = log_r_.size();
        if (lr < log_r_.front()) return a1_;
        if (lr > log_r_.back()) return a2_;
        auto slope = [this](std::size_t i) {
            return (log_v_[i + 1] - log_v_[i]) / (log_r_[i + 1] - log_r_[i]);
        };
        const auto it = std::lower_bound(log_r_.begin(), log_r_.end(), lr);
        const auto k = static_cast<std::size_t>(it - log_r_.begin());
        if (k < n && log_r_[k] == lr) {
            // at a sample: mean of the one-sided slopes
            const double left = k == 0 ? a1_ : slope(k - 1);
            const double right = k + 1 >= n ? a2_ : slope(k);
            return 0.5 * (left + right);
        }
        return slope(k - 1);
    }
    }
    return 0.0;
}

double RadialWeight::log_derivative_limit(TailEnd end) const {
    switch (family_) {
    case WeightFamily::Power: return a1_;
    case WeightFamily::PiecewisePower:
    case WeightFamily::Custom: return end == TailEnd::Zero ? a1_ : a2_;
    case WeightFamily::PowerLog: return end == TailEnd::Zero ? a1_ : 0.0;
    }
    return 0.0;
}

LogDerivBounds RadialWeight::log_derivative_bounds(const RadialGrid& grid) const {
    LogDerivBounds b;
    b.ess_inf = kInf;
    b.ess_sup = -kInf;
    for (double r : grid.nodes()) {
        if (is_breakpoint(r)) continue;
        const double v = log_derivative(r);
        b.ess_inf = std::min(b.ess_inf, v);
        b.ess_sup = std::max(b.ess_sup, v);
    }
    for (TailEnd end : {TailEnd::Zero, TailEnd::Infinity}) {
        const double lim = log_derivative_limit(end);
        if (lim < b.ess_inf) {
            b.ess_inf = lim;
            b.inf_at_boundary = true;
        }
        if (lim > b.ess_sup) {
            b.ess_sup = lim;
            b.sup_at_boundary = true;
        }
    }
    return b;
}

double RadialWeight::doubling_constant(const RadialGrid& grid) const {
    double best = 0;
    for (double r : grid.nodes()) best = std::max(best, std::exp(log_eval(2 * r) - log_eval(r)));
    return best;
}

RadialWeight RadialWeight::scaled(double c) const {
    check_scale(c);
    RadialWeight w = *this;
    if (family_ == WeightFamily::Custom) {
        for (auto& v : w.log_v_) v += std::log(c);
    } else {
        w.scale_ *= c;
    }
    return w;
}

}  // namespace layerpot
