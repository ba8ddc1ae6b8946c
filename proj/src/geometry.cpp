#include "layerpot/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <boost/random/sobol.hpp>

namespace layerpot {

namespace {

// phi = kBump * eps * w * (1 - exp(-|x|^2/w^2)) has max |grad phi| = eps.
const double kBump = std::sqrt(std::exp(1.0) / 2.0);
const double kBumpPeak = 1.0 / std::sqrt(2.0);

double norm(const double* x, int n) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += x[i] * x[i];
    return std::sqrt(s);
}

}  // namespace

std::string to_string(SurfaceFamily f) {
    switch (f) {
    case SurfaceFamily::Flat: return "flat";
    case SurfaceFamily::Cone: return "cone";
    case SurfaceFamily::SmoothBump: return "bump";
    case SurfaceFamily::Custom: return "custom";
    }
    return "unknown";
}

struct LipschitzGraph::CustomData {
    std::vector<std::vector<double>> axes;
    std::vector<double> values;
    std::vector<std::size_t> strides;
    // Lambda profile: quotient prefix maxima keyed by max(|x|, |y|).
    std::vector<double> keys;
    std::vector<double> prefix_max;
    std::optional<double> declared;

    double eval(const double* x) const {
        const std::size_t n = axes.size();
        std::vector<std::size_t> lo(n);
        std::vector<double> t(n);
        for (std::size_t d = 0; d < n; ++d) {
            const auto& ax = axes[d];
            const double xc = std::clamp(x[d], ax.front(), ax.back());
            auto it = std::upper_bound(ax.begin(), ax.end(), xc);
            std::size_t i = static_cast<std::size_t>(it - ax.begin());
            i = std::clamp<std::size_t>(i, 1, ax.size() - 1) - 1;
            lo[d] = i;
            t[d] = (xc - ax[i]) / (ax[i + 1] - ax[i]);
        }
        double out = 0;
        for (std::size_t corner = 0; corner < (std::size_t{1} << n); ++corner) {
            double w = 1;
            std::size_t idx = 0;
            for (std::size_t d = 0; d < n; ++d) {
                const bool up = (corner >> d) & 1U;
                w *= up ? t[d] : 1.0 - t[d];
                idx += (lo[d] + (up ? 1 : 0)) * strides[d];
            }
            if (w != 0) out += w * values[idx];
        }
        return out;
    }
};

LipschitzGraph LipschitzGraph::flat(int N) {
    if (N < 2) throw Error(ErrorCode::InvalidInput, "surface dimension must be >= 2");
    LipschitzGraph g;
    g.N_ = N;
    return g;
}

LipschitzGraph LipschitzGraph::cone(int N, double eps) {
    LipschitzGraph g = flat(N);
    if (!(eps >= 0) || !std::isfinite(eps)) throw Error(ErrorCode::InvalidInput, "cone eps must be >= 0");
    g.family_ = SurfaceFamily::Cone;
    g.eps_ = eps;
    return g;
}

LipschitzGraph LipschitzGraph::bump(int N, double eps, double width) {
    LipschitzGraph g = flat(N);
    if (!(eps >= 0) || !std::isfinite(eps)) throw Error(ErrorCode::InvalidInput, "bump eps must be >= 0");
    if (!(width > 0) || !std::isfinite(width)) throw Error(ErrorCode::InvalidInput, "bump width must be > 0");
    g.family_ = SurfaceFamily::SmoothBump;
    g.eps_ = eps;
    g.width_ = width;
    return g;
}

LipschitzGraph LipschitzGraph::custom(int N, std::vector<std::vector<double>> axes, std::vector<double> values,
                                      std::optional<double> lambda0, std::uint64_t seed) {
    LipschitzGraph g = flat(N);
    g.family_ = SurfaceFamily::Custom;
    if (static_cast<int>(axes.size()) != N)
        throw Error(ErrorCode::InvalidInput, "custom surface needs one coordinate axis per dimension");
    auto data = std::make_shared<CustomData>();
    std::size_t total = 1;
    for (const auto& ax : axes) {
        if (ax.size() < 2) throw Error(ErrorCode::InvalidInput, "custom surface axis needs >= 2 nodes");
        for (std::size_t i = 1; i < ax.size(); ++i)
            if (!(ax[i] > ax[i - 1])) throw Error(ErrorCode::InvalidInput, "custom surface axis not increasing");
        total *= ax.size();
    }
    if (values.size() != total)
        throw Error(ErrorCode::InvalidInput, "custom surface expects " + std::to_string(total) + " samples, got " +
                                                 std::to_string(values.size()));
    for (double v : values)
        if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "custom surface sample not finite");
    data->strides.assign(static_cast<std::size_t>(N), 1);
    for (int d = N - 2; d >= 0; --d)
        data->strides[static_cast<std::size_t>(d)] =
            data->strides[static_cast<std::size_t>(d + 1)] * axes[static_cast<std::size_t>(d + 1)].size();
    data->axes = std::move(axes);
    data->values = std::move(values);
    data->declared = lambda0;
    if (lambda0 && !(*lambda0 >= 0)) throw Error(ErrorCode::InvalidInput, "declared lambda0 must be >= 0");
    const std::vector<double> origin(static_cast<std::size_t>(N), 0.0);
    if (std::abs(data->eval(origin.data())) > 1e-12)
        throw Error(ErrorCode::InvalidInput, "custom surface must satisfy phi(0) = 0");

    // Sobol pairs at several separation scales plus all axis-neighbour pairs.
    std::vector<std::pair<double, double>> samples;
    const auto n = static_cast<std::size_t>(N);
    std::vector<double> lo(n), hi(n);
    double extent = 0;
    for (std::size_t d = 0; d < n; ++d) {
        lo[d] = data->axes[d].front();
        hi[d] = data->axes[d].back();
        extent = std::max(extent, hi[d] - lo[d]);
    }
    auto quotient = [&](const std::vector<double>& x, const std::vector<double>& y) {
        double dist = 0, rx = 0, ry = 0;
        for (std::size_t d = 0; d < n; ++d) {
            dist += (x[d] - y[d]) * (x[d] - y[d]);
            rx += x[d] * x[d];
            ry += y[d] * y[d];
        }
        dist = std::sqrt(dist);
        if (dist == 0) return;
        const double q = std::abs(data->eval(x.data()) - data->eval(y.data())) / dist;
        samples.emplace_back(std::sqrt(std::max(rx, ry)), q);
    };
    boost::random::sobol qrng(2 * n);
    qrng.discard(static_cast<std::uintmax_t>(seed % 1000003) * 2 * n);
    const double scale = 1.0 / (static_cast<double>(qrng.max()) + 1.0);
    constexpr int kPoints = 4096;
    constexpr int kScales = 12;
    std::vector<double> x(n), y(n), dir(n);
    for (int i = 0; i < kPoints; ++i) {
        for (std::size_t d = 0; d < n; ++d) x[d] = lo[d] + (hi[d] - lo[d]) * (static_cast<double>(qrng()) * scale);
        double dn = 0;
        for (std::size_t d = 0; d < n; ++d) {
            dir[d] = 2.0 * static_cast<double>(qrng()) * scale - 1.0;
            dn += dir[d] * dir[d];
        }
        dn = std::sqrt(dn);
        if (dn < 1e-9) continue;
        const double h = extent * std::pow(2.0, -(1 + i % kScales));
        for (std::size_t d = 0; d < n; ++d) y[d] = std::clamp(x[d] + h * dir[d] / dn, lo[d], hi[d]);
        quotient(x, y);
    }
    std::vector<std::size_t> idx(n, 0);
    while (true) {
        for (std::size_t d = 0; d < n; ++d) x[d] = data->axes[d][idx[d]];
        for (std::size_t d = 0; d < n; ++d) {
            if (idx[d] + 1 < data->axes[d].size()) {
                y = x;
                y[d] = data->axes[d][idx[d] + 1];
                quotient(x, y);
            }
        }
        std::size_t d = n;
        while (d-- > 0) {
            if (++idx[d] < data->axes[d].size()) break;
            idx[d] = 0;
        }
        if (d == static_cast<std::size_t>(-1)) break;
    }
    std::sort(samples.begin(), samples.end());
    double running = 0;
    for (const auto& [key, q] : samples) {
        running = std::max(running, q);
        if (lambda0) running = std::min(running, *lambda0);
        data->keys.push_back(key);
        data->prefix_max.push_back(running);
    }
    g.custom_ = std::move(data);
    return g;
}

LipschitzGraph LipschitzGraph::from_csv(int N, const std::string& path, std::optional<double> lambda0,
                                        std::uint64_t seed) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open surface file " + path);
    std::vector<std::map<double, int>> coords(static_cast<std::size_t>(N));
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t\r", used) != std::string::npos) numeric = false;
            } catch (const std::exception&) {
                numeric = false;
            }
        }
        if (!numeric) {
            if (rows.empty() && lineno == 1) continue;
            throw Error(ErrorCode::InvalidInput, path + ":" + std::to_string(lineno) + ": non-numeric cell");
        }
        if (static_cast<int>(row.size()) != N + 1)
            throw Error(ErrorCode::InvalidInput, path + ":" + std::to_string(lineno) + ": expected " +
                                                     std::to_string(N + 1) + " columns, got " +
                                                     std::to_string(row.size()));
        for (int d = 0; d < N; ++d) coords[static_cast<std::size_t>(d)][row[static_cast<std::size_t>(d)]] = 0;
        rows.push_back(std::move(row));
    }
    std::vector<std::vector<double>> axes(static_cast<std::size_t>(N));
    std::size_t total = 1;
    for (int d = 0; d < N; ++d) {
        int k = 0;
        for (auto& [c, i] : coords[static_cast<std::size_t>(d)]) {
            i = k++;
            axes[static_cast<std::size_t>(d)].push_back(c);
        }
        total *= axes[static_cast<std::size_t>(d)].size();
    }
    if (rows.size() != total)
        throw Error(ErrorCode::InvalidInput, path + ": samples do not form a full tensor grid");
    std::vector<double> values(total, std::numeric_limits<double>::quiet_NaN());
    std::vector<std::size_t> strides(static_cast<std::size_t>(N), 1);
    for (int d = N - 2; d >= 0; --d)
        strides[static_cast<std::size_t>(d)] =
            strides[static_cast<std::size_t>(d + 1)] * axes[static_cast<std::size_t>(d + 1)].size();
    for (const auto& row : rows) {
        std::size_t idx = 0;
        for (int d = 0; d < N; ++d)
            idx += static_cast<std::size_t>(coords[static_cast<std::size_t>(d)].at(row[static_cast<std::size_t>(d)])) *
                   strides[static_cast<std::size_t>(d)];
        values[idx] = row.back();
    }
    for (double v : values)
        if (std::isnan(v)) throw Error(ErrorCode::InvalidInput, path + ": duplicate grid point");
    return custom(N, std::move(axes), std::move(values), lambda0, seed);
}

void LipschitzGraph::check_point(const double* x) const {
    for (int i = 0; i < N_; ++i)
        if (!std::isfinite(x[i])) throw Error(ErrorCode::NonFinite, "surface evaluated at a non-finite point");
}

double LipschitzGraph::phi(const double* x) const {
    switch (family_) {
    case SurfaceFamily::Flat: return 0.0;
    case SurfaceFamily::Cone: return eps_ * norm(x, N_);
    case SurfaceFamily::SmoothBump: {
        double r2 = 0;
        for (int i = 0; i < N_; ++i) r2 += x[i] * x[i];
        return kBump * eps_ * width_ * -std::expm1(-r2 / (width_ * width_));
    }
    case SurfaceFamily::Custom: return custom_->eval(x);
    }
    return 0.0;
}

void LipschitzGraph::grad_phi(const double* x, double* g) const {
    switch (family_) {
    case SurfaceFamily::Flat:
        for (int i = 0; i < N_; ++i) g[i] = 0;
        return;
    case SurfaceFamily::Cone: {
        const double r = norm(x, N_);
        if (eps_ == 0) {
            for (int i = 0; i < N_; ++i) g[i] = 0;
            return;
        }
        if (r <= puncture_) throw Error(ErrorCode::GradientUnavailable, "cone has no gradient at its apex");
        for (int i = 0; i < N_; ++i) g[i] = eps_ * x[i] / r;
        return;
    }
    case SurfaceFamily::SmoothBump: {
        double r2 = 0;
        for (int i = 0; i < N_; ++i) r2 += x[i] * x[i];
        const double f = kBump * eps_ * 2.0 / width_ * std::exp(-r2 / (width_ * width_));
        for (int i = 0; i < N_; ++i) g[i] = f * x[i];
        return;
    }
    case SurfaceFamily::Custom: {
        check_point(x);
        std::vector<double> xp(x, x + N_), xm(x, x + N_);
        for (int i = 0; i < N_; ++i) {
            const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
            xp[static_cast<std::size_t>(i)] = x[i] + h;
            xm[static_cast<std::size_t>(i)] = x[i] - h;
            g[i] = (custom_->eval(xp.data()) - custom_->eval(xm.data())) / (2 * h);
            xp[static_cast<std::size_t>(i)] = x[i];
            xm[static_cast<std::size_t>(i)] = x[i];
        }
        return;
    }
    }
}

Point LipschitzGraph::grad_phi(const Point& x) const {
    if (static_cast<int>(x.size()) != N_) throw Error(ErrorCode::InvalidInput, "point dimension mismatch");
    Point g(static_cast<std::size_t>(N_));
    grad_phi(x.data(), g.data());
    return g;
}

Point LipschitzGraph::lift(const Point& x) const {
    if (static_cast<int>(x.size()) != N_) throw Error(ErrorCode::InvalidInput, "point dimension mismatch");
    Point out(x);
    out.push_back(phi(x.data()));
    return out;
}

double LipschitzGraph::surface_element(const double* x) const {
    if (family_ == SurfaceFamily::Flat) return 1.0;
    if (family_ == SurfaceFamily::Cone) {
        if (norm(x, N_) <= puncture_ && eps_ > 0)
            throw Error(ErrorCode::GradientUnavailable, "cone has no gradient at its apex");
        return std::sqrt(1.0 + eps_ * eps_);
    }
    double g[8];
    std::vector<double> big;
    double* gp = g;
    if (N_ > 8) {
        big.resize(static_cast<std::size_t>(N_));
        gp = big.data();
    }
    grad_phi(x, gp);
    double s = 0;
    for (int i = 0; i < N_; ++i) s += gp[i] * gp[i];
    return std::sqrt(1.0 + s);
}

double LipschitzGraph::surface_element(const Point& x) const {
    if (static_cast<int>(x.size()) != N_) throw Error(ErrorCode::InvalidInput, "point dimension mismatch");
    return surface_element(x.data());
}

double LipschitzGraph::local_lipschitz(double r) const {
    if (!(r > 0)) throw Error(ErrorCode::DomainError, "local_lipschitz needs r > 0");
    switch (family_) {
    case SurfaceFamily::Flat: return 0.0;
    case SurfaceFamily::Cone: return eps_;
    case SurfaceFamily::SmoothBump: {
        const double rho = 2.0 * r / width_;
        if (rho >= kBumpPeak) return eps_;
        return kBump * eps_ * 2.0 * rho * std::exp(-rho * rho);
    }
    case SurfaceFamily::Custom: {
        const auto& k = custom_->keys;
        auto it = std::upper_bound(k.begin(), k.end(), 2.0 * r);
        if (it == k.begin()) return 0.0;
        return custom_->prefix_max[static_cast<std::size_t>(it - k.begin()) - 1];
    }
    }
    return 0.0;
}

double LipschitzGraph::lambda0() const {
    switch (family_) {
    case SurfaceFamily::Flat: return 0.0;
    case SurfaceFamily::Cone:
    case SurfaceFamily::SmoothBump: return eps_;
    case SurfaceFamily::Custom:
        if (custom_->declared) return *custom_->declared;
        return custom_->prefix_max.empty() ? 0.0 : custom_->prefix_max.back();
    }
    return 0.0;
}

double LipschitzGraph::dini_integral(double a, double b, double tol) const {
    if (!(a >= 0) || !(b > a)) throw Error(ErrorCode::DomainError, "dini_integral needs 0 <= a < b");
    switch (family_) {
    case SurfaceFamily::Flat: return 0.0;
    case SurfaceFamily::Cone:
        if (eps_ == 0) return 0.0;
        if (a == 0 || b == kInf) return kInf;
        return eps_ * std::log(b / a);
    case SurfaceFamily::SmoothBump: {
        if (eps_ == 0) return 0.0;
        if (b == kInf) return kInf;
        const double knee = kBumpPeak * width_ / 2.0;
        auto f = [this](double nu) { return local_lipschitz(nu) / nu; };
        double out = 0;
        if (a < knee) out += adaptive_integral(f, a, std::min(b, knee), tol);
        if (b > knee) out += eps_ * std::log(b / std::max(a, knee));
        return out;
    }
    case SurfaceFamily::Custom: {
        // Lambda is a step function of nu: sum value * log-length per step.
        const auto& k = custom_->keys;
        const auto& m = custom_->prefix_max;
        double out = 0;
        double lo = a;
        for (std::size_t i = 0; i < k.size() && lo < b; ++i) {
            const double jump = k[i] / 2.0;
            if (jump <= lo) continue;
            const double hi = std::min(jump, b);
            const double level = i == 0 ? 0.0 : m[i - 1];
            if (level > 0) {
                if (lo == 0) return kInf;
                out += level * std::log(hi / lo);
            }
            lo = hi;
        }
        if (lo < b && !m.empty() && m.back() > 0) {
            if (b == kInf || lo == 0) return kInf;
            out += m.back() * std::log(b / lo);
        }
        return out;
    }
    }
    return 0.0;
}

double sampled_lipschitz(const LipschitzGraph& surf, double r, int pairs, std::uint64_t seed) {
    if (!(r > 0)) throw Error(ErrorCode::DomainError, "sampled_lipschitz needs r > 0");
    const int n = surf.dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif;
    std::vector<double> x(static_cast<std::size_t>(n)), y(x), d(x);
    const double R = 2.0 * r;
    auto random_dir = [&](std::vector<double>& v) {
        double s = 0;
        do {
            s = 0;
            for (auto& c : v) {
                c = gauss(rng);
                s += c * c;
            }
        } while (s < 1e-20);
        s = std::sqrt(s);
        for (auto& c : v) c /= s;
    };
    double best = 0;
    for (int i = 0; i < pairs; ++i) {
        random_dir(x);
        const double rad = R * std::pow(unif(rng), 1.0 / n);
        for (auto& c : x) c *= rad;
        random_dir(d);
        const double h = R * std::pow(10.0, -4.0 * unif(rng));
        double ry = 0;
        for (std::size_t j = 0; j < y.size(); ++j) {
            y[j] = x[j] + h * d[j];
            ry += y[j] * y[j];
        }
        if (std::sqrt(ry) > R) continue;
        best = std::max(best, std::abs(surf.phi(x.data()) - surf.phi(y.data())) / h);
    }
    return best;
}

}  // namespace layerpot
