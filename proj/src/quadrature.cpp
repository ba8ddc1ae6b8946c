#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "layerpot/core.hpp"

namespace layerpot {

namespace {

// 7-point Gauss / 15-point Kronrod pair (QUADPACK qk15 abscissae and weights).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kLn10 = 2.302585092994045684;

struct Segment {
    double a, b, value, error, absval;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const RadialFunction& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    std::array<double, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[static_cast<std::size_t>(j)];
        f1[static_cast<std::size_t>(j)] = f(c - dx);
        f2[static_cast<std::size_t>(j)] = f(c + dx);
        const double s = f1[static_cast<std::size_t>(j)] + f2[static_cast<std::size_t>(j)];
        resk += kWgk[static_cast<std::size_t>(j)] * s;
        resabs += kWgk[static_cast<std::size_t>(j)] *
                  (std::abs(f1[static_cast<std::size_t>(j)]) + std::abs(f2[static_cast<std::size_t>(j)]));
        if (j % 2 == 1) resg += kWg[static_cast<std::size_t>(j / 2)] * s;
    }
    const double mean = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[static_cast<std::size_t>(j)] *
                  (std::abs(f1[static_cast<std::size_t>(j)] - mean) + std::abs(f2[static_cast<std::size_t>(j)] - mean));
    const double result = resk * h;
    resabs *= std::abs(h);
    resasc *= std::abs(h);
    double err = std::abs((resk - resg) * h);
    if (resasc != 0 && err != 0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50 * kEps)) err = std::max(kEps * 50 * resabs, err);
    return {a, b, result, err, resabs};
}

IntegralResult gk_adaptive(const RadialFunction& f, double a, double b, double abs_tol, double rel_tol) {
    constexpr int kMaxSegments = 4000;
    std::priority_queue<Segment> heap;
    Segment first = gk15(f, a, b);
    heap.push(first);
    double total = first.value, err = first.error;
    int evals = 15;
    while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (static_cast<int>(heap.size()) >= kMaxSegments) {
            throw Error(ErrorCode::ToleranceNotMet,
                        "refinement budget exhausted on [" + std::to_string(a) + ", " + std::to_string(b) +
                            "], error estimate " + std::to_string(err));
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw Error(ErrorCode::ToleranceNotMet, "interval collapsed during refinement");
        }
        Segment l = gk15(f, worst.a, mid);
        Segment r = gk15(f, mid, worst.b);
        evals += 30;
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
    }
    // recompute sums to shed accumulated rounding
    total = 0;
    err = 0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {total, err, evals};
}

RadialFunction checked(const RadialFunction& f) {
    return [&f](double s) {
        const double v = f(s);
        if (!std::isfinite(v))
            throw Error(ErrorCode::NonFinite, "integrand not finite at s = " + std::to_string(s));
        return v;
    };
}

IntegralResult finite_part(const RadialFunction& f, double a, double b, double tol) {
    if (b / a <= 16.0) return gk_adaptive(f, a, b, 1e-300, tol);
    const double la = std::log(a), lb = std::log(b);
    const int panels = static_cast<int>(std::ceil((lb - la) / kLn10 - 1e-12));
    const double step = (lb - la) / panels;
    auto h = [&f](double u) {
        const double s = std::exp(u);
        return f(s) * s;
    };
    IntegralResult out;
    for (int k = 0; k < panels; ++k) {
        const double u0 = la + step * k;
        const double u1 = k + 1 == panels ? lb : la + step * (k + 1);
        const auto piece = gk_adaptive(h, u0, u1, 1e-300, tol);
        out.value += piece.value;
        out.error += piece.error;
        out.evaluations += piece.evaluations;
    }
    return out;
}

// Sum of int h(u) du over decades u in [k ln10, (k+1) ln10), k = 0, 1, ...
// h is the integrand after a logarithmic substitution that sends the
// singular end to u = inf.
IntegralResult log_panels(const RadialFunction& h, double tol) {
    constexpr int kMaxPanels = 300;
    IntegralResult out;
    std::vector<double> panel;
    for (int k = 0; k < kMaxPanels; ++k) {
        const auto piece = gk_adaptive(h, k * kLn10, (k + 1) * kLn10, 1e-300, tol);
        out.value += piece.value;
        out.error += piece.error;
        out.evaluations += piece.evaluations;
        panel.push_back(piece.value);
        const double total = std::abs(out.value);
        const auto n = panel.size();
        if (n >= 3 && total > 0 && std::abs(panel[n - 1]) <= 1e-2 * tol * total &&
            std::abs(panel[n - 2]) <= 1e-2 * tol * total)
            return out;
        if (total == 0 && n >= 30) return out;
        if (n >= 6 && panel[n - 1] != 0 && panel[n - 2] != 0 && panel[n - 3] != 0) {
            const double q1 = panel[n - 1] / panel[n - 2];
            const double q0 = panel[n - 2] / panel[n - 3];
            if (q1 > 0.999 && q0 > 0.999 && n >= 12)
                throw Error(ErrorCode::ToleranceNotMet, "integral does not converge at its singular end");
            if (q1 > 0 && q1 < 0.999 && std::abs(q1 - q0) <= 1e-6 * q1) {
                // geometric tail: exact for pure power laws
                const double rem = panel[n - 1] * q1 / (1.0 - q1);
                out.value += rem;
                out.error += std::abs(panel[n - 1]) * std::abs(q1 - q0) / ((1.0 - q1) * (1.0 - q1)) +
                             std::abs(rem) * 1e-14;
                return out;
            }
        }
    }
    if (std::abs(panel.back()) > tol * std::max(1.0, std::abs(out.value)))
        throw Error(ErrorCode::ToleranceNotMet, "slowly decaying end: truncation error above tolerance");
    return out;
}

// int_0^beta f
IntegralResult zero_part(const RadialFunction& f, double beta, double tol) {
    return log_panels(
        [&f, beta](double u) {
            const double t = beta * std::exp(-u);
            if (!(t > 1e-300)) return 0.0;
            return f(t) * t;
        },
        tol);
}

// int_c^inf f
IntegralResult infinity_part(const RadialFunction& f, double c, double tol) {
    return log_panels(
        [&f, c](double u) {
            const double s = c * std::exp(u);
            if (!(s < 1e300)) return 0.0;
            return f(s) * s;
        },
        tol);
}

}  // namespace

IntegralResult integrate(const RadialFunction& f_raw, double a, double b, double tol) {
    if (!(a >= 0) || !(b > a) || std::isnan(b))
        throw Error(ErrorCode::DomainError, "integration limits need 0 <= a < b <= inf");
    if (!(tol > 0)) throw Error(ErrorCode::InvalidInput, "tolerance must be positive");
    const RadialFunction f = checked(f_raw);
    IntegralResult res;
    auto add = [&res](const IntegralResult& r) {
        res.value += r.value;
        res.error += r.error;
        res.evaluations += r.evaluations;
    };
    double upper = b;
    if (b == kInf) {
        const double c = std::max(a, 1.0);
        add(infinity_part(f, c, tol));
        upper = c;
    }
    if (upper > a) {
        if (a == 0)
            add(zero_part(f, upper, tol));
        else
            add(finite_part(f, a, upper, tol));
    }
    return res;
}

double adaptive_integral(const RadialFunction& f, double a, double b, double tol) {
    return integrate(f, a, b, tol).value;
}

double log_integral(const RadialFunction& log_f, double a, double b, double tol) {
    // Rescale by the largest log value among a few representative points.
    std::vector<double> probes;
    if (a > 0) probes.push_back(a);
    if (b != kInf) probes.push_back(b);
    if (a > 0 && b != kInf) probes.push_back(std::sqrt(a * b));
    if (b == kInf)
        for (double m : {1.0, 1e1, 1e3, 1e6}) probes.push_back(std::max(a, 1.0) * m);
    if (a == 0)
        for (double m : {1e-1, 1e-3, 1e-6}) probes.push_back(std::min(b, 1.0) * m);
    double ref = -kInf;
    for (double s : probes) {
        const double v = log_f(s);
        if (std::isnan(v) || v == kInf) throw Error(ErrorCode::NonFinite, "log integrand not finite");
        ref = std::max(ref, v);
    }
    if (ref == -kInf) ref = 0.0;
    auto f = [&log_f, ref](double s) {
        const double v = log_f(s);
        if (std::isnan(v) || v == kInf) return std::numeric_limits<double>::quiet_NaN();
        return std::exp(v - ref);
    };
    const double val = adaptive_integral(f, a, b, tol);
    if (val <= 0) return -kInf;
    return ref + std::log(val);
}

namespace {
double log_add(double x, double y) {
    if (x == -kInf) return y;
    if (y == -kInf) return x;
    const double m = std::max(x, y);
    return m + std::log1p(std::exp(std::min(x, y) - m));
}
}  // namespace

std::vector<double> log_cumulative_from_zero(const RadialFunction& log_f,
                                             const std::vector<double>& nodes, double tol) {
    std::vector<double> out(nodes.size());
    if (nodes.empty()) return out;
    out[0] = log_integral(log_f, 0.0, nodes[0], tol);
    for (std::size_t i = 1; i < nodes.size(); ++i)
        out[i] = log_add(out[i - 1], log_integral(log_f, nodes[i - 1], nodes[i], tol));
    return out;
}

std::vector<double> log_cumulative_to_infinity(const RadialFunction& log_f,
                                               const std::vector<double>& nodes, double tol) {
    std::vector<double> out(nodes.size());
    if (nodes.empty()) return out;
    const std::size_t n = nodes.size();
    out[n - 1] = log_integral(log_f, nodes[n - 1], kInf, tol);
    for (std::size_t i = n - 1; i-- > 0;)
        out[i] = log_add(out[i + 1], log_integral(log_f, nodes[i], nodes[i + 1], tol));
    return out;
}

}  // namespace layerpot
