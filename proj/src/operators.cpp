#include "layerpot/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "layerpot/parallel.hpp"

namespace layerpot {

namespace {

struct RayRule {
    std::vector<Point> dirs;
    std::vector<double> w;
    std::vector<std::size_t> pair;
};

double dot(const double* a, const double* b, int n);

// Nodes and weights on [a, b] for integrands with square-root behaviour at
// both ends: x = a + (b - a)(1 - cos(pi s))/2 with Gauss points in s.
void clustered(double a, double b, int n, std::vector<double>& x, std::vector<double>& w) {
    const GaussRule& gl = gauss_legendre(n);
    const double L = b - a;
    for (int m = 0; m < n; ++m) {
        const double s = 0.5 * (1 + gl.x[static_cast<std::size_t>(m)]);
        x.push_back(a + 0.5 * L * (1 - std::cos(kPi * s)));
        w.push_back(0.5 * gl.w[static_cast<std::size_t>(m)] * 0.5 * L * kPi * std::sin(kPi * s));
    }
}

std::vector<double> symmetric_points(std::vector<double> pts, double lo, double hi) {
    pts.push_back(lo);
    pts.push_back(0.0);
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    std::vector<double> u;
    for (double v : pts)
        if (u.empty() || v - u.back() > 1e-12) u.push_back(v);
    return u;
}

// Ray directions for target x. Without tangent splitting, or at the origin,
// an equispaced (N = 2) or Gauss x equispaced (N = 3) rule. Otherwise the
// rule is aligned with the axis from x to the origin and split where rays
// touch the spheres |y| = b of the panel boundaries; every direction has its
// antipode in the rule.
RayRule make_rays(const PolarGrid& g, const double* x, const QuadratureSpec& spec) {
    const int N = g.dim();
    const int a = spec.angular_order;
    const double d = std::sqrt(dot(x, x, N));
    RayRule rr;
    std::vector<double> tangent;
    if (spec.tangent_splitting && d > 0) {
        const double R = std::min(g.r_max(), spec.r_max);
        if (R < d) tangent.push_back(R / d);
        for (double b : spec.split_radii)
            if (b > 0 && b < std::min(R, d)) tangent.push_back(b / d);
        if (spec.r_min > 0 && spec.r_min < d) tangent.push_back(spec.r_min / d);
    }
    if (N == 2) {
        if (tangent.empty()) {
            const double h = 2 * kPi / a;
            for (int j = 0; j < a; ++j) {
                const double t = h * (j + 0.5);
                rr.dirs.push_back({std::cos(t), std::sin(t)});
                rr.w.push_back(h);
                rr.pair.push_back(static_cast<std::size_t>((j + a / 2) % a));
            }
            return rr;
        }
        std::vector<double> pts;
        for (double t : tangent) {
            const double ang = std::asin(std::min(1.0, t));
            for (double v : {ang, -ang, kPi - ang, ang - kPi}) pts.push_back(v);
        }
        const std::vector<double> iv = symmetric_points(pts, -kPi, kPi);
        const double base = std::atan2(-x[1], -x[0]);
        std::vector<std::size_t> start;
        std::vector<double> psi, w;
        for (std::size_t k = 0; k + 1 < iv.size(); ++k) {
            start.push_back(psi.size());
            const double L = iv[k + 1] - iv[k];
            const int n = std::max(8, static_cast<int>(std::ceil(a * L / kPi)));
            clustered(iv[k], iv[k + 1], n, psi, w);
        }
        start.push_back(psi.size());
        const std::size_t half = (iv.size() - 1) / 2;
        for (std::size_t k = 0; k + 1 < iv.size(); ++k) {
            const std::size_t k2 = (k + half) % (iv.size() - 1);
            for (std::size_t m = start[k]; m < start[k + 1]; ++m) {
                rr.dirs.push_back({std::cos(base + psi[m]), std::sin(base + psi[m])});
                rr.w.push_back(w[m]);
                rr.pair.push_back(start[k2] + (m - start[k]));
            }
        }
        return rr;
    }
    // N = 3
    double e[3] = {0, 0, 1}, u1[3] = {1, 0, 0}, u2[3] = {0, 1, 0};
    std::vector<double> mu, wmu;
    if (tangent.empty()) {
        const GaussRule& gl = gauss_legendre(std::max(2, a / 2));
        mu = gl.x;
        wmu = gl.w;
    } else {
        for (int i = 0; i < 3; ++i) e[i] = -x[i] / d;
        // any unit vector orthogonal to e, then the third by a cross product
        const int m = std::abs(e[0]) < 0.6 ? 0 : (std::abs(e[1]) < 0.6 ? 1 : 2);
        double t[3] = {0, 0, 0};
        t[m] = 1;
        const double te = dot(t, e, 3);
        double nrm = 0;
        for (int i = 0; i < 3; ++i) {
            u1[i] = t[i] - te * e[i];
            nrm += u1[i] * u1[i];
        }
        nrm = std::sqrt(nrm);
        for (double& v : u1) v /= nrm;
        u2[0] = e[1] * u1[2] - e[2] * u1[1];
        u2[1] = e[2] * u1[0] - e[0] * u1[2];
        u2[2] = e[0] * u1[1] - e[1] * u1[0];
        // pieces in the polar angle from e, mirrored about pi / 2
        std::vector<double> pts;
        for (double tt : tangent) {
            const double ang = std::asin(std::min(1.0, tt));
            pts.push_back(ang);
            pts.push_back(kPi - ang);
        }
        pts.push_back(0.5 * kPi);
        const std::vector<double> iv = symmetric_points(pts, 0.0, kPi);
        std::vector<double> psi, wpsi;
        for (std::size_t k = 0; k + 1 < iv.size(); ++k) {
            if (iv[k + 1] <= iv[k]) continue;
            const int n = std::max(8, static_cast<int>(std::ceil(2 * a * (iv[k + 1] - iv[k]) / kPi)));
            clustered(iv[k], iv[k + 1], n, psi, wpsi);
        }
        for (std::size_t i = 0; i < psi.size(); ++i) {
            mu.push_back(std::cos(psi[i]));
            wmu.push_back(wpsi[i] * std::sin(psi[i]));
        }
    }
    const std::size_t nmu = mu.size();
    const int nphi = a;
    const double h = 2 * kPi / nphi;
    for (std::size_t i = 0; i < nmu; ++i) {
        const double st = std::sqrt(std::max(0.0, 1 - mu[i] * mu[i]));
        for (int j = 0; j < nphi; ++j) {
            const double ph = h * (j + 0.5), c = std::cos(ph), s = std::sin(ph);
            Point dir(3);
            for (int k = 0; k < 3; ++k) dir[static_cast<std::size_t>(k)] = mu[i] * e[k] + st * (c * u1[k] + s * u2[k]);
            rr.dirs.push_back(std::move(dir));
            rr.w.push_back(wmu[i] * h);
            rr.pair.push_back((nmu - 1 - i) * static_cast<std::size_t>(nphi) +
                              static_cast<std::size_t>((j + nphi / 2) % nphi));
        }
    }
    return rr;
}

double dot(const double* a, const double* b, int n) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

// Points where the ray x + rho * omega crosses a radial panel boundary, the
// closest approach to the origin, and the exit from the support (`end`).
void ray_breaks(const PolarGrid& g, const double* x, const double* om, const QuadratureSpec& spec,
                std::vector<double>& out, double& end) {
    const int N = g.dim();
    const double xw = dot(x, om, N), xx = dot(x, x, N);
    const double R = std::min(g.r_max(), spec.r_max);
    auto roots = [&](double b, double& lo, double& hi) {
        const double disc = xw * xw - xx + b * b;
        if (disc < 0) return false;
        const double sq = std::sqrt(disc);
        lo = -xw - sq;
        hi = -xw + sq;
        return true;
    };
    out.clear();
    double lo, hi;
    end = 0;
    if (!roots(R, lo, hi) || hi <= 0) return;
    end = hi;
    auto add = [&](double b) {
        double l, h;
        if (!roots(b, l, h)) return;
        if (l > 0 && l < end) out.push_back(l);
        if (h > 0 && h < end) out.push_back(h);
    };
    for (double b : g.breaks())
        if (b > 0 && b < R) add(b);
    for (double b : spec.split_radii)
        if (b > 0 && b < R) add(b);
    if (spec.r_min > 0) add(spec.r_min);
    if (lo > 0) out.push_back(lo);
    if (-xw > 0 && -xw < end) out.push_back(-xw);
}

void finish_breaks(std::vector<double>& b, double end) {
    b.push_back(0.0);
    b.push_back(end);
    std::sort(b.begin(), b.end());
    std::vector<double> u;
    for (double v : b)
        if (u.empty() || v - u.back() > 1e-14 * std::max(1.0, end)) u.push_back(v);
    b = std::move(u);
}

// Per-shell multipliers for the principal value: shells 0..2 are the
// intervals [0, eps/4), [eps/4, eps/2), [eps/2, eps); shell 3 is the rest.
struct PvPlan {
    double eps = 0;
    double mult[4] = {1, 1, 1, 1};
};

int shell_of(double rho, double eps) {
    if (rho < 0.25 * eps) return 0;
    if (rho < 0.5 * eps) return 1;
    if (rho < eps) return 2;
    return 3;
}

class Engine {
public:
    Engine(const PolarGrid& g, const LipschitzGraph& surf, const QuadratureSpec& spec)
        : g_(g), surf_(surf), spec_(spec), gauss_(gauss_legendre(spec.radial_order)) {}

    // sink(y, w, shell) with S u(x) = sum w u(y).
    template <class Sink>
    void single_layer(const double* x, Sink&& sink) const {
        const int N = g_.dim();
        const double phix = surf_.phi(x);
        const RayRule rays = make_rays(g_, x, spec_);
        std::vector<double> br;
        double y[3];
        for (std::size_t i = 0; i < rays.dirs.size(); ++i) {
            const double* om = rays.dirs[i].data();
            double end;
            ray_breaks(g_, x, om, spec_, br, end);
            if (end <= 0) continue;
            finish_breaks(br, end);
            for (std::size_t s = 0; s + 1 < br.size(); ++s) {
                const double a = br[s], h = 0.5 * (br[s + 1] - a);
                for (std::size_t m = 0; m < gauss_.x.size(); ++m) {
                    const double rho = a + h * (1 + gauss_.x[m]);
                    for (int d = 0; d < N; ++d) y[d] = x[d] + rho * om[d];
                    if (!in_support(y)) continue;
                    const double q = (surf_.phi(y) - phix) / rho;
                    const double val = surf_.surface_element(y) * std::pow(1 + q * q, 0.5 * (1 - N));
                    sink(y, rays.w[i] * h * gauss_.w[m] * val, 3);
                }
            }
        }
    }

    // sink(y, w, shell) with T_k u(x) = sum_shell plan.mult[shell] * sum w u(y).
    template <class Sink>
    PvPlan singular(const double* x, int k, Sink&& sink) const {
        const int N = g_.dim();
        const double phix = surf_.phi(x);
        PvPlan plan;
        plan.eps = spec_.split_radius_factor * g_.local_spacing(std::sqrt(dot(x, x, N)));
        if (!spec_.pv_symmetrization) {
            plan.mult[0] = plan.mult[1] = 0;
            plan.mult[2] = 2;
        }
        const RayRule rays = make_rays(g_, x, spec_);
        std::vector<double> br, br2;
        double y[3];
        for (std::size_t i = 0; i < rays.dirs.size(); ++i) {
            const std::size_t j = rays.pair[i];
            if (spec_.pv_symmetrization && j < i) continue;
            const double* om[2] = {rays.dirs[i].data(), rays.dirs[j].data()};
            const int sides = spec_.pv_symmetrization ? 2 : 1;
            double ends[2] = {0, 0};
            ray_breaks(g_, x, om[0], spec_, br, ends[0]);
            if (sides == 2) {
                ray_breaks(g_, x, om[1], spec_, br2, ends[1]);
                br.insert(br.end(), br2.begin(), br2.end());
            }
            const double end = std::max(ends[0], ends[1]);
            if (end <= 0) continue;
            for (double f : {0.25, 0.5, 1.0})
                if (f * plan.eps < end) br.push_back(f * plan.eps);
            finish_breaks(br, end);
            for (std::size_t s = 0; s + 1 < br.size(); ++s) {
                const double a = br[s], h = 0.5 * (br[s + 1] - a);
                for (std::size_t m = 0; m < gauss_.x.size(); ++m) {
                    const double rho = a + h * (1 + gauss_.x[m]);
                    const int shell = shell_of(rho, plan.eps);
                    if (plan.mult[shell] == 0) continue;
                    for (int side = 0; side < sides; ++side) {
                        if (rho > ends[side]) continue;
                        for (int d = 0; d < N; ++d) y[d] = x[d] + rho * om[side][d];
                        if (!in_support(y)) continue;
                        const double q = (surf_.phi(y) - phix) / rho;
                        const double base =
                            surf_.surface_element(y) * std::pow(1 + q * q, -0.5 * (N + 1)) / rho;
                        const double c = k <= N ? -om[side][k - 1] : -q;
                        sink(y, rays.w[i] * h * gauss_.w[m] * c * base, shell);
                    }
                }
            }
        }
        return plan;
    }

private:
    bool in_support(const double* y) const {
        if (spec_.r_min <= 0 && spec_.r_max == kInf) return true;
        const double r = std::sqrt(dot(y, y, g_.dim()));
        return r >= spec_.r_min && r <= spec_.r_max;
    }

    const PolarGrid& g_;
    const LipschitzGraph& surf_;
    const QuadratureSpec& spec_;
    const GaussRule& gauss_;
};

struct ValueSink {
    const PolarGridFunction& u;
    double shells[4] = {0, 0, 0, 0};
    double abs_shells[4] = {0, 0, 0, 0};
    void operator()(const double* y, double w, int shell) {
        const double v = u.eval(y);
        shells[shell] += w * v;
        abs_shells[shell] += std::abs(w * v);
    }
};

void check_targets(const std::vector<Point>& targets, int N) {
    for (const auto& t : targets) {
        if (static_cast<int>(t.size()) != N) throw Error(ErrorCode::InvalidInput, "target dimension mismatch");
        for (double c : t)
            if (!std::isfinite(c)) throw Error(ErrorCode::NonFinite, "target coordinate not finite");
    }
}

void check_inputs(const PolarGridFunction& u, const LipschitzGraph& surf, const std::vector<Point>& targets,
                  const QuadratureSpec& spec) {
    u.validate();
    spec.validate();
    if (surf.dim() != u.grid->dim()) throw Error(ErrorCode::InvalidInput, "surface and grid dimensions differ");
    check_targets(targets, surf.dim());
}

std::vector<std::string> truncation_warnings(const PolarGridFunction& u) {
    const PolarGrid& g = *u.grid;
    double peak = 0, edge = 0;
    for (std::size_t i = 0; i < g.n_radial(); ++i)
        for (std::size_t j = 0; j < g.n_angular(); ++j) {
            const double v = std::abs(u.at(i, j));
            peak = std::max(peak, v);
            if (i + 1 == g.n_radial()) edge = std::max(edge, v);
        }
    if (peak > 0 && edge > 1e-8 * peak) {
        std::ostringstream os;
        os << "Truncation: density at r_max is " << edge / peak << " of its maximum";
        return {os.str()};
    }
    return {};
}

double apply_single(const Engine& e, const PolarGridFunction& u, const Point& x) {
    ValueSink sink{u};
    e.single_layer(x.data(), sink);
    return sink.shells[3];
}

double apply_singular(const Engine& e, const PolarGridFunction& u, const Point& x, int k) {
    ValueSink sink{u};
    const PvPlan plan = e.singular(x.data(), k, sink);
    double v = 0;
    for (int s = 0; s < 4; ++s) v += plan.mult[s] * sink.shells[s];
    const double s1 = sink.shells[1], s2 = sink.shells[2];
    double peak = 0;
    for (double val : u.values) peak = std::max(peak, std::abs(val));
    if (std::abs(s2) > 1e-3 * std::max(sink.abs_shells[2], peak) && std::abs(s1) > 0.9 * std::abs(s2)) {
        std::ostringstream os;
        os << "principal value shells do not shrink at x = (";
        for (std::size_t d = 0; d < x.size(); ++d) os << (d ? ", " : "") << x[d];
        os << "): " << s1 << " vs " << s2;
        throw Error(ErrorCode::PVNotConverged, os.str());
    }
    return v;
}

double agm(double a, double b) {
    for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
        const double m = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = m;
    }
    return 0.5 * (a + b);
}

}  // namespace

QuadratureSpec QuadratureSpec::defaults(int N) {
    QuadratureSpec s;
    s.angular_order = N == 2 ? 64 : 24;
    return s;
}

void QuadratureSpec::validate() const {
    if (!(r_min >= 0) || !(r_max > r_min)) throw Error(ErrorCode::InvalidInput, "quadrature needs 0 <= r_min < r_max");
    if (!(split_radius_factor >= 1) || !std::isfinite(split_radius_factor))
        throw Error(ErrorCode::InvalidInput, "split_radius_factor must be >= 1");
    if (radial_order < 2) throw Error(ErrorCode::InvalidInput, "radial_order must be >= 2");
    if (angular_order < 4 || angular_order % 2)
        throw Error(ErrorCode::InvalidInput, "angular_order must be even and >= 4");
    for (double b : split_radii)
        if (!(b > 0) || !std::isfinite(b)) throw Error(ErrorCode::InvalidInput, "split radii must be positive");
}

QuadratureSpec QuadratureSpec::coarse() const {
    QuadratureSpec c = *this;
    c.radial_order = std::max(2, radial_order - 2);
    c.angular_order = std::max(4, 2 * ((angular_order / 2 + 1) / 2));
    return c;
}

OperatorResult single_layer_apply(const PolarGridFunction& u, const LipschitzGraph& surf,
                                  const std::vector<Point>& targets, const QuadratureSpec& spec) {
    check_inputs(u, surf, targets, spec);
    OperatorResult res;
    res.values.resize(targets.size());
    std::vector<double> coarse(targets.size());
    const QuadratureSpec cs = spec.coarse();
    const Engine fine(*u.grid, surf, spec), rough(*u.grid, surf, cs);
    parallel_for(targets.size(), [&](std::size_t t) {
        res.values[t] = apply_single(fine, u, targets[t]);
        coarse[t] = apply_single(rough, u, targets[t]);
    });
    for (std::size_t t = 0; t < targets.size(); ++t)
        res.error_estimate = std::max(res.error_estimate, std::abs(res.values[t] - coarse[t]));
    res.warnings = truncation_warnings(u);
    return res;
}

OperatorResult singular_Tk_apply(const PolarGridFunction& u, const LipschitzGraph& surf, int k,
                                 const std::vector<Point>& targets, const QuadratureSpec& spec) {
    check_inputs(u, surf, targets, spec);
    const int N = surf.dim();
    if (k < 1 || k > N + 1) throw Error(ErrorCode::InvalidInput, "T_k needs 1 <= k <= N+1");
    OperatorResult res;
    res.values.assign(targets.size(), 0.0);
    res.warnings = truncation_warnings(u);
    if (k == N + 1 && surf.is_flat()) return res;
    std::vector<double> coarse(targets.size());
    const QuadratureSpec cs = spec.coarse();
    const Engine fine(*u.grid, surf, spec), rough(*u.grid, surf, cs);
    parallel_for(targets.size(), [&](std::size_t t) {
        res.values[t] = apply_singular(fine, u, targets[t], k);
        coarse[t] = apply_singular(rough, u, targets[t], k);
    });
    for (std::size_t t = 0; t < targets.size(); ++t)
        res.error_estimate = std::max(res.error_estimate, std::abs(res.values[t] - coarse[t]));
    return res;
}

GradientResult gradient_single_layer(const PolarGridFunction& u, const LipschitzGraph& surf,
                                     const std::vector<Point>& targets, const QuadratureSpec& spec) {
    const int N = surf.dim();
    GradientResult res;
    res.values.assign(targets.size(), Point(static_cast<std::size_t>(N), 0.0));
    const OperatorResult tn = singular_Tk_apply(u, surf, N + 1, targets, spec);
    res.warnings = tn.warnings;
    std::vector<Point> grads(targets.size(), Point(static_cast<std::size_t>(N), 0.0));
    if (!surf.is_flat())
        for (std::size_t t = 0; t < targets.size(); ++t) grads[t] = surf.grad_phi(targets[t]);
    for (int k = 1; k <= N; ++k) {
        const OperatorResult tk = singular_Tk_apply(u, surf, k, targets, spec);
        for (std::size_t t = 0; t < targets.size(); ++t) {
            const double gk = grads[t][static_cast<std::size_t>(k - 1)];
            res.values[t][static_cast<std::size_t>(k - 1)] = (1.0 - N) * (tk.values[t] + gk * tn.values[t]);
        }
        res.error_estimate =
            std::max(res.error_estimate, (N - 1.0) * (tk.error_estimate + tn.error_estimate));
    }
    return res;
}

std::vector<Point> gradient_finite_difference(const PolarGridFunction& u, const LipschitzGraph& surf,
                                              const std::vector<Point>& targets, const QuadratureSpec& spec,
                                              double h) {
    if (!(h > 0)) throw Error(ErrorCode::InvalidInput, "finite-difference step must be positive");
    const int N = surf.dim();
    std::vector<Point> shifted;
    for (const auto& x : targets)
        for (int k = 0; k < N; ++k)
            for (double s : {h, -h}) {
                Point y = x;
                y[static_cast<std::size_t>(k)] += s;
                shifted.push_back(std::move(y));
            }
    const OperatorResult v = single_layer_apply(u, surf, shifted, spec);
    std::vector<Point> out(targets.size(), Point(static_cast<std::size_t>(N)));
    for (std::size_t t = 0; t < targets.size(); ++t)
        for (int k = 0; k < N; ++k) {
            const std::size_t b = (t * static_cast<std::size_t>(N) + static_cast<std::size_t>(k)) * 2;
            out[t][static_cast<std::size_t>(k)] = (v.values[b] - v.values[b + 1]) / (2 * h);
        }
    return out;
}

std::vector<double> single_layer_row(const PolarGrid& grid, const LipschitzGraph& surf, const Point& x,
                                     const QuadratureSpec& spec) {
    spec.validate();
    if (surf.dim() != grid.dim()) throw Error(ErrorCode::InvalidInput, "surface and grid dimensions differ");
    check_targets({x}, grid.dim());
    std::vector<double> row(grid.size(), 0.0);
    PolarGrid::Stencil st;
    const Engine e(grid, surf, spec);
    e.single_layer(x.data(), [&](const double* y, double w, int) {
        grid.stencil(y, st);
        if (!st.inside) return;
        for (std::size_t a = 0; a < st.radial.size(); ++a) {
            const double wa = w * st.radial[a];
            double* dst = row.data() + grid.index(st.first_radial + a, 0);
            for (std::size_t b = 0; b < st.angular.size(); ++b) dst[b] += wa * st.angular[b];
        }
    });
    return row;
}

double riesz_sphere_mean(int N, double t, double s) {
    if (N != 2 && N != 3) throw Error(ErrorCode::InvalidInput, "sphere means are provided for N = 2, 3");
    if (!(t >= 0) || !(s >= 0)) throw Error(ErrorCode::DomainError, "radii must be nonnegative");
    const double area = N == 2 ? 2 * kPi : 4 * kPi;
    if (t == 0 || s == 0) {
        const double m = std::max(t, s);
        return m == 0 ? kInf : area * std::pow(m, 1 - N);
    }
    if (t == s) return kInf;
    if (N == 2) {
        const double kp = std::abs(t - s) / (t + s);
        return 4.0 / (t + s) * kPi / (2 * agm(1.0, kp));
    }
    return 2 * kPi / (t * s) * std::log((t + s) / std::abs(t - s));
}

double riesz_oracle_radial(const RadialFunction& u, int N, double target_radius, double support,
                           const std::vector<double>& breaks, double tol) {
    if (N != 2 && N != 3) throw Error(ErrorCode::InvalidInput, "the radial oracle covers N = 2, 3");
    if (!(target_radius >= 0) || !std::isfinite(target_radius))
        throw Error(ErrorCode::DomainError, "target radius must be finite and >= 0");
    if (!(support > 0) || !std::isfinite(support)) throw Error(ErrorCode::InvalidInput, "support must be positive");
    std::vector<double> pts{0.0, support};
    for (double b : breaks)
        if (b > 0 && b < support) pts.push_back(b);
    if (target_radius > 0 && target_radius < support) pts.push_back(target_radius);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double t = target_radius;
    auto f = [&](double s) {
        const double v = u(s);
        return v == 0 ? 0.0 : v * std::pow(s, N - 1) * riesz_sphere_mean(N, t, s);
    };
    double total = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += adaptive_integral(f, pts[i], pts[i + 1], tol);
    return total;
}

}  // namespace layerpot
