#include "layerpot/polar_grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace layerpot {

namespace {

// Barycentric weights for Lagrange interpolation on the given nodes.
std::vector<double> barycentric_weights(const std::vector<double>& x) {
    std::vector<double> w(x.size(), 1.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = 0; k < x.size(); ++k)
            if (k != i) w[i] /= x[i] - x[k];
    return w;
}

void lagrange(const std::vector<double>& x, const std::vector<double>& bw, double t, double* out) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(t - x[i]) < 1e-14) {
            for (std::size_t k = 0; k < n; ++k) out[k] = k == i ? 1.0 : 0.0;
            return;
        }
    }
    double den = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = bw[i] / (t - x[i]);
        den += out[i];
    }
    for (std::size_t i = 0; i < n; ++i) out[i] /= den;
}

// Derivatives of the Lagrange cardinal functions at t.
void lagrange_derivative(const std::vector<double>& x, const std::vector<double>& bw, double t, double* out) {
    const std::size_t n = x.size();
    std::vector<double> l(n);
    lagrange(x, bw, t, l.data());
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(t - x[j]) < 1e-14) {
            // differentiation matrix row at a node
            double diag = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == j) continue;
                out[k] = bw[k] / bw[j] / (x[j] - x[k]);
                diag -= out[k];
            }
            out[j] = diag;
            return;
        }
    }
    double s = 0;
    for (std::size_t k = 0; k < n; ++k) s += 1.0 / (t - x[k]);
    for (std::size_t j = 0; j < n; ++j) {
        // l_j'(t) = l_j(t) * sum_{k != j} 1/(t - x_k)
        out[j] = l[j] * (s - 1.0 / (t - x[j]));
    }
}

// Trigonometric cardinal functions on n equispaced nodes theta_j = 2 pi (j + 1/2) / n.
void trig_cardinal(int n, double theta, double* out) {
    const double h = 2 * kPi / n;
    for (int j = 0; j < n; ++j) {
        const double t = std::remainder(theta - h * (j + 0.5), 2 * kPi);
        if (std::abs(t) < 1e-14) {
            for (int k = 0; k < n; ++k) out[k] = k == j ? 1.0 : 0.0;
            return;
        }
        const double half = 0.5 * t;
        out[j] = n % 2 == 0 ? std::sin(n * half) / (n * std::tan(half)) : std::sin(n * half) / (n * std::sin(half));
    }
}

}  // namespace

PolarGrid PolarGrid::make(int N, double r_max, int panels, int order, int angular) {
    if (!(r_max > 0) || !std::isfinite(r_max)) throw Error(ErrorCode::InvalidInput, "grid r_max must be positive");
    if (panels < 1) throw Error(ErrorCode::InvalidInput, "grid needs at least one panel");
    std::vector<double> b(static_cast<std::size_t>(panels) + 1);
    for (int k = 0; k <= panels; ++k) b[static_cast<std::size_t>(k)] = r_max * k / panels;
    b.back() = r_max;
    return with_breaks(N, std::move(b), order, angular);
}

PolarGrid PolarGrid::with_breaks(int N, std::vector<double> breaks, int order, int angular) {
    if (N != 2 && N != 3) throw Error(ErrorCode::InvalidInput, "polar grids are provided for N = 2 and N = 3");
    if (order < 2) throw Error(ErrorCode::InvalidInput, "radial order must be >= 2");
    if (angular < 2) throw Error(ErrorCode::InvalidInput, "angular order must be >= 2");
    if (breaks.size() < 2 || breaks.front() != 0.0)
        throw Error(ErrorCode::InvalidInput, "radial breaks must start at 0 and have at least two entries");
    for (std::size_t k = 1; k < breaks.size(); ++k)
        if (!(breaks[k] > breaks[k - 1]) || !std::isfinite(breaks[k]))
            throw Error(ErrorCode::InvalidInput, "radial breaks must be finite and increasing");
    PolarGrid g;
    g.N_ = N;
    g.order_ = order;
    g.breaks_ = std::move(breaks);
    const GaussRule& gl = gauss_legendre(order);
    g.ref_x_ = gl.x;
    g.bary_ = barycentric_weights(gl.x);
    for (std::size_t k = 0; k + 1 < g.breaks_.size(); ++k) {
        const double a = g.breaks_[k], h = 0.5 * (g.breaks_[k + 1] - a);
        for (int i = 0; i < order; ++i) {
            g.r_.push_back(a + h * (1 + gl.x[static_cast<std::size_t>(i)]));
            g.wr_.push_back(h * gl.w[static_cast<std::size_t>(i)]);
        }
    }
    g.build_angular(angular);
    return g;
}

void PolarGrid::build_angular(int angular) {
    if (N_ == 2) {
        const double h = 2 * kPi / angular;
        for (int j = 0; j < angular; ++j) {
            const double t = h * (j + 0.5);
            dirs_.push_back({std::cos(t), std::sin(t)});
            wdir_.push_back(h);
        }
        return;
    }
    n_mu_ = angular;
    n_phi_ = 2 * angular;
    const GaussRule& gl = gauss_legendre(n_mu_);
    mu_ = gl.x;
    mu_bary_ = barycentric_weights(mu_);
    const double h = 2 * kPi / n_phi_;
    for (int a = 0; a < n_mu_; ++a) {
        const double mu = mu_[static_cast<std::size_t>(a)], st = std::sqrt(1 - mu * mu);
        for (int b = 0; b < n_phi_; ++b) {
            const double ph = h * (b + 0.5);
            dirs_.push_back({st * std::cos(ph), st * std::sin(ph), mu});
            wdir_.push_back(gl.w[static_cast<std::size_t>(a)] * h);
        }
    }
}

Point PolarGrid::node(std::size_t i, std::size_t j) const {
    Point x = dirs_[j];
    for (double& c : x) c *= r_[i];
    return x;
}

std::vector<Point> PolarGrid::nodes() const {
    std::vector<Point> out;
    out.reserve(size());
    for (std::size_t i = 0; i < n_radial(); ++i)
        for (std::size_t j = 0; j < n_angular(); ++j) out.push_back(node(i, j));
    return out;
}

double PolarGrid::volume_weight(std::size_t i, std::size_t j) const {
    return wr_[i] * std::pow(r_[i], N_ - 1) * wdir_[j];
}

int PolarGrid::panel_of(double r) const {
    if (!(r >= 0) || r >= breaks_.back()) return -1;
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), r);
    return static_cast<int>(it - breaks_.begin()) - 1;
}

double PolarGrid::local_spacing(double r) const {
    int k = panel_of(r);
    if (k < 0) k = panels() - 1;
    return (breaks_[static_cast<std::size_t>(k) + 1] - breaks_[static_cast<std::size_t>(k)]) / order_;
}

bool PolarGrid::radial_stencil(double r, std::size_t& first, std::vector<double>& w) const {
    const int k = panel_of(r);
    if (k < 0) return false;
    const double a = breaks_[static_cast<std::size_t>(k)], b = breaks_[static_cast<std::size_t>(k) + 1];
    w.resize(static_cast<std::size_t>(order_));
    lagrange(ref_x_, bary_, (2 * r - a - b) / (b - a), w.data());
    first = static_cast<std::size_t>(k) * static_cast<std::size_t>(order_);
    return true;
}

bool PolarGrid::radial_stencil_derivative(double r, std::size_t& first, std::vector<double>& w) const {
    const int k = panel_of(r);
    if (k < 0) return false;
    const double a = breaks_[static_cast<std::size_t>(k)], b = breaks_[static_cast<std::size_t>(k) + 1];
    w.resize(static_cast<std::size_t>(order_));
    lagrange_derivative(ref_x_, bary_, (2 * r - a - b) / (b - a), w.data());
    for (double& v : w) v *= 2 / (b - a);
    first = static_cast<std::size_t>(k) * static_cast<std::size_t>(order_);
    return true;
}

void PolarGrid::angular_weights(const double* u, std::vector<double>& w) const {
    w.resize(dirs_.size());
    if (N_ == 2) {
        trig_cardinal(static_cast<int>(dirs_.size()), std::atan2(u[1], u[0]), w.data());
        return;
    }
    const double mu = std::clamp(u[2], -1.0, 1.0);
    const double ph = (u[0] == 0 && u[1] == 0) ? 0.0 : std::atan2(u[1], u[0]);
    std::vector<double> lm(static_cast<std::size_t>(n_mu_)), lp(static_cast<std::size_t>(n_phi_)),
        lq(static_cast<std::size_t>(n_phi_));
    lagrange(mu_, mu_bary_, mu, lm.data());
    trig_cardinal(n_phi_, ph, lp.data());
    trig_cardinal(n_phi_, ph + kPi, lq.data());
    // Odd azimuthal modes carry a factor sin(theta); they are interpolated in
    // cos(theta) after dividing it out.
    const double st = std::sqrt(std::max(0.0, 1 - mu * mu));
    for (int a = 0; a < n_mu_; ++a) {
        const double ratio = st / std::sqrt(1 - mu_[static_cast<std::size_t>(a)] * mu_[static_cast<std::size_t>(a)]);
        for (int b = 0; b < n_phi_; ++b) {
            const double even = 0.5 * (lp[static_cast<std::size_t>(b)] + lq[static_cast<std::size_t>(b)]);
            const double odd = 0.5 * (lp[static_cast<std::size_t>(b)] - lq[static_cast<std::size_t>(b)]);
            w[static_cast<std::size_t>(a * n_phi_ + b)] = lm[static_cast<std::size_t>(a)] * (even + ratio * odd);
        }
    }
}

void PolarGrid::stencil(const double* y, Stencil& out) const {
    double r2 = 0;
    for (int d = 0; d < N_; ++d) r2 += y[d] * y[d];
    const double r = std::sqrt(r2);
    out.inside = radial_stencil(r, out.first_radial, out.radial);
    if (!out.inside) return;
    double unit[3] = {1.0, 0.0, 0.0};
    if (r > 0)
        for (int d = 0; d < N_; ++d) unit[d] = y[d] / r;
    angular_weights(unit, out.angular);
}

std::vector<std::vector<double>> PolarGrid::gradient(const std::vector<double>& v) const {
    if (v.size() != size()) throw Error(ErrorCode::InvalidInput, "grid function size mismatch");
    const std::size_t nr = n_radial(), na = n_angular(), q = static_cast<std::size_t>(order_);
    std::vector<std::vector<double>> out(static_cast<std::size_t>(N_), std::vector<double>(size(), 0.0));
    // reference differentiation matrix on one panel
    std::vector<double> dref(q * q);
    for (std::size_t l = 0; l < q; ++l) lagrange_derivative(ref_x_, bary_, ref_x_[l], dref.data() + l * q);
    // angular differentiation: periodic (theta or azimuth) and cos(theta)
    auto periodic = [](int n) {
        std::vector<double> d(static_cast<std::size_t>(n * n), 0.0);
        const double h = 2 * kPi / n;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (j == k) continue;
                const double half = 0.5 * h * (j - k), sg = (j - k) % 2 ? -1.0 : 1.0;
                d[static_cast<std::size_t>(j * n + k)] =
                    n % 2 == 0 ? 0.5 * sg / std::tan(half) : 0.5 * sg / std::sin(half);
            }
        return d;
    };
    std::vector<double> dmu;
    if (N_ == 3) {
        dmu.resize(static_cast<std::size_t>(n_mu_ * n_mu_));
        for (int a = 0; a < n_mu_; ++a)
            lagrange_derivative(mu_, mu_bary_, mu_[static_cast<std::size_t>(a)], dmu.data() + a * n_mu_);
    }
    const std::vector<double> dper = periodic(N_ == 2 ? static_cast<int>(na) : n_phi_);
    std::vector<double> fr(na), ft(na), fp(na);
    for (std::size_t i = 0; i < nr; ++i) {
        const std::size_t panel = i / q, l = i % q;
        const double a = breaks_[panel], b = breaks_[panel + 1], r = r_[i];
        for (std::size_t j = 0; j < na; ++j) {
            double s = 0;
            for (std::size_t m = 0; m < q; ++m) s += dref[l * q + m] * v[index(panel * q + m, j)];
            fr[j] = s * 2 / (b - a);
        }
        const double* row = v.data() + index(i, 0);
        if (N_ == 2) {
            for (std::size_t j = 0; j < na; ++j) {
                double s = 0;
                for (std::size_t k = 0; k < na; ++k) s += dper[j * na + k] * row[k];
                const double c = dirs_[j][0], sn = dirs_[j][1];
                out[0][index(i, j)] = fr[j] * c - s / r * sn;
                out[1][index(i, j)] = fr[j] * sn + s / r * c;
            }
            continue;
        }
        const std::size_t np = static_cast<std::size_t>(n_phi_), nm = static_cast<std::size_t>(n_mu_);
        for (std::size_t am = 0; am < nm; ++am)
            for (std::size_t bp = 0; bp < np; ++bp) {
                const std::size_t opp = (bp + np / 2) % np;
                const double mu = mu_[am], st = std::sqrt(1 - mu * mu);
                double smu = 0, sph = 0;
                for (std::size_t k = 0; k < nm; ++k) {
                    const double sk = std::sqrt(1 - mu_[k] * mu_[k]);
                    const double ev = 0.5 * (row[k * np + bp] + row[k * np + opp]);
                    const double od = 0.5 * (row[k * np + bp] - row[k * np + opp]);
                    smu += dmu[am * nm + k] * (ev + st / sk * od);
                }
                smu -= mu / (st * st) * 0.5 * (row[am * np + bp] - row[am * np + opp]);
                for (std::size_t k = 0; k < np; ++k) sph += dper[bp * np + k] * row[am * np + k];
                const std::size_t j = am * np + bp;
                const double cp = dirs_[j][0] / st, spp = dirs_[j][1] / st;
                const double dth = -st * smu;  // d/dtheta = -sin(theta) d/dmu
                const double er[3] = {st * cp, st * spp, mu}, et[3] = {mu * cp, mu * spp, -st}, ep[3] = {-spp, cp, 0};
                for (int d = 0; d < 3; ++d)
                    out[static_cast<std::size_t>(d)][index(i, j)] = fr[j] * er[d] + dth / r * et[d] + sph / (r * st) * ep[d];
            }
    }
    return out;
}

std::string PolarGrid::describe() const {
    std::ostringstream os;
    os << "N=" << N_ << " panels=" << panels() << " order=" << order_ << " r_max=" << r_max()
       << " angular=" << n_angular();
    return os.str();
}

PolarGridFunction PolarGridFunction::zeros(std::shared_ptr<const PolarGrid> g) {
    if (!g) throw Error(ErrorCode::InvalidInput, "grid function needs a grid");
    PolarGridFunction u;
    u.values.assign(g->size(), 0.0);
    u.grid = std::move(g);
    return u;
}

PolarGridFunction PolarGridFunction::radial(std::shared_ptr<const PolarGrid> g, const RadialFunction& f) {
    PolarGridFunction u = zeros(g);
    for (std::size_t i = 0; i < g->n_radial(); ++i) {
        const double v = f(g->radial_nodes()[i]);
        for (std::size_t j = 0; j < g->n_angular(); ++j) u.values[g->index(i, j)] = v;
    }
    return u;
}

double PolarGridFunction::eval(const Point& y) const {
    if (static_cast<int>(y.size()) != grid->dim()) throw Error(ErrorCode::InvalidInput, "point dimension mismatch");
    return eval(y.data());
}

double PolarGridFunction::eval(const double* y) const {
    PolarGrid::Stencil st;
    grid->stencil(y, st);
    if (!st.inside) return 0.0;
    double v = 0;
    for (std::size_t a = 0; a < st.radial.size(); ++a) {
        const double* row = values.data() + grid->index(st.first_radial + a, 0);
        double s = 0;
        for (std::size_t b = 0; b < st.angular.size(); ++b) s += st.angular[b] * row[b];
        v += st.radial[a] * s;
    }
    return v;
}

void PolarGridFunction::validate() const {
    if (!grid) throw Error(ErrorCode::InvalidInput, "grid function without grid");
    if (values.size() != grid->size()) throw Error(ErrorCode::InvalidInput, "grid function size mismatch");
    for (double v : values)
        if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "grid function sample not finite");
}

void write_grid_function_csv(const PolarGridFunction& u, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
    out << "r,angular_index,value\n" << std::setprecision(17);
    const PolarGrid& g = *u.grid;
    for (std::size_t i = 0; i < g.n_radial(); ++i)
        for (std::size_t j = 0; j < g.n_angular(); ++j)
            out << g.radial_nodes()[i] << ',' << j << ',' << u.at(i, j) << '\n';
}

PolarGridFunction read_grid_function_csv(const std::string& path, std::shared_ptr<const PolarGrid> grid) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
    PolarGridFunction u = PolarGridFunction::zeros(grid);
    std::vector<char> seen(grid->size(), 0);
    const auto& rn = grid->radial_nodes();
    std::string line;
    int lineno = 0;
    auto fail = [&](int col, const std::string& msg) {
        throw Error(ErrorCode::InvalidInput,
                    path + ": row " + std::to_string(lineno) + ", column " + std::to_string(col) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line.rfind("r,", 0) == 0) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> cells;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            ++col;
            try {
                std::size_t used = 0;
                cells.push_back(std::stod(cell, &used));
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
                if (used != cell.size()) fail(col, "trailing characters in '" + cell + "'");
            } catch (const std::logic_error&) {
                fail(col, "not a number: '" + cell + "'");
            }
        }
        if (cells.size() != 3) fail(static_cast<int>(cells.size()) + 1, "expected 3 columns (r, angular_index, value)");
        const auto it = std::lower_bound(rn.begin(), rn.end(), cells[0] * (1 - 1e-12));
        if (it == rn.end() || std::abs(*it - cells[0]) > 1e-9 * std::max(1.0, cells[0]))
            fail(1, "radius does not match a grid node");
        const double jd = cells[1];
        if (jd < 0 || jd != std::floor(jd) || jd >= static_cast<double>(grid->n_angular()))
            fail(2, "angular index out of range");
        if (!std::isfinite(cells[2])) fail(3, "value not finite");
        const std::size_t k = grid->index(static_cast<std::size_t>(it - rn.begin()), static_cast<std::size_t>(jd));
        if (seen[k]) fail(1, "duplicate node");
        seen[k] = 1;
        u.values[k] = cells[2];
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw Error(ErrorCode::InvalidInput, path + ": not every grid node has a value");
    return u;
}

}  // namespace layerpot
