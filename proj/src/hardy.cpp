#include <algorithm>
#include <cmath>
#include <sstream>

#include "layerpot/conditions.hpp"

namespace layerpot {

namespace {

double log_add(double x, double y) {
    if (x == -kInf) return y;
    if (y == -kInf) return x;
    const double m = std::max(x, y);
    return m + std::log1p(std::exp(std::min(x, y) - m));
}

RadialFunction log_of(const RadialFunction& f, const char* name) {
    return [f, name](double s) {
        const double v = f(s);
        if (!(v >= 0) || std::isinf(v))
            throw Error(ErrorCode::DomainError, std::string(name) + " must be finite and nonnegative");
        return v > 0 ? std::log(v) : -kInf;
    };
}

// Rayleigh quotient of the Hardy operator for one test function, computed in
// log space. Returns -inf when any of its integrals fails to converge.
class Quotient {
public:
    Quotient(RadialFunction log_u, RadialFunction log_v, double p, HardyDirection dir, double tol)
        : lu_(std::move(log_u)), lv_(std::move(log_v)), p_(p), dir_(dir), tol_(tol) {}

    // g = s^e on [a, b] (0 <= a < b <= inf)
    double power(double e, double a, double b) const {
        const double k = e + 1.0;
        if (b == kInf && !(k < 0)) return -kInf;
        if (a == 0 && dir_ == HardyDirection::FromZero && !(k > 0)) return -kInf;
        auto log_g_prim = [=, this](double r) -> double {
            // log of int_a^r s^e (FromZero) or int_r^b s^e (FromInfinity)
            if (dir_ == HardyDirection::FromZero) {
                if (r <= a) return -kInf;
                if (a == 0) return k * std::log(r) - std::log(k);
                const double t = std::log(r / a);
                if (std::abs(k) < 1e-12) return std::log(t);
                return k * std::log(a) + std::log(std::expm1(k * t) / k);
            }
            if (r >= b) return -kInf;
            if (b == kInf) return k * std::log(r) - std::log(-k);
            const double t = std::log(b / r);
            if (std::abs(k) < 1e-12) return std::log(t);
            return k * std::log(r) + std::log(std::expm1(k * t) / k);
        };
        try {
            const double den = log_integral([=, this](double s) { return p_ * (lv_(s) + e * std::log(s)); }, a, b, tol_);
            auto inner = [=, this](double s) { return p_ * (lu_(s) + log_g_prim(s)); };
            double num = log_integral(inner, a, b, tol_);
            if (dir_ == HardyDirection::FromZero && b != kInf)
                num = log_add(num, p_ * log_g_prim(b) + log_integral(pu(), b, kInf, tol_));
            if (dir_ == HardyDirection::FromInfinity && a > 0)
                num = log_add(num, p_ * log_g_prim(a) + log_integral(pu(), 0.0, a, tol_));
            return finish(num, den);
        } catch (const Error&) {
            return -kInf;
        }
    }

    // g = V^{-p'} on (0, r) (FromZero) or (r, inf) (FromInfinity)
    double muckenhoupt(double r) const {
        const double pc = p_ / (p_ - 1.0);
        auto lw = [=, this](double s) { return -pc * lv_(s); };
        try {
            if (dir_ == HardyDirection::FromZero) {
                const double den = log_integral(lw, 0.0, r, tol_);
                auto inner = [=, this](double t) { return p_ * (lu_(t) + log_integral(lw, 0.0, t, tol_)); };
                double num = log_integral(inner, 0.0, r, tol_);
                num = log_add(num, p_ * den + log_integral(pu(), r, kInf, tol_));
                return finish(num, den);
            }
            const double den = log_integral(lw, r, kInf, tol_);
            auto inner = [=, this](double t) { return p_ * (lu_(t) + log_integral(lw, t, kInf, tol_)); };
            double num = log_integral(inner, r, kInf, tol_);
            num = log_add(num, p_ * den + log_integral(pu(), 0.0, r, tol_));
            return finish(num, den);
        } catch (const Error&) {
            return -kInf;
        }
    }

private:
    RadialFunction pu() const {
        return [lu = lu_, p = p_](double s) { return p * lu(s); };
    }
    double finish(double num, double den) const {
        if (!std::isfinite(den) || std::isnan(num) || num == kInf) return -kInf;
        return (num - den) / p_;
    }

    RadialFunction lu_, lv_;
    double p_;
    HardyDirection dir_;
    double tol_;
};

std::string trial_name(double e, double a, double b) {
    std::ostringstream os;
    os.precision(6);
    os << "s^" << e << " on [" << a << ", " << b << "]";
    return os.str();
}

}  // namespace

HardyReport hardy_verify(const RadialFunction& U, const RadialFunction& V, const ModelConstants& mc,
                         HardyDirection direction, const NumericsConfig& cfg) {
    mc.validate();
    const double p = mc.p, pc = mc.p_conj();
    HardyReport rep;
    rep.direction = direction;
    const RadialFunction lu = log_of(U, "U");
    const RadialFunction lv = log_of(V, "V");

    bool u_zero = true;
    for (double r : cfg.grid.nodes()) u_zero = u_zero && lu(r) == -kInf;
    for (TailEnd end : {TailEnd::Zero, TailEnd::Infinity})
        for (double r : tail_probe_nodes(end, cfg.tail)) u_zero = u_zero && lu(r) == -kInf;
    if (u_zero) {
        rep.sandwich_holds = true;
        rep.best_trial = "U vanishes identically";
        return rep;
    }

    ProductSpec spec;
    auto lvp = [lv, pc](double s) { return -pc * lv(s); };
    auto lup = [lu, p](double s) { return p * lu(s); };
    if (direction == HardyDirection::FromZero) {
        spec.log_a = lvp;
        spec.q_a = pc;
        spec.log_b = lup;
        spec.q_b = p;
    } else {
        spec.log_a = lup;
        spec.q_a = p;
        spec.log_b = lvp;
        spec.q_b = pc;
    }
    const ProductResult pr = evaluate_product(spec, cfg);
    if (!pr.sup || pr.verdict != Verdict::Holds)
        throw Error(ErrorCode::DivergentB, "Hardy supremum B is not finite: " + pr.note);
    rep.B = *pr.sup;
    rep.argmax_r = pr.argmax_r;
    rep.boundary_flag = pr.boundary_flag;
    rep.C_lower = rep.B;
    rep.C_upper = std::pow(p, 1.0 / p) * std::pow(pc, 1.0 / pc) * rep.B;

    const Quotient q(lu, lv, p, direction, std::max(cfg.quad_tol, 1e-11));
    double best = -kInf;
    double best_e = 0, best_a = 0, best_b = 0;
    auto consider = [&](double val, double e, double a, double b, const std::string& name) {
        ++rep.trials;
        if (val > best) {
            best = val;
            best_e = e;
            best_a = a;
            best_b = b;
            rep.best_trial = name;
        }
    };

    // Extremal test functions attached to the Muckenhoupt supremum.
    const double r0 = std::clamp(pr.argmax_r, cfg.grid.r_min(), cfg.grid.r_max());
    for (int k = -4; k <= 4; ++k) {
        const double r = r0 * std::pow(10.0, 0.5 * k);
        consider(q.muckenhoupt(r), 0, 0, 0,
                 std::string("V^{-p'} on ") + (direction == HardyDirection::FromZero ? "(0, " : "(") +
                     std::to_string(r) + (direction == HardyDirection::FromZero ? ")" : ", inf)"));
    }
    const double muck_best = best;

    // Truncated powers: 20 exponents x 15 supports, then local refinement.
    std::vector<std::pair<double, double>> supports;
    for (double c : {1e-3, 1.0, 1e3}) {
        supports.emplace_back(c / 10, 10 * c);
        supports.emplace_back(c / 1e3, 1e3 * c);
        supports.emplace_back(c / 1e10, 1e10 * c);
        supports.emplace_back(c, kInf);
        supports.emplace_back(0.0, c);
    }
    constexpr int kExps = 20;
    double step = 6.0 / (kExps - 1);
    for (const auto& [a, b] : supports) {
        for (int i = 0; i < kExps; ++i) {
            const double e = -3.0 + step * i;
            consider(q.power(e, a, b), e, a, b, trial_name(e, a, b));
        }
    }
    if (best > muck_best) {
        for (int round = 0; round < 12; ++round) {
            const double before = best;
            const double lo = best_e - step;
            const double fine = 2.0 * step / (kExps - 1);
            const double a = best_a, b = best_b;
            for (int i = 0; i < kExps; ++i) {
                const double e = lo + fine * i;
                consider(q.power(e, a, b), e, a, b, trial_name(e, a, b));
            }
            step = fine;
            if (best - before < std::log1p(0.005)) break;
        }
    }
    rep.C_empirical = best == -kInf ? 0.0 : std::exp(best);
    rep.sandwich_holds = rep.C_empirical >= rep.C_lower * (1 - 1e-8) && rep.C_empirical <= rep.C_upper * (1 + 1e-6);
    return rep;
}

PiLemmaReport verify_pi_lemma(const RadialWeight& g, double alpha, double beta, const RadialGrid& grid,
                              TailEnd side, double tol, double quad_tol) {
    if (!(alpha > 0)) throw Error(ErrorCode::InvalidInput, "alpha must be positive");
    if (beta == 0 || !std::isfinite(beta)) throw Error(ErrorCode::InvalidInput, "beta must be nonzero");
    PiLemmaReport rep;
    rep.side = side;
    const LogDerivBounds b = g.log_derivative_bounds(grid);
    const double sign = side == TailEnd::Zero ? 1.0 : -1.0;
    rep.C = std::min(1.0 + sign * beta / alpha * b.ess_inf, 1.0 + sign * beta / alpha * b.ess_sup);
    rep.hypothesis_holds = rep.C > 0;
    if (!rep.hypothesis_holds) return rep;

    std::vector<double> lhs;
    if (side == TailEnd::Zero)
        lhs = log_cumulative_from_zero([&](double s) { return (alpha - 1.0) * std::log(s) + beta * g.log_eval(s); },
                                       grid.nodes(), quad_tol);
    else
        lhs = log_cumulative_to_infinity(
            [&](double s) { return (-alpha - 1.0) * std::log(s) + beta * g.log_eval(s); }, grid.nodes(), quad_tol);
    rep.bound_holds = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.nodes()[i];
        const double log_rhs = sign * alpha * std::log(r) + beta * g.log_eval(r) - std::log(alpha * rep.C);
        const double ratio = std::exp(lhs[i] - log_rhs);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        if (ratio > 1.0 + tol) rep.bound_holds = false;
        rep.nodes.push_back({r, std::exp(lhs[i]), std::exp(log_rhs)});
    }
    return rep;
}

}  // namespace layerpot
