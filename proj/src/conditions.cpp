#include "layerpot/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace layerpot {

std::string to_string(ConditionId id) {
    switch (id) {
    case ConditionId::EquivalentNorm: return "EquivalentNorm";
    case ConditionId::ExistenceJ1: return "ExistenceJ1";
    case ConditionId::ExistenceJ2: return "ExistenceJ2";
    case ConditionId::UniquenessZero: return "UniquenessZero";
    case ConditionId::UniquenessInfinity: return "UniquenessInfinity";
    case ConditionId::InclusionX: return "InclusionX";
    case ConditionId::InclusionY: return "InclusionY";
    case ConditionId::ContinuityB1: return "ContinuityB1";
    case ConditionId::ContinuityB2: return "ContinuityB2";
    case ConditionId::InverseB1: return "InverseB1";
    case ConditionId::InverseB2: return "InverseB2";
    case ConditionId::IsomorphismLogDerivative: return "IsomorphismLogDerivative";
    case ConditionId::PowerWindow: return "PowerWindow";
    }
    return "Unknown";
}

std::string describe(ConditionId id) {
    switch (id) {
    case ConditionId::EquivalentNorm: return "gradient seminorm is an equivalent norm";
    case ConditionId::ExistenceJ1: return "existence, first supremum";
    case ConditionId::ExistenceJ2: return "existence, Dini-weighted supremum";
    case ConditionId::UniquenessZero: return "uniqueness, growth of 1/gamma at 0";
    case ConditionId::UniquenessInfinity: return "uniqueness, growth of 1/gamma at infinity";
    case ConditionId::InclusionX: return "L^p_gamma inside X^p";
    case ConditionId::InclusionY: return "weighted Sobolev space inside Y^{1,p}_M";
    case ConditionId::ContinuityB1: return "S bounded, B1";
    case ConditionId::ContinuityB2: return "S bounded, B2";
    case ConditionId::InverseB1: return "inverse bounded, B1";
    case ConditionId::InverseB2: return "inverse bounded, B2";
    case ConditionId::IsomorphismLogDerivative: return "log-derivative window (isomorphism)";
    case ConditionId::PowerWindow: return "power weight window 1 < alpha + N/p < N - c2 Lambda0";
    }
    return "";
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Holds: return "Holds";
    case Verdict::Fails: return "Fails";
    case Verdict::Marginal: return "Marginal";
    }
    return "Unknown";
}

std::string to_string(HardyDirection d) { return d == HardyDirection::FromZero ? "FromZero" : "FromInfinity"; }

namespace {

double log_add(double x, double y) {
    if (x == -kInf) return y;
    if (y == -kInf) return x;
    const double m = std::max(x, y);
    return m + std::log1p(std::exp(std::min(x, y) - m));
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

Verdict worst(Verdict a, Verdict b) {
    if (a == Verdict::Fails || b == Verdict::Fails) return Verdict::Fails;
    if (a == Verdict::Marginal || b == Verdict::Marginal) return Verdict::Marginal;
    return Verdict::Holds;
}

// Signed int_1^s Lambda dnu / nu.
double dini_from_one(const LipschitzGraph& surf, double s, double tol) {
    if (surf.is_flat()) return 0.0;
    if (surf.family() == SurfaceFamily::Cone) return surf.eps() * std::log(s);
    if (s == 1.0) return 0.0;
    return s > 1.0 ? surf.dini_integral(1.0, s, tol) : -surf.dini_integral(s, 1.0, tol);
}

ModelConstants synced(const ModelConstants& mc, const LipschitzGraph& surf) {
    ModelConstants out = mc;
    out.lambda0 = surf.lambda0();
    out.validate();
    return out;
}

ConditionReport from_product(ConditionId id, const ProductResult& pr, const ModelConstants& mc) {
    ConditionReport rep;
    rep.condition_id = id;
    rep.sup_estimate = pr.sup;
    rep.argmax_r = pr.argmax_r;
    rep.verdict = pr.verdict;
    rep.boundary_flag = pr.boundary_flag;
    rep.trace = pr.trace;
    rep.constants_used = mc;
    rep.note = pr.note;
    return rep;
}

std::pair<ProductSpec, ProductSpec> j_specs(const RadialWeight& gamma, const RadialWeight& Gamma,
                                            const LipschitzGraph& surf, const ModelConstants& mc, double tol) {
    const double N = mc.N, p = mc.p, pc = mc.p_conj(), M = mc.M(), c1 = mc.c1;
    ProductSpec j1;
    j1.log_a = [=](double s) { return (pc * (M - N / p) - 1.0) * std::log(s) - pc * Gamma.log_eval(s); };
    j1.q_a = pc;
    j1.log_b = [=](double s) { return (N - 1.0 - M * p) * std::log(s) + p * gamma.log_eval(s); };
    j1.q_b = p;
    // The Dini integral is anchored at 1 instead of 0: the constant offset
    // enters the two factors with opposite signs and cancels in the product.
    ProductSpec j2;
    j2.log_a = [=, &surf](double s) {
        return (N - 1.0) * std::log(s) + p * gamma.log_eval(s) - c1 * p * dini_from_one(surf, s, tol);
    };
    j2.q_a = p;
    j2.log_b = [=, &surf](double s) {
        return (-1.0 - N * pc / p) * std::log(s) - pc * Gamma.log_eval(s) + c1 * pc * dini_from_one(surf, s, tol);
    };
    j2.q_b = pc;
    return {j1, j2};
}

}  // namespace

ProductResult evaluate_product(const ProductSpec& spec, const NumericsConfig& cfg) {
    ProductResult res;
    const double tol = cfg.quad_tol;
    const TailProbe& probe = cfg.tail;
    const double band = probe.marginal_band;

    const TailClass ta = tail_classify_log(spec.log_a, TailEnd::Zero, probe);
    const TailClass tb = tail_classify_log(spec.log_b, TailEnd::Infinity, probe);
    auto tail_note = [](const char* which, const TailClass& tc) {
        return std::string(which) + " integrand exponent " + fmt(tc.fitted_exponent) + " (" + to_string(tc.verdict) +
               ")";
    };
    if (ta.verdict != TailVerdict::Convergent || tb.verdict != TailVerdict::Convergent) {
        const bool div = ta.verdict == TailVerdict::Divergent || tb.verdict == TailVerdict::Divergent;
        res.verdict = div ? Verdict::Fails : Verdict::Marginal;
        std::string note;
        if (ta.verdict != TailVerdict::Convergent) note += tail_note("inner factor at 0:", ta);
        if (tb.verdict != TailVerdict::Convergent) {
            if (!note.empty()) note += "; ";
            note += tail_note("outer factor at infinity:", tb);
        }
        res.note = note;
        return res;
    }

    const auto& nodes = cfg.grid.nodes();
    const auto la = log_cumulative_from_zero(spec.log_a, nodes, tol);
    const auto lb = log_cumulative_to_infinity(spec.log_b, nodes, tol);
    std::vector<double> logp(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) logp[i] = la[i] / spec.q_a + lb[i] / spec.q_b;

    // Far probes beyond the grid decide whether the product keeps growing.
    const double r_lo = nodes.front(), r_hi = nodes.back();
    auto probe_zero = [&](double s) {
        const double a = log_integral(spec.log_a, 0.0, s, tol);
        const double b = log_add(log_integral(spec.log_b, s, r_lo, tol), lb.front());
        return a / spec.q_a + b / spec.q_b;
    };
    auto probe_inf = [&](double s) {
        const double a = log_add(la.back(), log_integral(spec.log_a, r_hi, s, tol));
        const double b = log_integral(spec.log_b, s, kInf, tol);
        return a / spec.q_a + b / spec.q_b;
    };
    const auto zs = tail_probe_nodes(TailEnd::Zero, probe);
    const auto is = tail_probe_nodes(TailEnd::Infinity, probe);
    std::vector<double> zv, iv;
    for (double s : zs) zv.push_back(probe_zero(s));
    for (double s : is) iv.push_back(probe_inf(s));
    for (double v : zv)
        if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "product not finite at far probe near 0");
    for (double v : iv)
        if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "product not finite at far probe near infinity");
    const double slope_zero = loglog_slope(zs, zv);
    const double slope_inf = loglog_slope(is, iv);

    const ScanResult scan = supremum_scan(logp, cfg.grid);
    double best = scan.sup_value;
    res.argmax_r = scan.argmax_r;
    res.boundary_flag = scan.boundary_flag;
    for (std::size_t k = 0; k < zs.size(); ++k)
        if (zv[k] > best) {
            best = zv[k];
            res.argmax_r = zs[k];
            res.boundary_flag = true;
        }
    for (std::size_t k = 0; k < is.size(); ++k)
        if (iv[k] > best) {
            best = iv[k];
            res.argmax_r = is[k];
            res.boundary_flag = true;
        }
    res.trace.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) res.trace.push_back({nodes[i], std::exp(logp[i])});

    if (slope_inf > band || slope_zero < -band) {
        res.verdict = Verdict::Fails;
        res.note = "product unbounded: log-log slope " + fmt(slope_zero) + " at 0, " + fmt(slope_inf) + " at infinity";
        return res;
    }
    if (slope_inf > 1e-3 || slope_zero < -1e-3) {
        res.verdict = Verdict::Marginal;
        res.note = "product slowly growing: log-log slope " + fmt(slope_zero) + " at 0, " + fmt(slope_inf) +
                   " at infinity";
    }
    res.sup = std::exp(best);
    return res;
}

ConditionReport check_equivalent_norm(const RadialWeight& Gamma, const ModelConstants& mc,
                                      const NumericsConfig& cfg) {
    mc.validate();
    const double N = mc.N, p = mc.p, pc = mc.p_conj();
    ProductSpec spec;
    spec.log_a = [=](double s) { return (N - 1.0 - p) * std::log(s) + p * Gamma.log_eval(s); };
    spec.q_a = p;
    spec.log_b = [=](double s) { return -(N - 1.0) / (p - 1.0) * std::log(s) - pc * Gamma.log_eval(s); };
    spec.q_b = pc;
    return from_product(ConditionId::EquivalentNorm, evaluate_product(spec, cfg), mc);
}

namespace {

std::pair<ConditionReport, ConditionReport> j_reports(ConditionId id1, ConditionId id2, const RadialWeight& gamma,
                                                      const RadialWeight& Gamma, const LipschitzGraph& surf,
                                                      const ModelConstants& mc, const NumericsConfig& cfg) {
    const auto [s1, s2] = j_specs(gamma, Gamma, surf, mc, cfg.quad_tol);
    return {from_product(id1, evaluate_product(s1, cfg), mc), from_product(id2, evaluate_product(s2, cfg), mc)};
}

}  // namespace

std::pair<ConditionReport, ConditionReport> check_existence_conditions(const RadialWeight& gamma,
                                                                       const RadialWeight& Gamma,
                                                                       const LipschitzGraph& surf,
                                                                       const ModelConstants& mc,
                                                                       const NumericsConfig& cfg) {
    const ModelConstants m = synced(mc, surf);
    m.require_exponent_window();
    return j_reports(ConditionId::ExistenceJ1, ConditionId::ExistenceJ2, gamma, Gamma, surf, m, cfg);
}

std::pair<ConditionReport, ConditionReport> check_inverse_conditions(const RadialWeight& gamma,
                                                                     const RadialWeight& Gamma,
                                                                     const LipschitzGraph& surf,
                                                                     const ModelConstants& mc,
                                                                     const NumericsConfig& cfg) {
    const ModelConstants m = synced(mc, surf);
    return j_reports(ConditionId::InverseB1, ConditionId::InverseB2, gamma, Gamma, surf, m, cfg);
}

std::pair<ConditionReport, ConditionReport> check_continuity_conditions(const RadialWeight& gamma,
                                                                        const RadialWeight& Gamma,
                                                                        const ModelConstants& mc,
                                                                        const NumericsConfig& cfg) {
    mc.validate();
    const double N = mc.N, p = mc.p, pc = mc.p_conj();
    ProductSpec b1;
    b1.log_a = [=](double s) { return (N - 1.0) * std::log(s) - pc * gamma.log_eval(s); };
    b1.q_a = pc;
    b1.log_b = [=](double s) { return (N - 1.0 - N * p) * std::log(s) + p * Gamma.log_eval(s); };
    b1.q_b = p;
    ProductSpec b2;
    b2.log_a = [=](double s) { return (N - 1.0) * std::log(s) + p * Gamma.log_eval(s); };
    b2.q_a = p;
    b2.log_b = [=](double s) { return -(1.0 + N * pc / p) * std::log(s) - pc * gamma.log_eval(s); };
    b2.q_b = pc;
    return {from_product(ConditionId::ContinuityB1, evaluate_product(b1, cfg), mc),
            from_product(ConditionId::ContinuityB2, evaluate_product(b2, cfg), mc)};
}

std::pair<ConditionReport, ConditionReport> check_uniqueness_asymptotics(const RadialWeight& gamma,
                                                                         const LipschitzGraph& surf,
                                                                         const ModelConstants& mc,
                                                                         const NumericsConfig& cfg) {
    const ModelConstants m = synced(mc, surf);
    const double N = m.N, p = m.p, band = cfg.tail.marginal_band, tol = cfg.quad_tol;

    ConditionReport zero;
    zero.condition_id = ConditionId::UniquenessZero;
    zero.constants_used = m;
    const double thr = N / p - N + m.c2 * m.lambda0;
    auto inv = [&gamma](double s) { return -gamma.log_eval(s); };
    const double sz = tail_slope_log(inv, TailEnd::Zero, cfg.tail);
    const double dz = sz - thr;
    zero.verdict = dz >= band ? Verdict::Holds : (dz > -band ? Verdict::Marginal : Verdict::Fails);
    zero.sup_estimate = sz;
    zero.note = "sup_estimate is the fitted exponent of 1/gamma near 0; required >= " + fmt(thr);
    for (double r : cfg.grid.nodes()) zero.trace.push_back({r, std::exp(inv(r) - thr * std::log(r))});
    zero.argmax_r = cfg.grid.r_min();
    zero.boundary_flag = true;

    ConditionReport inf;
    inf.condition_id = ConditionId::UniquenessInfinity;
    inf.constants_used = m;
    auto h = [&](double s) { return -gamma.log_eval(s) - N / p * std::log(s) + m.c1 * dini_from_one(surf, s, tol); };
    const double si = tail_slope_log(h, TailEnd::Infinity, cfg.tail);
    inf.verdict = si <= -band ? Verdict::Holds : (si < band ? Verdict::Marginal : Verdict::Fails);
    inf.sup_estimate = si;
    inf.note = "sup_estimate is the fitted exponent of r^{-N/p} exp(c1 int_1^r Lambda) / gamma near infinity; "
               "required <= 0";
    for (double r : cfg.grid.nodes()) inf.trace.push_back({r, std::exp(h(r))});
    inf.argmax_r = cfg.grid.r_max();
    inf.boundary_flag = true;
    return {zero, inf};
}

namespace {

ConditionReport two_integrals(ConditionId id, const RadialFunction& log_lo, const RadialFunction& log_hi,
                              const ModelConstants& mc, const NumericsConfig& cfg) {
    ConditionReport rep;
    rep.condition_id = id;
    rep.constants_used = mc;
    const TailClass t0 = tail_classify_log(log_lo, TailEnd::Zero, cfg.tail);
    const TailClass t1 = tail_classify_log(log_hi, TailEnd::Infinity, cfg.tail);
    rep.note = "integrand exponents " + fmt(t0.fitted_exponent) + " at 0 (" + to_string(t0.verdict) + "), " +
               fmt(t1.fitted_exponent) + " at infinity (" + to_string(t1.verdict) + ")";
    for (double r : cfg.grid.nodes()) rep.trace.push_back({r, std::exp(r < 1.0 ? log_lo(r) : log_hi(r))});
    if (t0.verdict == TailVerdict::Divergent || t1.verdict == TailVerdict::Divergent) {
        rep.verdict = Verdict::Fails;
        return rep;
    }
    if (t0.verdict == TailVerdict::Marginal || t1.verdict == TailVerdict::Marginal) {
        rep.verdict = Verdict::Marginal;
        return rep;
    }
    const double lo = log_integral(log_lo, 0.0, 1.0, cfg.quad_tol);
    const double hi = log_integral(log_hi, 1.0, kInf, cfg.quad_tol);
    rep.sup_estimate = std::exp(lo) + std::exp(hi);
    rep.verdict = Verdict::Holds;
    rep.argmax_r = 1.0;
    return rep;
}

}  // namespace

std::pair<ConditionReport, ConditionReport> check_inclusion_conditions(const RadialWeight& gamma,
                                                                       const RadialWeight& Gamma,
                                                                       const ModelConstants& mc,
                                                                       const NumericsConfig& cfg) {
    mc.validate();
    const double N = mc.N, p = mc.p, pc = mc.p_conj(), M = mc.M();
    // X: int_0^1 s^N gamma^{-p'} ds/s + int_1^inf s^{-Np'/p} gamma^{-p'} ds/s
    auto x_lo = [=](double s) { return (N - 1.0) * std::log(s) - pc * gamma.log_eval(s); };
    auto x_hi = [=](double s) { return (-N * pc / p - 1.0) * std::log(s) - pc * gamma.log_eval(s); };
    // Y: int_0^1 s^{(M-N/p)p'} Gamma^{-p'} ds/s + int_1^inf s^{-Np'/p} Gamma^{-p'} ds/s
    auto y_lo = [=](double s) { return ((M - N / p) * pc - 1.0) * std::log(s) - pc * Gamma.log_eval(s); };
    auto y_hi = [=](double s) { return (-N * pc / p - 1.0) * std::log(s) - pc * Gamma.log_eval(s); };
    return {two_integrals(ConditionId::InclusionX, x_lo, x_hi, mc, cfg),
            two_integrals(ConditionId::InclusionY, y_lo, y_hi, mc, cfg)};
}

ConditionReport check_isomorphism_logderiv(const RadialWeight& gamma, const RadialWeight& Gamma,
                                           const LipschitzGraph& surf, const ModelConstants& mc,
                                           const NumericsConfig& cfg) {
    const ModelConstants m = synced(mc, surf);
    m.require_exponent_window();
    const double N = m.N, p = m.p, L0 = m.lambda0;
    constexpr double kEdge = 1e-9;
    ConditionReport rep;
    rep.condition_id = ConditionId::IsomorphismLogDerivative;
    rep.constants_used = m;

    const LogDerivBounds bg = gamma.log_derivative_bounds(cfg.grid);
    const LogDerivBounds bG = Gamma.log_derivative_bounds(cfg.grid);
    const double upper = N - m.c2 * L0 - N / p;
    struct Margin {
        std::string what;
        double value;
    };
    std::vector<Margin> margins = {
        {"inf r gamma'/gamma > " + fmt(m.c1 * L0 - N / p), bg.ess_inf - (m.c1 * L0 - N / p)},
        {"sup r gamma'/gamma < " + fmt(upper), upper - bg.ess_sup},
        {"inf r Gamma'/Gamma > " + fmt(1.0 - N / p), bG.ess_inf - (1.0 - N / p)},
        {"sup r Gamma'/Gamma < " + fmt(upper), upper - bG.ess_sup},
    };

    // Both weight ratios bounded iff log(Gamma/gamma) is bounded on (0, inf).
    auto log_ratio = [&](double s) { return Gamma.log_eval(s) - gamma.log_eval(s); };
    const double s0 = tail_slope_log(log_ratio, TailEnd::Zero, cfg.tail);
    const double s1 = tail_slope_log(log_ratio, TailEnd::Infinity, cfg.tail);
    double ratio_sup = 0;
    for (double r : cfg.grid.nodes()) {
        const double lr = log_ratio(r);
        ratio_sup = std::max(ratio_sup, std::exp(std::abs(lr)));
        rep.trace.push_back({r, gamma.log_derivative(r + (gamma.is_breakpoint(r) ? 1e-12 * r : 0.0))});
    }
    const double ratio_slope = std::max(std::abs(s0), std::abs(s1));

    Verdict v = Verdict::Holds;
    std::string note;
    double min_margin = kInf;
    for (const auto& mg : margins) {
        min_margin = std::min(min_margin, mg.value);
        if (mg.value < -kEdge) {
            v = Verdict::Fails;
            note += "violated: " + mg.what + "; ";
        } else if (mg.value <= kEdge) {
            v = worst(v, Verdict::Marginal);
            note += "boundary: " + mg.what + "; ";
        }
    }
    if (ratio_slope > cfg.tail.marginal_band) {
        v = Verdict::Fails;
        note += "weight ratio unbounded (log-log slope " + fmt(ratio_slope) + "); ";
    } else if (ratio_slope > 1e-6) {
        v = worst(v, Verdict::Marginal);
        note += "weight ratio slowly varying (log-log slope " + fmt(ratio_slope) + "); ";
    }
    note += "gamma log-derivative in [" + fmt(bg.ess_inf) + ", " + fmt(bg.ess_sup) + "], Gamma in [" +
            fmt(bG.ess_inf) + ", " + fmt(bG.ess_sup) + "], max(Gamma/gamma, gamma/Gamma) on grid " +
            fmt(ratio_sup) + "; sup_estimate is the smallest margin";
    if (bg.inf_at_boundary || bg.sup_at_boundary || bG.inf_at_boundary || bG.sup_at_boundary)
        rep.boundary_flag = true;
    rep.verdict = v;
    rep.sup_estimate = min_margin;
    rep.note = note;
    return rep;
}

ConditionReport check_power_alpha(double alpha, const ModelConstants& mc) {
    mc.validate();
    constexpr double kEdge = 1e-12;
    ConditionReport rep;
    rep.condition_id = ConditionId::PowerWindow;
    rep.constants_used = mc;
    const double mid = alpha + mc.N / mc.p;
    const double lo = mid - 1.0;
    const double hi = mc.N - mc.c2 * mc.lambda0 - mid;
    rep.sup_estimate = mid;
    if (lo < -kEdge || hi < -kEdge)
        rep.verdict = Verdict::Fails;
    else if (lo <= kEdge || hi <= kEdge)
        rep.verdict = Verdict::Marginal;
    else
        rep.verdict = Verdict::Holds;
    rep.note = "alpha + N/p = " + fmt(mid) + " against (1, " + fmt(mc.N - mc.c2 * mc.lambda0) + ")";
    if (!mc.exponent_admissible()) rep.note += "; p outside (N/M, N)";
    return rep;
}

std::vector<ConditionReport> run_condition_battery(const RadialWeight& gamma, const RadialWeight& Gamma,
                                                   const LipschitzGraph& surf, const ModelConstants& mc,
                                                   const NumericsConfig& cfg) {
    const ModelConstants m = synced(mc, surf);
    std::vector<ConditionReport> out;
    auto failed = [&](ConditionId id, const Error& e) {
        ConditionReport rep;
        rep.condition_id = id;
        rep.verdict = Verdict::Fails;
        rep.constants_used = m;
        rep.note = e.what();
        return rep;
    };
    auto push_pair = [&](ConditionId a, ConditionId b, auto&& fn) {
        try {
            auto pr = fn();
            out.push_back(std::move(pr.first));
            out.push_back(std::move(pr.second));
        } catch (const Error& e) {
            out.push_back(failed(a, e));
            out.push_back(failed(b, e));
        }
    };
    auto push_one = [&](ConditionId a, auto&& fn) {
        try {
            out.push_back(fn());
        } catch (const Error& e) {
            out.push_back(failed(a, e));
        }
    };
    push_one(ConditionId::EquivalentNorm, [&] { return check_equivalent_norm(Gamma, m, cfg); });
    push_pair(ConditionId::ExistenceJ1, ConditionId::ExistenceJ2,
              [&] { return check_existence_conditions(gamma, Gamma, surf, m, cfg); });
    push_pair(ConditionId::UniquenessZero, ConditionId::UniquenessInfinity,
              [&] { return check_uniqueness_asymptotics(gamma, surf, m, cfg); });
    push_pair(ConditionId::InclusionX, ConditionId::InclusionY,
              [&] { return check_inclusion_conditions(gamma, Gamma, m, cfg); });
    push_pair(ConditionId::ContinuityB1, ConditionId::ContinuityB2,
              [&] { return check_continuity_conditions(gamma, Gamma, m, cfg); });
    push_pair(ConditionId::InverseB1, ConditionId::InverseB2,
              [&] { return check_inverse_conditions(gamma, Gamma, surf, m, cfg); });
    push_one(ConditionId::IsomorphismLogDerivative,
             [&] { return check_isomorphism_logderiv(gamma, Gamma, surf, m, cfg); });
    if (gamma.family() == WeightFamily::Power && Gamma.family() == WeightFamily::Power &&
        gamma.alpha() == Gamma.alpha())
        push_one(ConditionId::PowerWindow, [&] { return check_power_alpha(gamma.alpha(), m); });
    return out;
}

}  // namespace layerpot
