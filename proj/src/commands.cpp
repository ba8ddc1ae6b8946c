#include "layerpot/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "layerpot/json_io.hpp"
#include "layerpot/norms.hpp"

namespace layerpot {

namespace fs = std::filesystem;

namespace {

std::ostream& log(const CommandContext& ctx) {
    static std::ostream null(nullptr);
    return ctx.log ? *ctx.log : null;
}

std::string out_path(const CommandContext& ctx, const std::string& name) {
    fs::create_directories(ctx.out_dir);
    return (ctx.out_dir / name).string();
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json point_json(const Point& x) {
    Json j = Json::array();
    for (double c : x) j.push_back(number(c));
    return j;
}

double norm(const Point& x) {
    double s = 0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

RadialFunction power_profile(const Json& block, const std::string& where) {
    if (!block.contains("exponent") || !block.contains("scale") || !block["exponent"].is_number() ||
        !block["scale"].is_number())
        throw ConfigError(where + " needs numeric exponent and scale");
    const double e = block["exponent"].get<double>(), s = block["scale"].get<double>();
    if (s < 0) throw ConfigError(where + ".scale must be nonnegative");
    if (s == 0) return [](double) { return 0.0; };
    return [e, s](double r) { return s * std::pow(r, e); };
}

// Grid of the config with extra radial breaks inserted.
std::shared_ptr<const PolarGrid> grid_with_breaks(const RunConfig& cfg, const std::vector<double>& extra) {
    const auto base = cfg.grid();
    std::vector<double> b = base->breaks();
    for (double r : extra)
        if (r > 0 && r < base->r_max()) b.push_back(r);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }), b.end());
    const Json& g = cfg.at("grid");
    const int angular = g["angular"].is_null() ? (cfg.dim() == 2 ? 16 : 4) : g["angular"].get<int>();
    return std::make_shared<const PolarGrid>(PolarGrid::with_breaks(cfg.dim(), b, base->order(), angular));
}

struct NamedDensity {
    PolarGridFunction u;
    std::optional<RadialFunction> radial;
    double support = kInf;
    std::vector<double> breaks;
};

NamedDensity make_density(const RunConfig& cfg, const std::string& name, const Json& path) {
    const int N = cfg.dim();
    if (name == "ball") {
        const auto g = grid_with_breaks(cfg, {1.0});
        RadialFunction f = [](double r) { return r < 1 ? 1.0 : 0.0; };
        return {PolarGridFunction::radial(g, f), f, 1.0, {1.0}};
    }
    if (name == "file") {
        if (!path.is_string()) throw ConfigError("potential_eval.density_path is required for density 'file'");
        return {read_grid_function_csv(path.get<std::string>(), cfg.grid()), std::nullopt, kInf, {}};
    }
    const auto g = cfg.grid();
    if (name == "gaussian") {
        RadialFunction f = [](double r) { return std::exp(-r * r); };
        return {PolarGridFunction::radial(g, f), f, g->r_max(), {}};
    }
    for (const auto& b : density_basket(N))
        if (b.name == name) return {PolarGridFunction::sample(g, b.eval), std::nullopt, kInf, {}};
    std::string names = "gaussian, ball, file";
    for (const auto& b : density_basket(N)) names += ", " + b.name;
    throw ConfigError("potential_eval.density must be one of " + names);
}

std::vector<Point> default_targets(int N) {
    std::vector<Point> t{{0.0, 0.0}, {0.5, 0.0}, {0.3, 0.4}, {-0.8, 0.6}, {2.5, 0.0}};
    if (N == 3) {
        for (auto& x : t) x.push_back(0.0);
        t[2][2] = 0.25;
        t[3][2] = -0.5;
    }
    return t;
}

std::vector<Point> targets_from(const RunConfig& cfg) {
    const Json& j = cfg.at("potential_eval.targets");
    const int N = cfg.dim();
    if (j.is_null()) return default_targets(N);
    if (!j.is_array() || j.empty()) throw ConfigError("potential_eval.targets must be a nonempty array of points");
    std::vector<Point> out;
    for (const auto& p : j) {
        if (!p.is_array() || static_cast<int>(p.size()) != N)
            throw ConfigError("every target must be an array of " + std::to_string(N) + " numbers");
        Point x;
        for (const auto& c : p) {
            if (!c.is_number()) throw ConfigError("target coordinates must be numbers");
            x.push_back(c.get<double>());
        }
        out.push_back(std::move(x));
    }
    return out;
}

Json error_json(const std::exception& e) {
    Json j{{"type", "error"}, {"message", e.what()}};
    if (const auto* le = dynamic_cast<const Error*>(&e)) j["type"] = to_string(le->code());
    else if (dynamic_cast<const ConfigError*>(&e)) j["type"] = "ConfigError";
    return j;
}

// Levels for the isomorphism probe derived from the solve grid.
std::vector<GridLevel> refinement_levels(const RunConfig& cfg) {
    const Json& j = cfg.at("solve.refinement_levels");
    const auto g = cfg.grid();
    const int N = cfg.dim();
    const Json& gj = cfg.at("grid");
    const int angular = gj["angular"].is_null() ? (N == 2 ? 16 : 4) : gj["angular"].get<int>();
    const int panels = gj["panels"].get<int>(), order = gj["order"].get<int>();
    std::vector<GridLevel> out;
    if (j.is_null()) {
        for (double f : {0.5, 0.75, 1.0}) {
            GridLevel lv{g->r_max(), std::max(2, static_cast<int>(std::lround(panels * f))), order,
                         std::max(2, static_cast<int>(std::lround(angular * f)))};
            if (N == 2) lv.angular = std::max(4, lv.angular + lv.angular % 2);
            if (out.empty() || out.back().panels != lv.panels || out.back().angular != lv.angular) out.push_back(lv);
        }
        return out;
    }
    if (!j.is_array()) throw ConfigError("solve.refinement_levels must be an array");
    for (const auto& l : j) {
        if (!l.is_object() || !l.contains("panels") || !l.contains("angular") || !l["panels"].is_number_integer() ||
            !l["angular"].is_number_integer())
            throw ConfigError("each refinement level needs integer panels and angular");
        out.push_back({g->r_max(), l["panels"].get<int>(), l.value("order", order), l["angular"].get<int>()});
    }
    return out;
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (const auto* le = dynamic_cast<const Error*>(&e)) {
        switch (le->code()) {
            case ErrorCode::InvalidInput:
            case ErrorCode::DomainError:
            case ErrorCode::InsufficientSamples:
            case ErrorCode::NonFinite:
                return kExitInput;
            default:
                return kExitFailure;
        }
    }
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const nlohmann::json::exception*>(&e) ||
        dynamic_cast<const fs::filesystem_error*>(&e))
        return kExitInput;
    return kExitFailure;
}

int cmd_check_weights(const CommandContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const auto mc = cfg.constants();
    const auto surf = cfg.surface();
    const auto all = run_condition_battery(cfg.gamma(), cfg.Gamma(), surf, mc, cfg.numerics());

    std::vector<ConditionReport> reports;
    const Json& wanted = cfg.at("check_weights.conditions");
    if (wanted.empty()) {
        reports = all;
    } else {
        for (const auto& w : wanted) {
            if (!w.is_string()) throw ConfigError("check_weights.conditions must list condition names");
            const auto it = std::find_if(all.begin(), all.end(),
                                         [&](const ConditionReport& r) { return to_string(r.condition_id) == w.get<std::string>(); });
            if (it == all.end()) throw ConfigError("unknown condition '" + w.get<std::string>() + "'");
            reports.push_back(*it);
        }
    }

    bool fails = false, marginal = false;
    Json arr = Json::array();
    std::ostringstream table;
    table << std::left << std::setw(26) << "condition" << std::setw(10) << "verdict" << std::setw(16) << "sup"
          << "argmax_r\n";
    fs::create_directories(ctx.out_dir / "traces");
    for (const auto& r : reports) {
        fails |= r.verdict == Verdict::Fails;
        marginal |= r.verdict == Verdict::Marginal;
        arr.push_back(to_json(r));
        const std::string sup = r.sup_estimate ? fmt(*r.sup_estimate) : (r.divergent() ? "Divergent" : "-");
        table << std::left << std::setw(26) << to_string(r.condition_id) << std::setw(10) << to_string(r.verdict)
              << std::setw(16) << sup << fmt(r.argmax_r) << '\n';
        std::vector<std::vector<double>> rows;
        for (const auto& t : r.trace) rows.push_back({t.r, t.value});
        write_csv((ctx.out_dir / "traces" / (to_string(r.condition_id) + ".csv")).string(), {"r", "value"}, rows);
    }
    const int code = fails ? kExitFailure : marginal ? kExitMarginal : kExitOk;
    const std::string overall = fails ? "Fails" : marginal ? "Marginal" : "Holds";
    write_json(out_path(ctx, "conditions.json"),
               envelope("check-weights", cfg, Json{{"overall", overall}, {"exit_code", code}, {"reports", arr}}));
    std::ofstream(out_path(ctx, "verdicts.txt"), std::ios::binary) << table.str();
    log(ctx) << table.str() << "overall: " << overall << '\n';
    return code;
}

int cmd_hardy(const CommandContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const auto mc = cfg.constants();
    const RadialFunction U = power_profile(cfg.at("hardy.U"), "hardy.U");
    const RadialFunction V = power_profile(cfg.at("hardy.V"), "hardy.V");
    const std::string dir = cfg.at("hardy.direction").get<std::string>();
    HardyDirection d;
    if (dir == "FromZero") d = HardyDirection::FromZero;
    else if (dir == "FromInfinity") d = HardyDirection::FromInfinity;
    else throw ConfigError("hardy.direction must be FromZero or FromInfinity");
    const HardyReport rep = hardy_verify(U, V, mc, d, cfg.numerics());
    const int code = rep.sandwich_holds ? kExitOk : kExitFailure;
    write_json(out_path(ctx, "hardy.json"),
               envelope("hardy", cfg, Json{{"exit_code", code}, {"report", to_json(rep)}}));
    log(ctx) << "B = " << fmt(rep.B) << ", C_empirical = " << fmt(rep.C_empirical) << " in [" << fmt(rep.C_lower)
             << ", " << fmt(rep.C_upper) << "]: " << (rep.sandwich_holds ? "sandwich holds" : "sandwich violated")
             << '\n';
    return code;
}

int cmd_potential_eval(const CommandContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const int N = cfg.dim();
    const auto surf = cfg.surface();
    const std::string dname = cfg.at("potential_eval.density").get<std::string>();
    const NamedDensity dens = make_density(cfg, dname, cfg.at("potential_eval.density_path"));
    const auto targets = targets_from(cfg);
    QuadratureSpec spec = cfg.quadrature();
    for (double b : dens.breaks) spec.split_radii.push_back(b);
    const std::string op = cfg.at("potential_eval.operator").get<std::string>();

    Json body{{"operator", op}, {"density", dname}, {"lambda0", number(surf.lambda0())}};
    Json tj = Json::array();
    for (const auto& x : targets) tj.push_back(point_json(x));
    body["targets"] = tj;
    Json values = Json::array();
    std::vector<std::string> warnings;
    double err = 0;
    if (op == "single_layer") {
        const auto res = single_layer_apply(dens.u, surf, targets, spec);
        for (double v : res.values) values.push_back(number(v));
        err = res.error_estimate;
        warnings = res.warnings;
        if (surf.is_flat() && dens.radial) {
            Json oracle = Json::array();
            double worst = 0;
            for (std::size_t i = 0; i < targets.size(); ++i) {
                const double o = riesz_oracle_radial(*dens.radial, N, norm(targets[i]), dens.support, dens.breaks);
                oracle.push_back(number(o));
                worst = std::max(worst, std::abs(res.values[i] - o) / std::abs(o));
            }
            body["oracle"] = oracle;
            body["max_rel_error_vs_oracle"] = number(worst);
        }
    } else if (op == "gradient") {
        const auto res = gradient_single_layer(dens.u, surf, targets, spec);
        for (const auto& g : res.values) values.push_back(point_json(g));
        err = res.error_estimate;
        warnings = res.warnings;
    } else if (op.size() >= 2 && op[0] == 'T' && std::all_of(op.begin() + 1, op.end(), ::isdigit)) {
        const int k = std::stoi(op.substr(1));
        if (k < 1 || k > N + 1) throw ConfigError("operator index must be between 1 and " + std::to_string(N + 1));
        const auto res = singular_Tk_apply(dens.u, surf, k, targets, spec);
        for (double v : res.values) values.push_back(number(v));
        err = res.error_estimate;
        warnings = res.warnings;
    } else {
        throw ConfigError("potential_eval.operator must be single_layer, gradient or T1..T" + std::to_string(N + 1));
    }
    body["values"] = values;
    body["error_estimate"] = number(err);
    body["warnings"] = warnings;
    body["exit_code"] = kExitOk;
    write_json(out_path(ctx, "potential.json"), envelope("potential-eval", cfg, body));
    for (std::size_t i = 0; i < targets.size(); ++i) log(ctx) << "target " << i << ": " << values[i].dump() << '\n';
    return kExitOk;
}

int cmd_solve(const CommandContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const int N = cfg.dim();
    const auto mc = cfg.constants();
    const auto surf = cfg.surface();
    const auto grid = cfg.grid();
    const QuadratureSpec spec = cfg.quadrature();
    const auto gamma = cfg.gamma(), Gamma = cfg.Gamma();

    const std::string src = cfg.at("solve.f_source").get<std::string>();
    std::optional<Manufactured> man;
    std::vector<double> f;
    if (src.rfind("manufactured:", 0) == 0) {
        QuadratureSpec fine = spec;
        const Json& fa = cfg.at("solve.fine_angular_order");
        fine.angular_order = fa.is_null() ? 3 * spec.angular_order / 2 : fa.get<int>();
        fine.radial_order = spec.radial_order + 2;
        const std::string kind = src.substr(13);
        if (kind == "gaussian") {
            man = manufactured_gaussian(surf, grid, fine);
        } else if (kind == "ballcap") {
            man = manufactured_radial(
                surf, grid,
                [](double r) {
                    const double t = 1 - r * r / 4;
                    return t > 0 ? t * t * t : 0.0;
                },
                2.0, fine);
        } else {
            throw ConfigError("solve.f_source must be manufactured:gaussian, manufactured:ballcap or file");
        }
        f = man->f;
    } else if (src == "file") {
        const Json& p = cfg.at("solve.f_path");
        if (!p.is_string()) throw ConfigError("solve.f_path is required for f_source 'file'");
        const auto fg = read_grid_function_csv(p.get<std::string>(), grid);
        fg.validate();
        f = fg.values;
    } else {
        throw ConfigError("solve.f_source must be manufactured:gaussian, manufactured:ballcap or file");
    }

    log(ctx) << "assembling " << grid->size() << " x " << grid->size() << " system\n";
    const CollocationSystem sys = assemble(surf, grid, spec, mc);
    SolveOptions opt{gamma, Gamma, mc, 1e-10, {}, true};
    opt.rcond = cfg.at("solve.rcond").get<double>();
    const SolveResult res = solve(sys, f, opt);

    int code = kExitOk;
    Json body{{"f_source", src}, {"lambda0", number(surf.lambda0())}, {"grid", grid->describe()},
              {"diagnostics", to_json(res.diag)}};
    if (man) {
        const double e = relative_error(res.u, man->u0, gamma, mc);
        const Json& t = cfg.at("solve.recovery_threshold");
        const double thr = t.is_null() ? (surf.is_flat() ? 0.05 : 0.08) : t.get<double>();
        body["recovery"] = Json{{"relative_error", number(e)}, {"threshold", thr}, {"passed", e < thr}};
        if (!(e < thr)) code = kExitRecovery;
        log(ctx) << "recovery error " << fmt(e) << " (threshold " << fmt(thr) << ")\n";
    }
    if (cfg.at("solve.probe").get<bool>()) {
        const auto levels = refinement_levels(cfg);
        log(ctx) << "isomorphism probe over " << levels.size() << " levels\n";
        const IsomorphismReport iso = probe_isomorphism(surf, gamma, Gamma, mc, levels, spec);
        body["isomorphism"] = to_json(iso);
        std::vector<std::vector<double>> rows;
        for (const auto& l : iso.levels)
            rows.push_back({double(l.level.panels), double(l.level.angular),
                            double(l.level.make(N)->size()), l.max_forward, l.max_reverse});
        write_csv(out_path(ctx, "ratio-vs-refinement.csv"), {"panels", "angular", "unknowns", "max_forward", "max_reverse"},
                  rows);
    }
    body["exit_code"] = code;
    write_json(out_path(ctx, "solve.json"), envelope("solve", cfg, body));
    std::vector<std::vector<double>> prof;
    for (const auto& [r, v] : res.diag.seminorm_profile) prof.push_back({r, v});
    write_csv(out_path(ctx, "profile.csv"), {"r", "N_p"}, prof);
    write_grid_function_csv(res.u, out_path(ctx, "solution.csv"));
    log(ctx) << "residual " << fmt(res.diag.residual_rel) << ", rank " << res.diag.rank << "/" << res.diag.unknowns
             << '\n';
    return code;
}

int cmd_verify_identities(const CommandContext& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const int N = cfg.dim();
    const int ntargets = cfg.at("verify_identities.targets").get<int>();
    const int ndens = cfg.at("verify_identities.densities").get<int>();
    const double h = cfg.at("verify_identities.fd_step").get<double>();
    if (ntargets < 1 || ndens < 1 || !(h > 0)) throw ConfigError("verify_identities needs positive counts and step");
    std::mt19937_64 rng(cfg.seed());
    std::uniform_real_distribution<double> U(0, 1);
    const auto flat = LipschitzGraph::flat(N);
    const auto bump = LipschitzGraph::bump(N, 0.05, 1.0);
    const QuadratureSpec spec = QuadratureSpec::defaults(N);
    Json checks = Json::array();
    bool all = true;
    auto record = [&](const std::string& name, double value, double tol, Json extra = Json::object()) {
        const bool ok = std::isfinite(value) && value <= tol;
        all &= ok;
        Json j{{"name", name}, {"value", number(value)}, {"tolerance", tol}, {"passed", ok}};
        for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
        checks.push_back(j);
        log(ctx) << std::left << std::setw(28) << name << (ok ? "PASS " : "FAIL ") << fmt(value) << '\n';
    };
    auto random_point = [&](double a) {
        Point x(static_cast<std::size_t>(N));
        for (auto& c : x) c = a * (2 * U(rng) - 1);
        return x;
    };

    {
        const auto g = std::make_shared<const PolarGrid>(
            PolarGrid::with_breaks(N, {0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0}, 6, N == 2 ? 16 : 6));
        const auto u = PolarGridFunction::radial(g, [](double r) { return r < 1 ? 1.0 : 0.0; });
        QuadratureSpec s = spec;
        s.split_radii = {1.0};
        const double exact = 2 * std::pow(kPi, N / 2.0) / std::tgamma(N / 2.0);
        const double v = single_layer_apply(u, flat, {Point(static_cast<std::size_t>(N), 0.0)}, s).values[0];
        record("ball_centre", std::abs(v - exact) / exact, 1e-4, Json{{"computed", v}, {"exact", exact}});
    }
    {
        const auto g = std::make_shared<const PolarGrid>(PolarGrid::make(N, 3.0, 8, 8, N == 2 ? 24 : 16));
        const RadialFunction prof = [](double r) { return std::exp(-4 * r * r); };
        const auto u = PolarGridFunction::radial(g, prof);
        std::vector<Point> targets;
        for (int i = 0; i < ntargets; ++i) {
            Point x = random_point(1.0);
            const double n = norm(x), t = 1.5 * U(rng);
            for (auto& c : x) c *= t / n;
            targets.push_back(x);
        }
        const auto v = single_layer_apply(u, flat, targets, spec).values;
        double worst = 0;
        for (std::size_t i = 0; i < targets.size(); ++i) {
            const double o = riesz_oracle_radial(prof, N, norm(targets[i]), 3.0);
            worst = std::max(worst, std::abs(v[i] - o) / o);
        }
        record("radial_oracle", worst, 1e-4);
    }
    {
        const auto g = std::make_shared<const PolarGrid>(PolarGrid::make(N, 2.0, 4, 4, N == 2 ? 8 : 4));
        const auto z = PolarGridFunction::zeros(g);
        std::vector<Point> targets;
        for (int i = 0; i < ntargets; ++i) targets.push_back(random_point(1.5));
        double worst = 0;
        for (double v : single_layer_apply(z, bump, targets, spec).values) worst = std::max(worst, std::abs(v));
        record("zero_density", worst, 0.0);
        const auto u = PolarGridFunction::radial(g, [](double r) { return std::exp(-r * r); });
        worst = 0;
        for (double v : singular_Tk_apply(u, flat, N + 1, targets, spec).values) worst = std::max(worst, std::abs(v));
        record("flat_normal_component", worst, 1e-14);
    }
    {
        const auto g = N == 2 ? std::make_shared<const PolarGrid>(PolarGrid::make(2, 4.0, 12, 6, 24))
                              : std::make_shared<const PolarGrid>(PolarGrid::make(3, 3.0, 6, 6, 6));
        const auto u = PolarGridFunction::sample(g, [](const Point& x) {
            double s = (x[0] - 0.3) * (x[0] - 0.3);
            for (std::size_t k = 1; k < x.size(); ++k) s += x[k] * x[k];
            return std::exp(-2 * s);
        });
        std::vector<Point> targets;
        for (int i = 0; i < ntargets; ++i) targets.push_back(random_point(N == 2 ? 1.2 : 0.6));
        for (const auto* surf : {&flat, &bump}) {
            const auto G = gradient_single_layer(u, *surf, targets, spec);
            const auto F = gradient_finite_difference(u, *surf, targets, spec, h);
            double worst = 0;
            for (std::size_t i = 0; i < targets.size(); ++i) {
                const double nf = norm(F[i]);
                for (std::size_t k = 0; k < static_cast<std::size_t>(N); ++k)
                    worst = std::max(worst, std::abs(G.values[i][k] - F[i][k]) / nf);
            }
            record(surf == &flat ? "gradient_identity_flat" : "gradient_identity_bump", worst, 5e-3);
        }
    }
    {
        const auto g = std::make_shared<const PolarGrid>(
            N == 2 ? PolarGrid::make(2, 4.0, 8, 6, 16) : PolarGrid::make(3, 2.5, 4, 4, 5));
        const Point a = random_point(0.25), b = random_point(0.25);
        const double wa = N == 2 ? 2.0 : 1.0, wb = 1.5 * wa;
        auto bumpf = [](const Point& c, double w) {
            return [c, w](const Point& x) {
                double s = 0;
                for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - c[k]) * (x[k] - c[k]);
                return std::exp(-w * s);
            };
        };
        const auto u = PolarGridFunction::sample(g, bumpf(a, wa));
        const auto v = PolarGridFunction::sample(g, bumpf(b, wb));
        const auto nodes = g->nodes();
        const auto su = single_layer_apply(u, bump, nodes, spec).values;
        const auto sv = single_layer_apply(v, bump, nodes, spec).values;
        double l = 0, r = 0;
        for (std::size_t i = 0; i < g->n_radial(); ++i)
            for (std::size_t j = 0; j < g->n_angular(); ++j) {
                const std::size_t k = g->index(i, j);
                const double w = g->volume_weight(i, j) * bump.surface_element(nodes[k]);
                l += su[k] * v.values[k] * w;
                r += u.values[k] * sv[k] * w;
            }
        record("symmetry", std::abs(l - r) / std::abs(r), 1e-6);
    }
    {
        double worst = 0;
        Json trials = Json::array();
        for (int t = 0; t < ndens; ++t) {
            const auto g = std::make_shared<const PolarGrid>(PolarGrid::make(N, 4.0, 8, 6, N == 2 ? 16 : 6));
            std::vector<std::pair<Point, std::array<double, 2>>> bumps;
            for (int k = 0; k < 3; ++k) {
                const Point c = random_point(1.5);
                bumps.push_back({c, {0.5 + 4 * U(rng), 0.2 + U(rng)}});
            }
            const auto u = PolarGridFunction::sample(g, [&](const Point& x) {
                double v = 0.01;
                for (const auto& [c, a] : bumps) {
                    double s = 0;
                    for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - c[k]) * (x[k] - c[k]);
                    v += a[1] * std::exp(-a[0] * s);
                }
                return v;
            });
            const double M1 = 0.1 + U(rng), M2 = M1 + 0.2 + 1.5 * U(rng);
            const auto m = mass_comparison(u, M1, M2);
            // violation of left <= middle <= right, relative to the middle term
            const double viol = std::max({0.0, (m.left - m.middle) / m.middle, (m.middle - m.right) / m.middle});
            worst = std::max(worst, viol);
            trials.push_back(Json{{"M1", M1}, {"M2", M2}, {"left", m.left}, {"middle", m.middle}, {"right", m.right}});
        }
        record("mass_comparison", worst, 1e-8, Json{{"trials", trials}});
    }
    {
        const RadialGrid rg = cfg.numerics().grid;
        for (TailEnd side : {TailEnd::Zero, TailEnd::Infinity}) {
            const auto rep = verify_pi_lemma(RadialWeight::power(0.5), 1.0, 1.0, rg, side);
            double worst = 0;
            for (const auto& n : rep.nodes) worst = std::max(worst, std::abs(n.lhs - n.rhs) / n.rhs);
            record(side == TailEnd::Zero ? "power_integral_zero" : "power_integral_infinity", worst, 1e-8,
                   Json{{"C", rep.C}, {"nodes", rep.nodes.size()}});
        }
    }
    const int code = all ? kExitOk : kExitFailure;
    write_json(out_path(ctx, "identities.json"),
               envelope("verify-identities", cfg, Json{{"all_passed", all}, {"exit_code", code}, {"checks", checks}}));
    return code;
}

int cmd_report(const CommandContext& ctx) {
    static const std::vector<std::pair<std::string, std::string>> known{
        {"check-weights", "conditions.json"}, {"hardy", "hardy.json"},        {"potential-eval", "potential.json"},
        {"solve", "solve.json"},              {"verify-identities", "identities.json"}, {"error", "error.json"}};
    std::vector<std::string> files;
    const Json& in = ctx.cfg.at("report.inputs");
    if (in.is_null()) {
        for (const auto& [cmd, name] : known)
            if (fs::exists(ctx.out_dir / name)) files.push_back((ctx.out_dir / name).string());
    } else {
        if (!in.is_array()) throw ConfigError("report.inputs must be an array of paths");
        for (const auto& p : in) {
            if (!p.is_string()) throw ConfigError("report.inputs must be an array of paths");
            files.push_back(p.get<std::string>());
        }
    }
    if (files.empty()) throw ConfigError("no result files found to report on");
    Json summary = Json::array(), docs = Json::object();
    for (const auto& f : files) {
        const Json doc = read_json(f);
        const std::string cmd = doc.value("command", std::string("unknown"));
        Json s{{"file", fs::path(f).filename().string()}, {"command", cmd}};
        s["exit_code"] = doc.contains("exit_code") ? doc["exit_code"] : Json(nullptr);
        if (doc.contains("overall")) s["outcome"] = doc["overall"];
        else if (doc.contains("all_passed")) s["outcome"] = doc["all_passed"].get<bool>() ? "passed" : "failed";
        else if (doc.contains("recovery")) s["outcome"] = doc["recovery"]["passed"].get<bool>() ? "recovered" : "not recovered";
        else if (doc.contains("report") && doc["report"].contains("sandwich_holds"))
            s["outcome"] = doc["report"]["sandwich_holds"].get<bool>() ? "sandwich holds" : "sandwich violated";
        else if (doc.contains("error")) s["outcome"] = doc["error"]["type"];
        summary.push_back(s);
        docs[fs::path(f).stem().string()] = doc;
        log(ctx) << std::left << std::setw(20) << cmd << s.value("outcome", Json("")).dump() << '\n';
    }
    write_json(out_path(ctx, "summary.json"),
               envelope("report", ctx.cfg, Json{{"exit_code", kExitOk}, {"summary", summary}, {"documents", docs}}));
    return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weighted single layer potentials on Lipschitz graphs", "layerpot"};
    app.set_version_flag("--version", kVersion);
    std::string config_path, out_dir = ".";
    std::vector<std::string> sets;
    bool print_defaults = false;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--set", sets, "Override a configuration key: a.b.c=value (repeatable)")->allow_extra_args(false);
    app.add_option("--out", out_dir, "Output directory");
    auto* seed_opt = app.add_option("--seed", seed, "Random seed");
    app.add_flag("--print-defaults", print_defaults, "Print the default configuration and exit");

    using Cmd = int (*)(const CommandContext&);
    const std::vector<std::tuple<std::string, std::string, Cmd>> commands{
        {"check-weights", "Check the weight conditions", cmd_check_weights},
        {"hardy", "Verify a weighted Hardy inequality", cmd_hardy},
        {"potential-eval", "Evaluate the single layer potential or its singular parts", cmd_potential_eval},
        {"solve", "Solve the first-kind equation by collocation", cmd_solve},
        {"verify-identities", "Check operator identities numerically", cmd_verify_identities},
        {"report", "Merge result files into a summary", cmd_report}};
    std::vector<CLI::App*> subs;
    for (const auto& [name, help, fn] : commands) subs.push_back(app.add_subcommand(name, help)->fallthrough());
    app.require_subcommand(0, 1);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int c = app.exit(e, out, err);
        return c == 0 ? kExitOk : kExitInput;
    }
    if (print_defaults) {
        out << default_config().dump(2) << '\n';
        return kExitOk;
    }
    std::size_t which = subs.size();
    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) which = i;
    if (which == subs.size()) {
        err << "a subcommand is required\n" << app.help();
        return kExitInput;
    }
    const std::string name = std::get<0>(commands[which]);
    std::optional<RunConfig> cfg;
    try {
        cfg = RunConfig::load(config_path.empty() ? std::nullopt : std::optional<std::string>(config_path), sets,
                              seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt);
        CommandContext ctx{*cfg, fs::path(out_dir), &out};
        return std::get<2>(commands[which])(ctx);
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        err << name << ": " << e.what() << '\n';
        try {
            fs::create_directories(out_dir);
            const Json body{{"exit_code", code}, {"error", error_json(e)}};
            const Json doc = cfg ? envelope(name, *cfg, body)
                                 : Json{{"version", kVersion}, {"command", name}, {"exit_code", code}, {"error", error_json(e)}};
            write_json((fs::path(out_dir) / "error.json").string(), doc);
        } catch (const std::exception&) {
        }
        return code;
    }
}

}  // namespace layerpot
