#include "layerpot/json_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace layerpot {

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const ModelConstants& mc) {
    return Json{{"N", mc.N},
                {"p", number(mc.p)},
                {"p_conj", number(mc.p_conj())},
                {"c1", number(mc.c1)},
                {"c2", number(mc.c2)},
                {"c3", number(mc.c3)},
                {"lambda_star", number(mc.lambda_star)},
                {"lambda0", number(mc.lambda0)},
                {"M", number(mc.M())}};
}

Json to_json(const ConditionReport& r) {
    Json j;
    j["condition_id"] = to_string(r.condition_id);
    if (r.sup_estimate)
        j["sup_estimate"] = number(*r.sup_estimate);
    else if (r.divergent())
        j["sup_estimate"] = "Divergent";
    else
        j["sup_estimate"] = nullptr;
    j["argmax_r"] = number(r.argmax_r);
    j["verdict"] = to_string(r.verdict);
    j["boundary_flag"] = r.boundary_flag;
    Json trace = Json::array();
    for (const auto& t : r.trace) trace.push_back(Json{{"r", number(t.r)}, {"value", number(t.value)}});
    j["trace"] = std::move(trace);
    j["constants_used"] = to_json(r.constants_used);
    j["note"] = r.note;
    return j;
}

Json to_json(const HardyReport& r) {
    return Json{{"direction", to_string(r.direction)},
                {"B", number(r.B)},
                {"C_lower", number(r.C_lower)},
                {"C_empirical", number(r.C_empirical)},
                {"C_upper", number(r.C_upper)},
                {"argmax_r", number(r.argmax_r)},
                {"boundary_flag", r.boundary_flag},
                {"sandwich_holds", r.sandwich_holds},
                {"best_trial", r.best_trial},
                {"trials", r.trials}};
}

Json to_json(const SolveDiagnostics& d) {
    Json profile = Json::array();
    for (const auto& [r, v] : d.seminorm_profile) profile.push_back(Json{{"r", number(r)}, {"N_p", number(v)}});
    return Json{{"residual_rel", number(d.residual_rel)},
                {"ratio_norms", number(d.ratio_norms)},
                {"seminorm_profile", profile},
                {"bound_fit_c3", d.bound_fit_c3 ? number(*d.bound_fit_c3) : Json(nullptr)},
                {"rank", d.rank},
                {"unknowns", d.unknowns},
                {"sigma_max", number(d.sigma_max)},
                {"sigma_min_kept", number(d.sigma_min_kept)},
                {"ill_conditioned", d.ill_conditioned},
                {"warnings", d.warnings}};
}

Json to_json(const IsomorphismReport& r) {
    Json levels = Json::array();
    for (const auto& l : r.levels) {
        Json fw = Json::array(), rv = Json::array();
        for (double v : l.forward) fw.push_back(number(v));
        for (double v : l.reverse) rv.push_back(number(v));
        levels.push_back(Json{{"r_max", l.level.r_max},
                              {"panels", l.level.panels},
                              {"order", l.level.order},
                              {"angular", l.level.angular},
                              {"forward", fw},
                              {"reverse", rv},
                              {"max_forward", number(l.max_forward)},
                              {"max_reverse", number(l.max_reverse)}});
    }
    return Json{{"basket", r.basket},
                {"levels", levels},
                {"growth_forward", number(r.growth_forward)},
                {"growth_reverse", number(r.growth_reverse)},
                {"conditions_verdict", r.conditions_verdict},
                {"assessment", r.assessment},
                {"warnings", r.warnings}};
}

Json to_json(const PiLemmaReport& r) {
    return Json{{"side", r.side == TailEnd::Zero ? "Zero" : "Infinity"},
                {"C", number(r.C)},
                {"hypothesis_holds", r.hypothesis_holds},
                {"bound_holds", r.bound_holds},
                {"max_ratio", number(r.max_ratio)},
                {"nodes", r.nodes.size()}};
}

Json envelope(const std::string& command, const RunConfig& cfg, const Json& body) {
    Json j{{"version", kVersion}, {"command", command}, {"config", cfg.tree()}};
    for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
    return j;
}

void write_json(const std::string& path, const Json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

Json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n' << std::setprecision(17);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

}  // namespace layerpot
