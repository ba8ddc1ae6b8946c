#include "layerpot/config.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace layerpot {

namespace {

Json weight_block() {
    return Json{{"family", "power"}, {"alpha", 0.0}, {"alpha1", 0.0}, {"alpha2", 0.0},
                {"break_r", 1.0},    {"scale", 1.0}, {"path", nullptr}};
}

bool same_kind(const Json& def, const Json& v) {
    if (def.is_null()) return true;
    if (def.is_number_float()) return v.is_number();
    if (def.is_number_integer()) return v.is_number_integer();
    if (def.is_boolean()) return v.is_boolean();
    if (def.is_string()) return v.is_string();
    if (def.is_array()) return v.is_array();
    if (def.is_object()) return v.is_object();
    return false;
}

std::string kind(const Json& v) {
    if (v.is_number_integer()) return "integer";
    if (v.is_number()) return "number";
    return v.type_name();
}

double num(const Json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where + " must be a number");
    return v.get<double>();
}

int integer(const Json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ConfigError(where + " must be an integer");
    return v.get<int>();
}

std::string str(const Json& v, const std::string& where) {
    if (!v.is_string()) throw ConfigError(where + " must be a string");
    return v.get<std::string>();
}

}  // namespace

Json default_config() {
    Json c;
    c["seed"] = 0;
    c["constants"] = {{"N", 3}, {"p", 2.0}, {"c1", 1.0}, {"c2", 1.0}, {"c3", 1.0}, {"lambda_star", nullptr}};
    c["surface"] = {{"family", "flat"}, {"eps", 0.05}, {"width", 1.0}, {"path", nullptr}, {"lambda0", nullptr}};
    c["weights"] = {{"gamma", weight_block()}, {"Gamma", weight_block()}};
    c["numerics"] = {{"quad_tol", 1e-10},         {"probe_r_min", 1e-6},  {"probe_r_max", 1e6},
                     {"points_per_decade", 32},   {"tail_samples", 9},    {"marginal_band", 0.05}};
    c["grid"] = {{"r_max", 6.0}, {"panels", 16}, {"order", 4}, {"angular", nullptr}};
    c["quad"] = {{"r_min", 0.0},
                 {"r_max", nullptr},
                 {"split_radius_factor", 2.0},
                 {"radial_order", 8},
                 {"angular_order", nullptr},
                 {"pv_symmetrization", true},
                 {"tangent_splitting", true},
                 {"split_radii", Json::array()}};
    c["check_weights"] = {{"conditions", Json::array()}};
    c["hardy"] = {{"U", {{"exponent", -1.0}, {"scale", 1.0}}},
                  {"V", {{"exponent", 0.0}, {"scale", 1.0}}},
                  {"direction", "FromZero"}};
    c["potential_eval"] = {{"density", "gaussian"}, {"density_path", nullptr}, {"operator", "single_layer"},
                           {"targets", nullptr}};
    c["solve"] = {{"f_source", "manufactured:gaussian"}, {"f_path", nullptr},        {"refinement_levels", nullptr},
                  {"recovery_threshold", nullptr},       {"fine_angular_order", nullptr}, {"rcond", 1e-10},
                  {"probe", true}};
    c["verify_identities"] = {{"targets", 5}, {"fd_step", 1e-3}, {"densities", 10}};
    c["report"] = {{"inputs", nullptr}};
    return c;
}

void merge_checked(Json& base, const Json& user, const std::string& prefix) {
    if (!user.is_object()) throw ConfigError((prefix.empty() ? std::string("configuration") : prefix) + " must be an object");
    for (auto it = user.begin(); it != user.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (!base.contains(it.key())) throw ConfigError("unknown configuration key '" + key + "'");
        Json& slot = base[it.key()];
        if (slot.is_object() && it.value().is_object()) {
            merge_checked(slot, it.value(), key);
            continue;
        }
        if (!same_kind(slot, it.value()))
            throw ConfigError("configuration key '" + key + "' expects " + kind(slot) + ", got " + kind(it.value()));
        slot = it.value();
    }
}

void apply_override(Json& tree, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not of the form key=value");
    const std::string path = assignment.substr(0, eq), text = assignment.substr(eq + 1);
    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    Json user = value;
    std::vector<std::string> parts;
    std::stringstream ss(path);
    for (std::string p; std::getline(ss, p, '.');) {
        if (p.empty()) throw ConfigError("override path '" + path + "' has an empty component");
        parts.push_back(p);
    }
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) user = Json{{*it, user}};
    merge_checked(tree, user);
}

RunConfig RunConfig::from_json(const Json& user) {
    RunConfig rc;
    rc.tree_ = default_config();
    merge_checked(rc.tree_, user);
    rc.dim();
    return rc;
}

RunConfig RunConfig::load(const std::optional<std::string>& path, const std::vector<std::string>& overrides,
                          std::optional<std::uint64_t> seed) {
    RunConfig rc;
    rc.tree_ = default_config();
    if (path) {
        std::ifstream in(*path);
        if (!in) throw ConfigError("cannot open configuration file '" + *path + "'");
        Json user;
        try {
            user = Json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("configuration file '" + *path + "' is not valid JSON: " + e.what());
        }
        merge_checked(rc.tree_, user);
    }
    for (const auto& o : overrides) apply_override(rc.tree_, o);
    if (seed) rc.tree_["seed"] = *seed;
    if (!rc.tree_["seed"].is_number_integer() || rc.tree_["seed"].get<long long>() < 0)
        throw ConfigError("seed must be a nonnegative integer");
    rc.dim();
    return rc;
}

const Json& RunConfig::at(const std::string& path) const {
    const Json* j = &tree_;
    std::stringstream ss(path);
    for (std::string p; std::getline(ss, p, '.');) {
        if (!j->is_object() || !j->contains(p)) throw ConfigError("no configuration key '" + path + "'");
        j = &(*j)[p];
    }
    return *j;
}

std::uint64_t RunConfig::seed() const { return tree_["seed"].get<std::uint64_t>(); }

int RunConfig::dim() const {
    const int N = integer(tree_["constants"]["N"], "constants.N");
    if (N != 2 && N != 3) throw ConfigError("constants.N must be 2 or 3");
    return N;
}

LipschitzGraph RunConfig::surface() const {
    const Json& s = tree_["surface"];
    const int N = dim();
    const std::string fam = str(s["family"], "surface.family");
    if (fam == "flat") return LipschitzGraph::flat(N);
    if (fam == "cone") return LipschitzGraph::cone(N, num(s["eps"], "surface.eps"));
    if (fam == "bump") return LipschitzGraph::bump(N, num(s["eps"], "surface.eps"), num(s["width"], "surface.width"));
    if (fam == "custom") {
        if (!s["path"].is_string()) throw ConfigError("surface.path is required for a custom surface");
        std::optional<double> l0;
        if (!s["lambda0"].is_null()) l0 = num(s["lambda0"], "surface.lambda0");
        return LipschitzGraph::from_csv(N, s["path"].get<std::string>(), l0, seed());
    }
    throw ConfigError("surface.family must be one of flat, cone, bump, custom");
}

ModelConstants RunConfig::constants() const {
    const Json& c = tree_["constants"];
    std::optional<double> ls;
    if (!c["lambda_star"].is_null()) ls = num(c["lambda_star"], "constants.lambda_star");
    ModelConstants mc = ModelConstants::make(dim(), num(c["p"], "constants.p"), surface().lambda0(),
                                             num(c["c1"], "constants.c1"), num(c["c2"], "constants.c2"),
                                             num(c["c3"], "constants.c3"), ls);
    try {
        mc.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return mc;
}

RadialWeight weight_from_json(const Json& b, const std::string& where) {
    const std::string fam = str(b["family"], where + ".family");
    const double scale = num(b["scale"], where + ".scale");
    if (fam == "power") return RadialWeight::power(num(b["alpha"], where + ".alpha"), scale);
    if (fam == "piecewise")
        return RadialWeight::piecewise(num(b["alpha1"], where + ".alpha1"), num(b["alpha2"], where + ".alpha2"),
                                       num(b["break_r"], where + ".break_r"), scale);
    if (fam == "powerlog") return RadialWeight::powerlog(num(b["alpha"], where + ".alpha"), scale);
    if (fam == "custom") {
        if (!b["path"].is_string()) throw ConfigError(where + ".path is required for a custom weight");
        return RadialWeight::from_csv(b["path"].get<std::string>());
    }
    throw ConfigError(where + ".family must be one of power, piecewise, powerlog, custom");
}

RadialWeight RunConfig::gamma() const { return weight_from_json(tree_["weights"]["gamma"], "weights.gamma"); }
RadialWeight RunConfig::Gamma() const { return weight_from_json(tree_["weights"]["Gamma"], "weights.Gamma"); }

NumericsConfig RunConfig::numerics() const {
    const Json& n = tree_["numerics"];
    NumericsConfig cfg;
    cfg.quad_tol = num(n["quad_tol"], "numerics.quad_tol");
    cfg.tail.samples = integer(n["tail_samples"], "numerics.tail_samples");
    cfg.tail.marginal_band = num(n["marginal_band"], "numerics.marginal_band");
    const double lo = num(n["probe_r_min"], "numerics.probe_r_min"), hi = num(n["probe_r_max"], "numerics.probe_r_max");
    const int ppd = integer(n["points_per_decade"], "numerics.points_per_decade");
    if (!(lo > 0) || !(hi > lo) || ppd < 1) throw ConfigError("numerics probe range must satisfy 0 < r_min < r_max, points_per_decade >= 1");
    cfg.grid = RadialGrid(lo, hi, ppd);
    return cfg;
}

std::shared_ptr<const PolarGrid> RunConfig::grid() const {
    const Json& g = tree_["grid"];
    const int N = dim();
    const int angular = g["angular"].is_null() ? (N == 2 ? 16 : 4) : integer(g["angular"], "grid.angular");
    try {
        return std::make_shared<const PolarGrid>(PolarGrid::make(N, num(g["r_max"], "grid.r_max"),
                                                                 integer(g["panels"], "grid.panels"),
                                                                 integer(g["order"], "grid.order"), angular));
    } catch (const Error& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
}

QuadratureSpec RunConfig::quadrature() const {
    const Json& q = tree_["quad"];
    QuadratureSpec s = QuadratureSpec::defaults(dim());
    s.r_min = num(q["r_min"], "quad.r_min");
    s.r_max = q["r_max"].is_null() ? std::numeric_limits<double>::infinity() : num(q["r_max"], "quad.r_max");
    s.split_radius_factor = num(q["split_radius_factor"], "quad.split_radius_factor");
    s.radial_order = integer(q["radial_order"], "quad.radial_order");
    if (!q["angular_order"].is_null()) s.angular_order = integer(q["angular_order"], "quad.angular_order");
    s.pv_symmetrization = q["pv_symmetrization"].get<bool>();
    s.tangent_splitting = q["tangent_splitting"].get<bool>();
    s.split_radii.clear();
    for (const auto& v : q["split_radii"]) s.split_radii.push_back(num(v, "quad.split_radii[]"));
    try {
        s.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("quad: ") + e.what());
    }
    return s;
}

}  // namespace layerpot
