#pragma once

// Run configuration: a JSON key tree merged over documented defaults, with
// `path=value` overrides and typed accessors for every module.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "layerpot/conditions.hpp"
#include "layerpot/core.hpp"
#include "layerpot/geometry.hpp"
#include "layerpot/operators.hpp"
#include "layerpot/polar_grid.hpp"
#include "layerpot/solver.hpp"
#include "layerpot/weights.hpp"

namespace layerpot {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "layerpot 0.1.0";

/// Invalid configuration (unknown key, wrong type, unparsable value).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every key with its default. Keys whose default is null are optional.
Json default_config();

class RunConfig {
public:
    /// Defaults, then the file (if any), then each `a.b.c=value` override;
    /// a seed given separately replaces "seed".
    static RunConfig load(const std::optional<std::string>& path, const std::vector<std::string>& overrides,
                          std::optional<std::uint64_t> seed = std::nullopt);
    static RunConfig from_json(const Json& user);

    const Json& tree() const { return tree_; }
    std::uint64_t seed() const;
    int dim() const;

    LipschitzGraph surface() const;
    ModelConstants constants() const;
    RadialWeight gamma() const;
    RadialWeight Gamma() const;
    NumericsConfig numerics() const;
    std::shared_ptr<const PolarGrid> grid() const;
    QuadratureSpec quadrature() const;

    /// Value at a dotted path.
    const Json& at(const std::string& path) const;

private:
    Json tree_;
};

/// Merges `user` into `base`, rejecting keys absent from `base` and values
/// whose JSON type differs from a non-null default.
void merge_checked(Json& base, const Json& user, const std::string& prefix = "");
/// Applies one `a.b.c=value` override; value is parsed as JSON when possible,
/// else taken as a string.
void apply_override(Json& tree, const std::string& assignment);

/// Radial weight from a block {family, alpha, alpha1, alpha2, break_r, scale, path}.
RadialWeight weight_from_json(const Json& block, const std::string& where);

}  // namespace layerpot
