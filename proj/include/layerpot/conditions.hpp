#pragma once

// Numerical verifiers for the weight admissibility conditions: two-factor
// suprema, inclusion integrals, uniqueness asymptotics, log-derivative
// windows, weighted Hardy constants and the integration-by-parts bounds.

#include <optional>
#include <string>
#include <vector>

#include "layerpot/core.hpp"
#include "layerpot/geometry.hpp"
#include "layerpot/weights.hpp"

namespace layerpot {

enum class ConditionId {
    EquivalentNorm,
    ExistenceJ1,
    ExistenceJ2,
    UniquenessZero,
    UniquenessInfinity,
    InclusionX,
    InclusionY,
    ContinuityB1,
    ContinuityB2,
    InverseB1,
    InverseB2,
    IsomorphismLogDerivative,
    PowerWindow,
};
std::string to_string(ConditionId id);
/// Human-readable statement of the condition, for tables.
std::string describe(ConditionId id);

enum class Verdict { Holds, Fails, Marginal };
std::string to_string(Verdict v);

struct TracePoint {
    double r = 0.0;
    double value = 0.0;
};

struct ConditionReport {
    ConditionId condition_id = ConditionId::EquivalentNorm;
    /// Empty when the supremum is infinite or undetermined (see verdict).
    std::optional<double> sup_estimate;
    double argmax_r = 0.0;
    Verdict verdict = Verdict::Holds;
    bool boundary_flag = false;
    std::vector<TracePoint> trace;
    ModelConstants constants_used;
    std::string note;

    bool divergent() const { return !sup_estimate.has_value() && verdict == Verdict::Fails; }
};

/// sup_r (int_0^r s^{N-1-p} Gamma^p)^{1/p} (int_r^inf s^{-(N-1)/(p-1)} Gamma^{-p'})^{1/p'}
ConditionReport check_equivalent_norm(const RadialWeight& Gamma, const ModelConstants& mc,
                                      const NumericsConfig& cfg = {});

/// The J1 and J2 suprema of the existence theorem. Throws PreconditionViolated
/// unless N/M < p < N.
std::pair<ConditionReport, ConditionReport> check_existence_conditions(const RadialWeight& gamma,
                                                                       const RadialWeight& Gamma,
                                                                       const LipschitzGraph& surf,
                                                                       const ModelConstants& mc,
                                                                       const NumericsConfig& cfg = {});

/// gamma^{-1} = O(r^{N/p - N + c2 Lambda0}) at 0 and
/// gamma^{-1} = O(r^{N/p} exp(-c1 int_1^r Lambda dnu/nu)) at infinity,
/// compared through fitted log-log slopes.
std::pair<ConditionReport, ConditionReport> check_uniqueness_asymptotics(const RadialWeight& gamma,
                                                                         const LipschitzGraph& surf,
                                                                         const ModelConstants& mc,
                                                                         const NumericsConfig& cfg = {});

/// Integrals guaranteeing L^p_gamma in X^p and the weighted Sobolev space in Y^{1,p}_M.
std::pair<ConditionReport, ConditionReport> check_inclusion_conditions(const RadialWeight& gamma,
                                                                       const RadialWeight& Gamma,
                                                                       const ModelConstants& mc,
                                                                       const NumericsConfig& cfg = {});

/// B1, B2 suprema for boundedness of S into the weighted Sobolev space.
std::pair<ConditionReport, ConditionReport> check_continuity_conditions(const RadialWeight& gamma,
                                                                        const RadialWeight& Gamma,
                                                                        const ModelConstants& mc,
                                                                        const NumericsConfig& cfg = {});

/// B1, B2 suprema for the inverse bound; same integrals as J1, J2.
std::pair<ConditionReport, ConditionReport> check_inverse_conditions(const RadialWeight& gamma,
                                                                     const RadialWeight& Gamma,
                                                                     const LipschitzGraph& surf,
                                                                     const ModelConstants& mc,
                                                                     const NumericsConfig& cfg = {});

/// Sufficient log-derivative criteria for S to be an isomorphism.
/// Throws PreconditionViolated unless N/M < p < N.
ConditionReport check_isomorphism_logderiv(const RadialWeight& gamma, const RadialWeight& Gamma,
                                           const LipschitzGraph& surf, const ModelConstants& mc,
                                           const NumericsConfig& cfg = {});

/// 1 < alpha + N/p < N - c2 Lambda0; Marginal within 1e-12 of either end.
ConditionReport check_power_alpha(double alpha, const ModelConstants& mc);

/// Every condition above, in ConditionId order. Conditions whose
/// preconditions fail are reported as Fails with the reason in `note`.
std::vector<ConditionReport> run_condition_battery(const RadialWeight& gamma, const RadialWeight& Gamma,
                                                   const LipschitzGraph& surf, const ModelConstants& mc,
                                                   const NumericsConfig& cfg = {});

// Two-factor products -------------------------------------------------------

/// exp(log_a) integrated over (0, r) and exp(log_b) over (r, inf), raised to
/// 1/q_a and 1/q_b, multiplied and maximised over r.
struct ProductSpec {
    RadialFunction log_a;
    double q_a = 2.0;
    RadialFunction log_b;
    double q_b = 2.0;
};

struct ProductResult {
    /// Holds: finite; Fails: a factor or the product diverges; Marginal: a
    /// critical exponent within the marginal band.
    Verdict verdict = Verdict::Holds;
    std::optional<double> sup;
    double argmax_r = 0.0;
    bool boundary_flag = false;
    std::vector<TracePoint> trace;
    std::string note;
};

ProductResult evaluate_product(const ProductSpec& spec, const NumericsConfig& cfg);

// Hardy inequalities ---------------------------------------------------------

enum class HardyDirection { FromZero, FromInfinity };
std::string to_string(HardyDirection d);

struct HardyReport {
    double B = 0.0;
    double C_lower = 0.0;
    double C_upper = 0.0;
    double C_empirical = 0.0;
    HardyDirection direction = HardyDirection::FromZero;
    double argmax_r = 0.0;
    bool boundary_flag = false;
    bool sandwich_holds = false;
    std::string best_trial;
    int trials = 0;
};

/// FromZero:     || U int_0^r g ||_p <= C || V g ||_p,
/// FromInfinity: || U int_r^inf g ||_p <= C || V g ||_p.
/// B is the Muckenhoupt supremum; C_empirical maximises the quotient over
/// truncated powers and the extremal test functions V^{-p'} on half-lines.
/// Throws DivergentB if B is infinite. U, V must be nonnegative; U may vanish
/// identically.
HardyReport hardy_verify(const RadialFunction& U, const RadialFunction& V, const ModelConstants& mc,
                         HardyDirection direction, const NumericsConfig& cfg = {});

// Integration-by-parts bounds ----------------------------------------------

struct PiLemmaNode {
    double r = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct PiLemmaReport {
    TailEnd side = TailEnd::Zero;
    /// essinf of 1 + (beta/alpha) s g'/g (Zero) or 1 - (beta/alpha) s g'/g (Infinity).
    double C = 0.0;
    bool hypothesis_holds = false;
    bool bound_holds = false;
    double max_ratio = 0.0;
    std::vector<PiLemmaNode> nodes;
};

/// Zero:     int_0^r s^{alpha-1} g^beta ds   <= r^alpha g(r)^beta / (alpha C)
/// Infinity: int_r^inf s^{-alpha-1} g^beta ds <= r^{-alpha} g(r)^beta / (alpha C)
/// checked at every grid node with relative slack `tol`. A nonpositive C is
/// reported through hypothesis_holds = false.
PiLemmaReport verify_pi_lemma(const RadialWeight& g, double alpha, double beta, const RadialGrid& grid,
                              TailEnd side, double tol = 1e-8, double quad_tol = 1e-11);

}  // namespace layerpot
