#ifndef SNNEVO_PLASTICITY_HPP
#define SNNEVO_PLASTICITY_HPP

#include <cstdint>
#include <string>

#include "snnevo/rng.hpp"

namespace snnevo {

enum class RuleKind : std::uint8_t {
    asymmetric_hebbian = 0,
    asymmetric_anti_hebbian = 1,
    symmetric_hebbian = 2,
    symmetric_anti_hebbian = 3,
};

constexpr int kNumRuleKinds = 4;

bool is_symmetric(RuleKind k);
bool is_hebbian(RuleKind k);
RuleKind make_rule_kind(bool symmetric, bool hebbian);
const char* rule_kind_name(RuleKind k);
RuleKind rule_kind_from_name(const std::string& name);

/// One STDP rule: the kind plus its four parameters. For asymmetric kinds
/// shape_plus/shape_minus are tau+/tau-, for symmetric kinds sigma+/sigma-.
struct LearningRule {
    RuleKind kind = RuleKind::asymmetric_hebbian;
    double a_plus = 0.0;
    double a_minus = 0.0;
    double shape_plus = 0.0;
    double shape_minus = 0.0;

    bool operator==(const LearningRule&) const = default;
};

struct ParamRange {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
};

struct RuleRanges {
    ParamRange a_plus;
    ParamRange a_minus;
    ParamRange shape_plus;
    ParamRange shape_minus;
};

// Parameter domains for the two rule families.
inline constexpr RuleRanges kAsymmetricRanges{{0.1, 1.0}, {0.1, 1.0}, {1.0, 10.0}, {1.0, 10.0}};
inline constexpr RuleRanges kSymmetricRanges{{1.0, 10.6}, {1.0, 44.0}, {3.5, 10.0}, {13.5, 20.0}};

const RuleRanges& ranges_for(RuleKind k);

struct StdpWindow {
    double half_width_ms = 40.0;
};

/// t_out - t_in in ms; positive when the input spike precedes the output.
double relative_timing(double t_out_ms, double t_in_ms);

/// Difference-of-Gaussians kernel used by the symmetric rules.
double dog(double dt_r_ms, double sigma_plus, double sigma_minus);

/// Weight change for one (t_out, t_in) pairing at relative timing dt_r_ms.
double delta_w(const LearningRule& rule, double dt_r_ms);

/// Draw a rule of the given kind with parameters uniform in their ranges.
LearningRule sample_rule(RuleKind kind, Rng& rng);

/// Variance of the perturbation noise for a parameter with the given range.
double mutation_variance(const ParamRange& range);

} // namespace snnevo

#endif
