#include "snnevo/plasticity.hpp"

#include <cmath>
#include <stdexcept>

namespace snnevo {

bool is_symmetric(RuleKind k) {
    return k == RuleKind::symmetric_hebbian || k == RuleKind::symmetric_anti_hebbian;
}

bool is_hebbian(RuleKind k) {
    return k == RuleKind::asymmetric_hebbian || k == RuleKind::symmetric_hebbian;
}

RuleKind make_rule_kind(bool symmetric, bool hebbian) {
    if (symmetric) return hebbian ? RuleKind::symmetric_hebbian : RuleKind::symmetric_anti_hebbian;
    return hebbian ? RuleKind::asymmetric_hebbian : RuleKind::asymmetric_anti_hebbian;
}

const char* rule_kind_name(RuleKind k) {
    switch (k) {
        case RuleKind::asymmetric_hebbian: return "asymmetric_hebbian";
        case RuleKind::asymmetric_anti_hebbian: return "asymmetric_anti_hebbian";
        case RuleKind::symmetric_hebbian: return "symmetric_hebbian";
        case RuleKind::symmetric_anti_hebbian: return "symmetric_anti_hebbian";
    }
    return "?";
}

RuleKind rule_kind_from_name(const std::string& name) {
    for (int i = 0; i < kNumRuleKinds; ++i) {
        RuleKind k = static_cast<RuleKind>(i);
        if (name == rule_kind_name(k)) return k;
    }
    throw std::invalid_argument("unknown learning rule kind: " + name);
}

const RuleRanges& ranges_for(RuleKind k) {
    return is_symmetric(k) ? kSymmetricRanges : kAsymmetricRanges;
}

double relative_timing(double t_out_ms, double t_in_ms) {
    return t_out_ms - t_in_ms;
}

double dog(double dt_r_ms, double sigma_plus, double sigma_minus) {
    constexpr double inv_sqrt_2pi = 0.3989422804014326779;
    const double zp = dt_r_ms / sigma_plus;
    const double zm = dt_r_ms / sigma_minus;
    return inv_sqrt_2pi / sigma_plus * std::exp(-0.5 * zp * zp) -
           inv_sqrt_2pi / sigma_minus * std::exp(-0.5 * zm * zm);
}

double delta_w(const LearningRule& rule, double dt_r_ms) {
    switch (rule.kind) {
        case RuleKind::asymmetric_hebbian:
            if (dt_r_ms > 0.0) return rule.a_plus * std::exp(-dt_r_ms / rule.shape_plus);
            if (dt_r_ms < 0.0) return -rule.a_minus * std::exp(dt_r_ms / rule.shape_minus);
            return 0.0;
        case RuleKind::asymmetric_anti_hebbian:
            if (dt_r_ms > 0.0) return -rule.a_plus * std::exp(-dt_r_ms / rule.shape_plus);
            if (dt_r_ms < 0.0) return rule.a_minus * std::exp(dt_r_ms / rule.shape_minus);
            return 0.0;
        case RuleKind::symmetric_hebbian: {
            const double g = dog(dt_r_ms, rule.shape_plus, rule.shape_minus);
            if (g > 0.0) return rule.a_plus * g;
            if (g < 0.0) return rule.a_minus * g;
            return 0.0;
        }
        case RuleKind::symmetric_anti_hebbian: {
            const double g = dog(dt_r_ms, rule.shape_plus, rule.shape_minus);
            if (g > 0.0) return -rule.a_plus * g;
            if (g < 0.0) return -rule.a_minus * g;
            return 0.0;
        }
    }
    return 0.0;
}

LearningRule sample_rule(RuleKind kind, Rng& rng) {
    const RuleRanges& r = ranges_for(kind);
    LearningRule rule;
    rule.kind = kind;
    rule.a_plus = rng.uniform(r.a_plus.lo, r.a_plus.hi);
    rule.a_minus = rng.uniform(r.a_minus.lo, r.a_minus.hi);
    rule.shape_plus = rng.uniform(r.shape_plus.lo, r.shape_plus.hi);
    rule.shape_minus = rng.uniform(r.shape_minus.lo, r.shape_minus.hi);
    return rule;
}

double mutation_variance(const ParamRange& range) {
    return 0.2 * range.width();
}

} // namespace snnevo
