#include "poisson_ci/intervals.hpp"

#include "poisson_ci/special_fn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace poisson_ci {

namespace {

struct MethodInfo {
    MethodKind kind;
    std::string_view name;
    std::string_view label;
    std::string_view f1_rule;
    std::string_view f2_rule;
    std::uint64_t f1_offset;
    std::uint64_t f2_offset;
};

constexpr std::array<MethodInfo, 6> kMethodTable = {{
    {MethodKind::usual, "usual", "Usual", "2x", "2x+2", 0, 2},
    {MethodKind::structural_jeffreys_scale, "structural",
     "Structural & Bayes-Jeffreys prior for a positive parameter", "2x", "2x", 0, 0},
    {MethodKind::bayes_uniform, "uniform", "Bayes-uniform prior", "2x+2", "2x+2", 2, 2},
    {MethodKind::jeffreys_poisson, "jeffreys", "Bayes-Jeffreys prior for Poisson", "2x+1", "2x+1", 1, 1},
    {MethodKind::adjusted_raise_f1, "raise-f1", "Other option 1", "2x+1", "2x+2", 1, 2},
    {MethodKind::adjusted_drop_f2, "drop-f2", "Other option 2", "2x", "2x+1", 0, 1},
}};

const MethodInfo& info(MethodKind method) {
    for (const auto& entry : kMethodTable) {
        if (entry.kind == method) {
            return entry;
        }
    }
    throw std::invalid_argument("unknown MethodKind");
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("alpha must lie in (0, 1)");
    }
}

}  // namespace

std::string_view method_name(MethodKind method) { return info(method).name; }

std::string_view method_label(MethodKind method) { return info(method).label; }

std::array<std::string_view, 2> method_rule(MethodKind method) {
    const auto& entry = info(method);
    return {entry.f1_rule, entry.f2_rule};
}

std::optional<MethodKind> parse_method(std::string_view name) {
    for (const auto& entry : kMethodTable) {
        if (entry.name == name) {
            return entry.kind;
        }
    }
    return std::nullopt;
}

DegreePair degrees_for(MethodKind method, std::uint64_t x) {
    const auto& entry = info(method);
    return {2 * x + entry.f1_offset, 2 * x + entry.f2_offset};
}

EstimationInterval lambda_interval(MethodKind method, std::uint64_t x, double alpha) {
    check_alpha(alpha);
    const DegreePair df = degrees_for(method, x);
    if (df.f2 > std::numeric_limits<std::uint32_t>::max()) {
        throw std::domain_error("count too large for chi-square degrees of freedom");
    }

    EstimationInterval interval;
    interval.target = Target::lambda;
    interval.exposure = 1.0;
    interval.alpha = alpha;
    interval.method = method;
    interval.x_observed = x;
    interval.lower = df.f1 == 0
                         ? 0.0
                         : 0.5 * chi_square_quantile(0.5 * alpha, DegreesOfFreedom(static_cast<std::uint32_t>(df.f1)));
    const auto f2 = static_cast<std::uint32_t>(df.f2 == 0 ? 1 : df.f2);
    interval.upper = 0.5 * chi_square_quantile(1.0 - 0.5 * alpha, DegreesOfFreedom(f2));
    return interval;
}

EstimationInterval rate_interval(MethodKind method, std::uint64_t x, double t, double alpha) {
    if (!(t > 0.0) || std::isinf(t)) {
        throw std::domain_error("exposure t must be positive and finite");
    }
    EstimationInterval interval = lambda_interval(method, x, alpha);
    interval.lower /= t;
    interval.upper /= t;
    interval.target = Target::rate;
    interval.exposure = t;
    return interval;
}

}  // namespace poisson_ci
