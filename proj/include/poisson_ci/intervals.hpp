#ifndef POISSON_CI_INTERVALS_HPP
#define POISSON_CI_INTERVALS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace poisson_ci {

/// The six chi-square interval rules. Each one fixes the degrees of freedom
/// (f1, f2) of the lower and upper percentile as a function of the count x.
enum class MethodKind {
    usual,                      // (2x, 2x+2), classical confidence interval
    structural_jeffreys_scale,  // (2x, 2x), structural / Jeffreys 1/lambda prior
    bayes_uniform,              // (2x+2, 2x+2), uniform prior
    jeffreys_poisson,           // (2x+1, 2x+1), Jeffreys 1/sqrt(lambda) prior
    adjusted_raise_f1,          // (2x+1, 2x+2)
    adjusted_drop_f2,           // (2x, 2x+1)
};

/// All methods, in the row order of the summary tables.
inline constexpr std::array<MethodKind, 6> kAllMethods = {
    MethodKind::usual,           MethodKind::structural_jeffreys_scale, MethodKind::bayes_uniform,
    MethodKind::jeffreys_poisson, MethodKind::adjusted_raise_f1,        MethodKind::adjusted_drop_f2,
};

// CLI name: usual, structural, uniform, jeffreys, raise-f1, drop-f2.
std::string_view method_name(MethodKind method);
std::optional<MethodKind> parse_method(std::string_view name);

// Row label used in the summary tables.
std::string_view method_label(MethodKind method);

// Degree rules as text, e.g. {"2x", "2x+2"} for usual.
std::array<std::string_view, 2> method_rule(MethodKind method);

struct DegreePair {
    std::uint64_t f1 = 0;
    std::uint64_t f2 = 0;

    friend bool operator==(const DegreePair&, const DegreePair&) = default;
};

/// Raw (f1, f2) for a count x, before the x = 0 substitutions.
DegreePair degrees_for(MethodKind method, std::uint64_t x);

enum class Target { lambda, rate };

struct EstimationInterval {
    double lower = 0.0;
    double upper = 0.0;
    Target target = Target::lambda;
    double exposure = 1.0;  // t; 1 for lambda intervals
    double alpha = 0.05;
    MethodKind method = MethodKind::usual;
    std::uint64_t x_observed = 0;

    double width() const noexcept { return upper - lower; }
    bool contains(double value) const noexcept { return lower <= value && value <= upper; }
};

/// Equal-tailed 100(1 - alpha)% interval for the mean count lambda:
///   [ chi2_{f1, alpha/2} / 2 ,  chi2_{f2, 1 - alpha/2} / 2 ].
/// A zero f1 gives a lower limit of 0; a zero f2 is replaced by 1.
/// Throws std::domain_error unless 0 < alpha < 1.
EstimationInterval lambda_interval(MethodKind method, std::uint64_t x, double alpha);

/// Interval for the mean rate nu = lambda / t over exposure t > 0.
EstimationInterval rate_interval(MethodKind method, std::uint64_t x, double t, double alpha);

}  // namespace poisson_ci

#endif  // POISSON_CI_INTERVALS_HPP
