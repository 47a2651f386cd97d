#ifndef POISSON_CI_SPECIAL_FN_HPP
#define POISSON_CI_SPECIAL_FN_HPP

#include <cstdint>
#include <stdexcept>

namespace poisson_ci {

// Integer chi-square degrees of freedom, always >= 1.
class DegreesOfFreedom {
public:
    explicit DegreesOfFreedom(std::uint32_t value) : value_(value) {
        if (value == 0) {
            throw std::domain_error("degrees of freedom must be >= 1");
        }
    }
    std::uint32_t value() const noexcept { return value_; }

private:
    std::uint32_t value_;
};

/// ln Gamma(z) for z > 0.
///
/// Upward recurrence to z >= 15 followed by the Stirling series, so the result
/// is accurate to a few ulps of the larger of |ln Gamma(z)| and ln z.
double log_gamma(double z);

/// Regularized lower incomplete gamma P(s, y) = gamma(s, y) / Gamma(s).
/// Series for y < s + 1, Lentz continued fraction for the complement otherwise.
double regularized_lower_gamma(double s, double y);

/// Regularized upper incomplete gamma Q(s, y) = 1 - P(s, y), computed
/// directly so the upper tail keeps full relative precision.
double regularized_upper_gamma(double s, double y);

// P[chi2_f <= q]
double chi_square_cdf(double q, DegreesOfFreedom f);

// P[chi2_f > q]
double chi_square_sf(double q, DegreesOfFreedom f);

/// Density of chi2_f at q (q >= 0).
double chi_square_pdf(double q, DegreesOfFreedom f);

/// The 100p-th percentile of chi2_f: the q with chi_square_cdf(q, f) == p.
///
/// Accepts p in [0, 1); p == 0 returns 0 exactly. The Wilson-Hilferty
/// approximation seeds a Newton iteration that is kept inside a bracket and
/// falls back to bisection whenever a step would leave it.
double chi_square_quantile(double p, DegreesOfFreedom f);

/// Standard normal quantile (Acklam's rational approximation, |rel err| < 1.2e-9).
/// Only good enough as a starting point for iterative inversions.
double normal_quantile_approx(double p);

/// lambda^x e^-lambda / x!, evaluated with Loader's saddle-point form so that
/// large x and lambda do not lose relative precision.
double poisson_pmf(std::uint64_t x, double lambda);

/// sum_{k=0..x} poisson_pmf(k, lambda)
double poisson_cdf(std::uint64_t x, double lambda);

}  // namespace poisson_ci

#endif  // POISSON_CI_SPECIAL_FN_HPP
