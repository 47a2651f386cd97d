#include "poisson_ci/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace poisson_ci {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIterations = 100000;

// ln sqrt(2 pi)
constexpr double kLnSqrt2Pi = 0.91893853320467274178032973640562;

// Stirling series tail: ln Gamma(z + 1) - [(z + 1/2) ln z - z + ln sqrt(2 pi)].
// Truncated after the z^-13 term; for z >= 15 the first omitted term is < 1e-19.
double stirling_tail(double z) {
    const double r = 1.0 / z;
    const double r2 = r * r;
    return r * (1.0 / 12.0 +
                r2 * (-1.0 / 360.0 +
                      r2 * (1.0 / 1260.0 +
                            r2 * (-1.0 / 1680.0 +
                                  r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360360.0 + r2 * (1.0 / 156.0)))))));
}

constexpr double kStirlingCutoff = 15.0;

// Stirling error at z = 0, 0.5, 1, ..., 15 (mpmath, 40 digits). Every shape
// reached from integer counts and integer degrees of freedom lands here.
constexpr double kStirlingHalves[31] = {
    0.0,
    0.1534264097200273452914,
    0.08106146679532725821967,
    0.05481412105191765389614,
    0.04134069595540929409382,
    0.03316287351993628748511,
    0.02767792568499833914879,
    0.02374616365629749597133,
    0.02079067210376509311152,
    0.01848845053267318523078,
    0.01664469118982119216319,
    0.01513497322191737887351,
    0.01387612882307074799875,
    0.01281046524292022692425,
    0.01189670994589177009506,
    0.01110455975820691732663,
    0.01041126526197209649748,
    0.00979941612615880329839,
    0.009255462182712732917729,
    0.008768700134139385462955,
    0.008330563433362871256469,
    0.00793411456431402054725,
    0.007573675487951840794972,
    0.007244554301320383179546,
    0.006942840107209529865664,
    0.006665247032707682442356,
    0.00640899418800420706844,
    0.006171712263039457647535,
    0.005951370112758847735624,
    0.005746216513010115682026,
    0.005554733551962801371039,
};

// Index into kStirlingHalves when z is a half-integer below the cutoff.
std::optional<std::size_t> half_integer_index(double z) {
    const double twice = 2.0 * z;
    if (z < kStirlingCutoff && twice == std::floor(twice)) {
        return static_cast<std::size_t>(twice);
    }
    return std::nullopt;
}

double stirling_error(double z) {
    if (z >= kStirlingCutoff) {
        return stirling_tail(z);
    }
    if (const auto index = half_integer_index(z)) {
        return kStirlingHalves[*index];
    }
    return log_gamma(z + 1.0) - (z + 0.5) * std::log(z) + z - kLnSqrt2Pi;
}

// Deviance term a ln(a / b) + b - a, evaluated without cancellation when a ~ b.
double deviance_term(double a, double b) {
    if (std::abs(a - b) < 0.1 * (a + b)) {
        const double v = (a - b) / (a + b);
        const double v2 = v * v;
        double sum = (a - b) * v;
        double term = 2.0 * a * v;
        for (int j = 1; j < 1000; ++j) {
            term *= v2;
            const double next = sum + term / (2 * j + 1);
            if (next == sum) {
                return sum;
            }
            sum = next;
        }
        return sum;
    }
    return a * std::log(a / b) + b - a;
}

// y^s e^-y / Gamma(s + 1) for real s >= 0, y >= 0.
// This is the Poisson pmf extended to real s and the common prefactor of both
// incomplete gamma expansions.
double poisson_kernel(double s, double y) {
    if (s == 0.0) {
        return std::exp(-y);
    }
    if (y == 0.0) {
        return 0.0;
    }
    return std::exp(-stirling_error(s) - deviance_term(s, y)) / std::sqrt(2.0 * std::numbers::pi * s);
}

// P(s, y) by its power series; only used for y < s + 1.
double lower_gamma_series(double s, double y) {
    double term = 1.0;
    double sum = 1.0;
    double denom = s;
    for (int n = 0; n < kMaxIterations; ++n) {
        denom += 1.0;
        term *= y / denom;
        sum += term;
        if (term < sum * 1e-17) {
            break;
        }
    }
    return poisson_kernel(s, y) * sum;
}

// Q(s, y) by Lentz's continued fraction; only used for y >= s + 1.
double upper_gamma_fraction(double s, double y) {
    constexpr double tiny = 1e-300;
    double b = y + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            break;
        }
    }
    // y^s e^-y / Gamma(s) = s * poisson_kernel(s, y)
    return s * poisson_kernel(s, y) * h;
}

void check_gamma_args(double s, double y) {
    if (!(s > 0.0) || std::isinf(s)) {
        throw std::domain_error("incomplete gamma: shape must be positive and finite");
    }
    if (!(y >= 0.0)) {
        throw std::domain_error("incomplete gamma: argument must be nonnegative");
    }
}

}  // namespace

double log_gamma(double z) {
    if (!(z > 0.0)) {
        throw std::domain_error("log_gamma: argument must be positive");
    }
    if (std::isinf(z)) {
        return z;
    }
    if (z >= kStirlingCutoff) {
        // ln Gamma(z) = ln Gamma(z + 1) - ln z
        return (z - 0.5) * std::log(z) - z + kLnSqrt2Pi + stirling_tail(z);
    }
    if (const auto index = half_integer_index(z); index && *index > 0) {
        return (z - 0.5) * std::log(z) - z + kLnSqrt2Pi + kStirlingHalves[*index];
    }
    // Gamma(z) = Gamma(z + n) / (z (z + 1) ... (z + n - 1))
    double shifted = z;
    double product = 1.0;
    while (shifted < kStirlingCutoff) {
        product *= shifted;
        shifted += 1.0;
    }
    return log_gamma(shifted) - std::log(product);
}

double regularized_lower_gamma(double s, double y) {
    check_gamma_args(s, y);
    if (y == 0.0) {
        return 0.0;
    }
    if (std::isinf(y)) {
        return 1.0;
    }
    if (y < s + 1.0) {
        return std::min(1.0, lower_gamma_series(s, y));
    }
    return std::clamp(1.0 - upper_gamma_fraction(s, y), 0.0, 1.0);
}

double regularized_upper_gamma(double s, double y) {
    check_gamma_args(s, y);
    if (y == 0.0) {
        return 1.0;
    }
    if (std::isinf(y)) {
        return 0.0;
    }
    if (y < s + 1.0) {
        return std::clamp(1.0 - lower_gamma_series(s, y), 0.0, 1.0);
    }
    return std::min(1.0, upper_gamma_fraction(s, y));
}

double chi_square_cdf(double q, DegreesOfFreedom f) {
    if (!(q >= 0.0)) {
        throw std::domain_error("chi_square_cdf: quantile must be nonnegative");
    }
    return regularized_lower_gamma(0.5 * f.value(), 0.5 * q);
}

double chi_square_sf(double q, DegreesOfFreedom f) {
    if (!(q >= 0.0)) {
        throw std::domain_error("chi_square_sf: quantile must be nonnegative");
    }
    return regularized_upper_gamma(0.5 * f.value(), 0.5 * q);
}

double chi_square_pdf(double q, DegreesOfFreedom f) {
    if (!(q >= 0.0)) {
        throw std::domain_error("chi_square_pdf: quantile must be nonnegative");
    }
    const double k = 0.5 * f.value();
    if (q == 0.0) {
        if (f.value() == 1) {
            return std::numeric_limits<double>::infinity();
        }
        return f.value() == 2 ? 0.5 : 0.0;
    }
    return poisson_kernel(k, 0.5 * q) * k / q;
}

double normal_quantile_approx(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("normal_quantile_approx: p must lie in (0, 1)");
    }
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double chi_square_quantile(double p, DegreesOfFreedom f) {
    if (!(p >= 0.0 && p < 1.0)) {
        throw std::domain_error("chi_square_quantile: p must lie in [0, 1)");
    }
    if (p == 0.0) {
        return 0.0;
    }
    const double df = f.value();
    const double k = 0.5 * df;

    // Residual that increases with q. Upper-half probabilities are matched on
    // the survival function; 1 - p is exact there (Sterbenz).
    const bool upper = p > 0.5;
    const double target = upper ? 1.0 - p : p;
    auto residual = [&](double q) {
        return upper ? target - chi_square_sf(q, f) : chi_square_cdf(q, f) - target;
    };

    // Wilson-Hilferty start; near the origin use P(k, y) ~ y^k / Gamma(k + 1).
    const double h = 2.0 / (9.0 * df);
    const double wh = 1.0 - h + normal_quantile_approx(p) * std::sqrt(h);
    double q = df * wh * wh * wh;
    if (!(q > 0.0)) {
        q = 2.0 * std::exp((std::log(p) + log_gamma(k + 1.0)) / k);
    }
    if (!std::isfinite(q) || q <= 0.0) {
        q = df;
    }

    double lo = 0.0;
    double hi = std::max(q, 1.0);
    while (residual(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
    }

    for (int iter = 0; iter < 500; ++iter) {
        const double r = residual(q);
        if (r == 0.0) {
            return q;
        }
        if (r < 0.0) {
            lo = std::max(lo, q);
        } else {
            hi = std::min(hi, q);
        }
        if (hi - lo <= 4.0 * kEps * hi) {
            return 0.5 * (lo + hi);
        }
        const double density = chi_square_pdf(q, f);
        double next = (density > 0.0 && std::isfinite(density)) ? q - r / density : lo - 1.0;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        const double step = std::abs(next - q);
        q = next;
        if (step <= 2.0 * kEps * q && std::abs(r) <= 1e-12) {
            return q;
        }
    }
    return q;
}

double poisson_pmf(std::uint64_t x, double lambda) {
    if (!(lambda > 0.0) || std::isinf(lambda)) {
        throw std::domain_error("poisson_pmf: lambda must be positive and finite");
    }
    return poisson_kernel(static_cast<double>(x), lambda);
}

double poisson_cdf(std::uint64_t x, double lambda) {
    if (!(lambda > 0.0) || std::isinf(lambda)) {
        throw std::domain_error("poisson_cdf: lambda must be positive and finite");
    }
    double sum = 0.0;
    for (std::uint64_t k = 0; k <= x; ++k) {
        const double term = poisson_kernel(static_cast<double>(k), lambda);
        sum += term;
        // Past the mode the terms only shrink.
        if (static_cast<double>(k) > lambda && term < sum * 1e-18) {
            break;
        }
    }
    return std::min(sum, 1.0);
}

}  // namespace poisson_ci
