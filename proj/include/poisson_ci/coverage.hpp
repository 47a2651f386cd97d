#ifndef POISSON_CI_COVERAGE_HPP
#define POISSON_CI_COVERAGE_HPP

#include "poisson_ci/intervals.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace poisson_ci {

/// Evenly spaced lambda grid, lambda_i = i / denominator for
/// i = start_index..end_index. Points come from integer indices, never from
/// repeated addition.
struct GridSpec {
    std::uint32_t start_index = 1;
    std::uint32_t end_index = 750;
    std::uint32_t denominator = 10;

    /// lambda = 0.1, 0.2, ..., 75.0
    static GridSpec paper() { return {}; }

    /// Throws std::domain_error on an empty or ill-formed grid.
    void validate() const;
    std::size_t size() const noexcept;
    // k-th point, k in [0, size())
    double lambda_at(std::size_t k) const noexcept;
};

struct CoverageCurve {
    MethodKind method = MethodKind::usual;
    double alpha = 0.05;
    GridSpec grid;
    std::vector<double> values;

    double lambda_at(std::size_t k) const noexcept { return grid.lambda_at(k); }
};

struct SummaryStats {
    double mean = 0.0;
    double minimum = 0.0;
    double maximum = 0.0;
    double argmin_lambda = 0.0;
    double argmax_lambda = 0.0;
};

// Upper-tail mass allowed beyond the last summed count.
inline constexpr double kTailTolerance = 1e-12;

/// Hard cap on the summed counts: ceil(lambda + 12 sqrt(lambda) + 50).
std::uint64_t truncation_cap(double lambda);

/// Smallest x with 1 - poisson_cdf(x, lambda) <= kTailTolerance, capped by
/// truncation_cap(lambda).
std::uint64_t truncation_point(double lambda);

/// Interval endpoints for x = 0..max_x at one (method, alpha). Endpoints do
/// not depend on lambda, so one table serves a whole curve. Read-only after
/// construction.
class IntervalTable {
public:
    IntervalTable(MethodKind method, double alpha, std::uint64_t max_x);

    MethodKind method() const noexcept { return method_; }
    double alpha() const noexcept { return alpha_; }
    std::uint64_t max_x() const noexcept { return intervals_.size() - 1; }
    const EstimationInterval& operator[](std::uint64_t x) const { return intervals_.at(x); }

private:
    MethodKind method_;
    double alpha_;
    std::vector<EstimationInterval> intervals_;
};

/// sum_{x=0..x_max} pmf(x; lambda) 1[L(x) <= lambda <= U(x)] with x_max
/// chosen by truncation_point().
double coverage_from_table(const IntervalTable& table, double lambda);

/// Same sum with an explicit last count. Requires x_max <= table.max_x().
double coverage_from_table(const IntervalTable& table, double lambda, std::uint64_t x_max);

/// Exact coverage probability of the method's interval at a true mean lambda.
double coverage_at(MethodKind method, double alpha, double lambda);

/// Coverage on every grid point. threads == 0 picks the hardware concurrency;
/// the result does not depend on the thread count.
CoverageCurve coverage_curve(MethodKind method, double alpha, const GridSpec& grid, unsigned threads = 0);

/// Mean, min, max over the curve; argmin/argmax report the first grid point
/// that attains the extreme. Throws std::domain_error on an empty curve.
SummaryStats summarize(const CoverageCurve& curve);
SummaryStats summarize(std::span<const double> values, const GridSpec& grid);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;  // sqrt(p (1 - p) / reps)
};

/// Simulated coverage from `reps` Poisson(lambda) draws of a seeded
/// std::mt19937_64. Deterministic for a given seed.
MonteCarloEstimate mc_coverage(MethodKind method, double alpha, double lambda, std::uint64_t reps,
                               std::uint64_t seed);

/// Half-away-from-zero rounding to `digits` decimals.
double round_to(double value, int digits);

}  // namespace poisson_ci

#endif  // POISSON_CI_COVERAGE_HPP
