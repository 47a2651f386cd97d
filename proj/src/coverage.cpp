#include "poisson_ci/coverage.hpp"

#include "poisson_ci/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace poisson_ci {

namespace {

void check_lambda(double lambda) {
    if (!(lambda > 0.0) || std::isinf(lambda)) {
        throw std::domain_error("lambda must be positive and finite");
    }
}

}  // namespace

void GridSpec::validate() const {
    if (start_index == 0 || denominator == 0) {
        throw std::domain_error("grid indices and denominator must be positive");
    }
    if (start_index > end_index) {
        throw std::domain_error("grid is empty: start index exceeds end index");
    }
}

std::size_t GridSpec::size() const noexcept {
    return end_index >= start_index ? static_cast<std::size_t>(end_index - start_index) + 1 : 0;
}

double GridSpec::lambda_at(std::size_t k) const noexcept {
    return static_cast<double>(start_index + k) / static_cast<double>(denominator);
}

std::uint64_t truncation_cap(double lambda) {
    check_lambda(lambda);
    return static_cast<std::uint64_t>(std::ceil(lambda + 12.0 * std::sqrt(lambda) + 50.0));
}

std::uint64_t truncation_point(double lambda) {
    const std::uint64_t cap = truncation_cap(lambda);
    double cumulative = 0.0;
    for (std::uint64_t x = 0; x < cap; ++x) {
        cumulative += poisson_pmf(x, lambda);
        if (1.0 - cumulative <= kTailTolerance) {
            return x;
        }
    }
    return cap;
}

IntervalTable::IntervalTable(MethodKind method, double alpha, std::uint64_t max_x)
    : method_(method), alpha_(alpha) {
    intervals_.reserve(max_x + 1);
    for (std::uint64_t x = 0; x <= max_x; ++x) {
        intervals_.push_back(lambda_interval(method, x, alpha));
    }
}

double coverage_from_table(const IntervalTable& table, double lambda, std::uint64_t x_max) {
    check_lambda(lambda);
    if (x_max > table.max_x()) {
        throw std::out_of_range("interval table does not reach the requested count");
    }
    double coverage = 0.0;
    for (std::uint64_t x = 0; x <= x_max; ++x) {
        if (table[x].contains(lambda)) {
            coverage += poisson_pmf(x, lambda);
        }
    }
    return std::clamp(coverage, 0.0, 1.0);
}

double coverage_from_table(const IntervalTable& table, double lambda) {
    check_lambda(lambda);
    const std::uint64_t cap = truncation_cap(lambda);
    if (cap > table.max_x()) {
        throw std::out_of_range("interval table too short for this lambda");
    }
    double cumulative = 0.0;
    double coverage = 0.0;
    for (std::uint64_t x = 0; x <= cap; ++x) {
        const double mass = poisson_pmf(x, lambda);
        cumulative += mass;
        if (table[x].contains(lambda)) {
            coverage += mass;
        }
        if (1.0 - cumulative <= kTailTolerance) {
            break;
        }
    }
    return std::clamp(coverage, 0.0, 1.0);
}

double coverage_at(MethodKind method, double alpha, double lambda) {
    const IntervalTable table(method, alpha, truncation_cap(lambda));
    return coverage_from_table(table, lambda);
}

CoverageCurve coverage_curve(MethodKind method, double alpha, const GridSpec& grid, unsigned threads) {
    grid.validate();
    const std::size_t n = grid.size();
    const IntervalTable table(method, alpha, truncation_cap(grid.lambda_at(n - 1)));

    CoverageCurve curve{method, alpha, grid, std::vector<double>(n, 0.0)};
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

    auto fill = [&](std::size_t first, std::size_t last) {
        for (std::size_t k = first; k < last; ++k) {
            curve.values[k] = coverage_from_table(table, grid.lambda_at(k));
        }
    };
    if (threads <= 1) {
        fill(0, n);
        return curve;
    }
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        const std::size_t chunk = (n + threads - 1) / threads;
        for (std::size_t first = 0; first < n; first += chunk) {
            workers.emplace_back(fill, first, std::min(n, first + chunk));
        }
    }
    return curve;
}

SummaryStats summarize(std::span<const double> values, const GridSpec& grid) {
    if (values.empty()) {
        throw std::domain_error("cannot summarize an empty coverage curve");
    }
    SummaryStats stats;
    double sum = 0.0;
    std::size_t argmin = 0;
    std::size_t argmax = 0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        sum += values[k];
        if (values[k] < values[argmin]) {
            argmin = k;
        }
        if (values[k] > values[argmax]) {
            argmax = k;
        }
    }
    stats.mean = sum / static_cast<double>(values.size());
    stats.minimum = values[argmin];
    stats.maximum = values[argmax];
    stats.argmin_lambda = grid.lambda_at(argmin);
    stats.argmax_lambda = grid.lambda_at(argmax);
    // Summation rounding can push a constant curve's mean a hair outside.
    stats.mean = std::clamp(stats.mean, stats.minimum, stats.maximum);
    return stats;
}

SummaryStats summarize(const CoverageCurve& curve) { return summarize(curve.values, curve.grid); }

MonteCarloEstimate mc_coverage(MethodKind method, double alpha, double lambda, std::uint64_t reps,
                               std::uint64_t seed) {
    check_lambda(lambda);
    if (reps == 0) {
        throw std::domain_error("mc_coverage needs at least one replication");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("alpha must lie in (0, 1)");
    }
    std::mt19937_64 engine(seed);
    std::poisson_distribution<std::uint64_t> draw(lambda);

    // Per-count membership, filled lazily: -1 unknown, 0 miss, 1 hit.
    std::vector<signed char> covers;
    std::uint64_t hits = 0;
    for (std::uint64_t r = 0; r < reps; ++r) {
        const std::uint64_t x = draw(engine);
        if (x >= covers.size()) {
            covers.resize(x + 1, -1);
        }
        if (covers[x] < 0) {
            covers[x] = lambda_interval(method, x, alpha).contains(lambda) ? 1 : 0;
        }
        hits += static_cast<std::uint64_t>(covers[x]);
    }
    const double n = static_cast<double>(reps);
    const double p = static_cast<double>(hits) / n;
    return {p, std::sqrt(p * (1.0 - p) / n)};
}

double round_to(double value, int digits) {
    const double scale = std::pow(10.0, digits);
    return std::round(value * scale) / scale;
}

}  // namespace poisson_ci
