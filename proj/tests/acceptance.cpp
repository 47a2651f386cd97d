// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "poisson_ci/coverage.hpp"
#include "poisson_ci/intervals.hpp"
#include "poisson_ci/special_fn.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace poisson_ci;

namespace {

struct TableRow {
    MethodKind method;
    double mean;
    double minimum;
    double maximum;
};

// Published mean / minimum / maximum coverage, lambda = 0.1..75.0 step 0.1.
constexpr std::array<TableRow, 6> kTable95 = {{
    {MethodKind::usual, 0.9611, 0.9504, 0.9964},
    {MethodKind::structural_jeffreys_scale, 0.9473, 0.8701, 0.9964},
    {MethodKind::bayes_uniform, 0.9497, 0.8187, 0.9743},
    {MethodKind::jeffreys_poisson, 0.9499, 0.9048, 0.9865},
    {MethodKind::adjusted_raise_f1, 0.9561, 0.9048, 0.9865},
    {MethodKind::adjusted_drop_f2, 0.9549, 0.9086, 0.9964},
}};

constexpr std::array<TableRow, 6> kTable99 = {{
    {MethodKind::usual, 0.9926, 0.9902, 0.9992},
    {MethodKind::structural_jeffreys_scale, 0.9891, 0.9653, 0.9992},
    {MethodKind::bayes_uniform, 0.9898, 0.9048, 0.9947},
    {MethodKind::jeffreys_poisson, 0.9900, 0.9736, 0.9982},
    {MethodKind::adjusted_raise_f1, 0.9915, 0.9825, 0.9982},
    {MethodKind::adjusted_drop_f2, 0.9912, 0.9788, 0.9992},
}};

constexpr double kCellTolerance = 0.0005;
constexpr double kTableSeconds = 30.0;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] AC%d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    if (!ok) {
        ++failures;
    }
}

std::vector<SummaryStats> summaries(double alpha) {
    std::vector<SummaryStats> out;
    for (MethodKind method : kAllMethods) {
        out.push_back(summarize(coverage_curve(method, alpha, GridSpec::paper())));
    }
    return out;
}

void table_criterion(int id, double alpha, const std::array<TableRow, 6>& table) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<SummaryStats> stats = summaries(alpha);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    bool ok = seconds < kTableSeconds;
    int matched = 0;
    std::ostringstream detail;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double got[3] = {round_to(stats[i].mean, 4), round_to(stats[i].minimum, 4), round_to(stats[i].maximum, 4)};
        const double want[3] = {table[i].mean, table[i].minimum, table[i].maximum};
        for (int c = 0; c < 3; ++c) {
            if (std::abs(got[c] - want[c]) <= kCellTolerance + 1e-12) {
                ++matched;
            } else {
                ok = false;
                detail << ' ' << method_name(table[i].method) << '[' << c << "]=" << got[c] << " vs " << want[c];
            }
        }
        std::printf("    %-10s mean %.4f  min %.4f (lambda %.1f)  max %.4f (lambda %.1f)\n",
                    std::string(method_name(table[i].method)).c_str(), got[0], got[1], stats[i].argmin_lambda, got[2],
                    stats[i].argmax_lambda);
    }
    std::ostringstream summary;
    summary << matched << "/18 cells within " << kCellTolerance << ", " << seconds << " s" << detail.str();
    report(id, alpha == 0.05 ? "Table 95% reproduction" : "Table 99% reproduction", ok, summary.str());
}

void conservatism_criterion() {
    bool ok = true;
    std::ostringstream detail;
    for (double alpha : {0.05, 0.01}) {
        const SummaryStats stats = summarize(coverage_curve(MethodKind::usual, alpha, GridSpec::paper()));
        ok = ok && stats.minimum >= 1.0 - alpha;
        detail << "alpha=" << alpha << " min=" << stats.minimum << "; ";
    }
    report(3, "usual interval conservatism", ok, detail.str());
}

void special_function_criterion() {
    constexpr double probabilities[] = {0.005, 0.025, 0.05, 0.5, 0.95, 0.975, 0.995};
    double worst_round_trip = 0.0;
    for (std::uint32_t f = 1; f <= 200; ++f) {
        for (double p : probabilities) {
            const double q = chi_square_quantile(p, DegreesOfFreedom(f));
            worst_round_trip = std::max(worst_round_trip, std::abs(chi_square_cdf(q, DegreesOfFreedom(f)) - p));
        }
    }
    double worst_duality = 0.0;
    for (double lambda : {0.1, 1.0, 10.0, 75.0}) {
        for (std::uint64_t x = 0; x <= 500; ++x) {
            const double dual = 1.0 - regularized_lower_gamma(static_cast<double>(x + 1), lambda);
            worst_duality = std::max(worst_duality, std::abs(poisson_cdf(x, lambda) - dual));
        }
    }
    double worst_closed_form = 0.0;
    for (double p : probabilities) {
        worst_closed_form =
            std::max(worst_closed_form, std::abs(chi_square_quantile(p, DegreesOfFreedom(2)) + 2.0 * std::log1p(-p)));
    }
    const bool ok = worst_round_trip <= 1e-10 && worst_duality <= 1e-10 && worst_closed_form <= 1e-12;
    std::ostringstream detail;
    detail << "round-trip " << worst_round_trip << " (<=1e-10), duality " << worst_duality
           << " (<=1e-10), chi2_2 closed form " << worst_closed_form << " (<=1e-12)";
    report(4, "special-function suite", ok, detail.str());
}

void monte_carlo_criterion() {
    // Triples drawn from a fixed generator so the run is reproducible.
    std::mt19937_64 picker(0x5EED);
    std::uniform_int_distribution<std::size_t> pick_method(0, kAllMethods.size() - 1);
    std::uniform_int_distribution<int> pick_alpha(0, 1);
    std::uniform_int_distribution<std::uint32_t> pick_index(1, 750);

    bool ok = true;
    std::ostringstream detail;
    for (int i = 0; i < 5; ++i) {
        const MethodKind method = kAllMethods[pick_method(picker)];
        const double alpha = pick_alpha(picker) == 0 ? 0.05 : 0.01;
        const double lambda = GridSpec::paper().lambda_at(pick_index(picker) - 1);
        const std::uint64_t seed = picker();
        const MonteCarloEstimate mc = mc_coverage(method, alpha, lambda, 1'000'000, seed);
        const double exact = coverage_at(method, alpha, lambda);
        const double z = mc.std_error > 0.0 ? std::abs(mc.estimate - exact) / mc.std_error : 0.0;
        const bool hit = std::abs(mc.estimate - exact) <= 3.0 * mc.std_error;
        ok = ok && hit;
        std::printf("    %-10s alpha %.2f lambda %5.1f  exact %.6f  mc %.6f  se %.2e  |z| %.2f\n",
                    std::string(method_name(method)).c_str(), alpha, lambda, exact, mc.estimate, mc.std_error, z);
        if (!hit) {
            detail << method_name(method) << "@" << lambda << " ";
        }
    }
    report(5, "Monte Carlo cross-check", ok, ok ? "5/5 triples within 3 standard errors" : "outside: " + detail.str());
}

void structural_criterion() {
    bool scaling = true;
    bool nesting = true;
    for (MethodKind method : kAllMethods) {
        for (double alpha : {0.05, 0.01}) {
            for (std::uint64_t x = 0; x <= 100; ++x) {
                const EstimationInterval usual = lambda_interval(MethodKind::usual, x, alpha);
                const EstimationInterval lam = lambda_interval(method, x, alpha);
                nesting = nesting && lam.lower >= usual.lower && lam.upper <= usual.upper && lam.lower < lam.upper;
                for (double t : {0.5, 1.0, 2.0, 10.0}) {
                    const EstimationInterval rate = rate_interval(method, x, t, alpha);
                    scaling = scaling && rate.lower == lam.lower / t && rate.upper == lam.upper / t;
                }
            }
        }
    }
    const std::vector<SummaryStats> stats = summaries(0.05);
    auto mean = [&](MethodKind m) {
        for (std::size_t i = 0; i < kAllMethods.size(); ++i) {
            if (kAllMethods[i] == m) {
                return stats[i].mean;
            }
        }
        return 0.0;
    };
    const bool ordering = mean(MethodKind::usual) > mean(MethodKind::adjusted_raise_f1) &&
                          mean(MethodKind::adjusted_raise_f1) > mean(MethodKind::adjusted_drop_f2) &&
                          mean(MethodKind::adjusted_drop_f2) > mean(MethodKind::jeffreys_poisson) &&
                          mean(MethodKind::jeffreys_poisson) > mean(MethodKind::bayes_uniform) &&
                          mean(MethodKind::bayes_uniform) > mean(MethodKind::structural_jeffreys_scale);
    std::ostringstream detail;
    detail << "scaling " << (scaling ? "exact" : "BROKEN") << ", nesting " << (nesting ? "holds" : "BROKEN")
           << ", 95% mean ordering " << (ordering ? "holds" : "BROKEN");
    report(6, "structural properties", scaling && nesting && ordering, detail.str());
}

}  // namespace

int main() {
    table_criterion(1, 0.05, kTable95);
    table_criterion(2, 0.01, kTable99);
    conservatism_criterion();
    special_function_criterion();
    monte_carlo_criterion();
    structural_criterion();
    std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
