#ifndef POISSON_CI_REPORT_HPP
#define POISSON_CI_REPORT_HPP

#include "poisson_ci/coverage.hpp"
#include "poisson_ci/intervals.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace poisson_ci {

enum class Command { interval, coverage, summary, plot };
enum class OutputFormat { csv, svg, text };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

// Bad flag combination or out-of-range input on the command line.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ReportConfig {
    Command command = Command::summary;
    std::optional<MethodKind> method;  // empty means all six
    double alpha = 0.05;
    std::optional<std::uint64_t> x;
    double t = 1.0;
    GridSpec grid = GridSpec::paper();
    std::optional<std::filesystem::path> output_path;
    std::optional<OutputFormat> format;  // empty: the command's default
    unsigned threads = 0;

    /// Throws UsageError when the combination cannot be run.
    void validate() const;
    OutputFormat effective_format() const;
    std::vector<MethodKind> methods() const;
};

/// "95%" for alpha = 0.05, "97.5%" for alpha = 0.025.
std::string level_label(double alpha);

/// Plot/figure caption, e.g. "Coverage Probabilities for 95% Intervals for
/// f1 = 2x and f2 = 2x + 2". Without a method the rule clause is dropped.
std::string plot_title(std::optional<MethodKind> method, double alpha);

// Each writer validates the config first and throws UsageError on misuse.
void run_interval(const ReportConfig& config, std::ostream& out);
void run_coverage(const ReportConfig& config, std::ostream& out);
void run_summary(const ReportConfig& config, std::ostream& out);
void run_plot(const ReportConfig& config, std::ostream& out);

/// Dispatches on config.command, writing to config.output_path when set
/// (IoError if it cannot be written) and to `out` otherwise.
void run_report(const ReportConfig& config, std::ostream& out);

/// Coverage CSV as emitted by run_coverage: a lambda column plus one column
/// per method.
struct CoverageTable {
    std::vector<std::string> columns;  // method columns, without "lambda"
    std::vector<double> lambdas;
    std::vector<std::vector<double>> values;  // values[column][row]
};

CoverageTable parse_coverage_csv(std::istream& in);

/// Full command-line entry point. Returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace poisson_ci

#endif  // POISSON_CI_REPORT_HPP
