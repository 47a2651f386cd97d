#include "poisson_ci/report.hpp"

#include "poisson_ci/special_fn.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace poisson_ci {

namespace {

std::string format_general(double value, int significant) {
    std::ostringstream os;
    os << std::setprecision(significant) << value;
    return os.str();
}

std::string format_fixed(double value, int decimals) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(decimals) << value;
    return os.str();
}

// Decimal places that print every grid point exactly (1 for the tenths grid).
int lambda_decimals(const GridSpec& grid) {
    std::uint64_t power = 1;
    for (int digits = 0; digits <= 9; ++digits) {
        if (power % grid.denominator == 0) {
            return digits;
        }
        power *= 10;
    }
    return 10;
}

std::string spaced_rule(std::string_view rule) {
    std::string out;
    for (char c : rule) {
        if (c == '+') {
            out += " + ";
        } else {
            out += c;
        }
    }
    return out;
}

std::string xml_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::vector<CoverageCurve> compute_curves(const ReportConfig& config) {
    std::vector<CoverageCurve> curves;
    for (MethodKind method : config.methods()) {
        curves.push_back(coverage_curve(method, config.alpha, config.grid, config.threads));
    }
    return curves;
}

std::string_view stroke_for(MethodKind method) {
    switch (method) {
        case MethodKind::usual: return "#1f77b4";
        case MethodKind::structural_jeffreys_scale: return "#d62728";
        case MethodKind::bayes_uniform: return "#2ca02c";
        case MethodKind::jeffreys_poisson: return "#9467bd";
        case MethodKind::adjusted_raise_f1: return "#ff7f0e";
        case MethodKind::adjusted_drop_f2: return "#8c564b";
    }
    return "#000000";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

double parse_number(const std::string& text) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed number in coverage CSV: '" + text + "'");
    }
    if (used != text.size()) {
        throw std::invalid_argument("malformed number in coverage CSV: '" + text + "'");
    }
    return value;
}

}  // namespace

void ReportConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw UsageError("--alpha must lie strictly between 0 and 1");
    }
    if (!(t > 0.0) || std::isinf(t)) {
        throw UsageError("--t must be positive");
    }
    const OutputFormat format_used = effective_format();
    switch (command) {
        case Command::interval:
            if (!x) {
                throw UsageError("interval requires --x");
            }
            if (format_used != OutputFormat::text) {
                throw UsageError("interval only supports --format text");
            }
            break;
        case Command::coverage:
            if (format_used != OutputFormat::csv) {
                throw UsageError("coverage only supports --format csv");
            }
            break;
        case Command::summary:
            if (format_used == OutputFormat::svg) {
                throw UsageError("summary supports --format text or csv");
            }
            break;
        case Command::plot:
            if (format_used != OutputFormat::svg) {
                throw UsageError("plot only supports --format svg");
            }
            break;
    }
}

OutputFormat ReportConfig::effective_format() const {
    if (format) {
        return *format;
    }
    switch (command) {
        case Command::coverage: return OutputFormat::csv;
        case Command::plot: return OutputFormat::svg;
        default: return OutputFormat::text;
    }
}

std::vector<MethodKind> ReportConfig::methods() const {
    if (method) {
        return {*method};
    }
    return {kAllMethods.begin(), kAllMethods.end()};
}

std::string level_label(double alpha) {
    const double percent = std::round((1.0 - alpha) * 100.0 * 1e6) / 1e6;
    return format_general(percent, 10) + "%";
}

std::string plot_title(std::optional<MethodKind> method, double alpha) {
    std::string title = "Coverage Probabilities for " + level_label(alpha) + " Intervals";
    if (method) {
        const auto rule = method_rule(*method);
        title += " for f₁ = " + spaced_rule(rule[0]) + " and f₂ = " + spaced_rule(rule[1]);
    }
    return title;
}

void run_interval(const ReportConfig& config, std::ostream& out) {
    config.validate();
    const std::uint64_t x = *config.x;
    const bool show_rate = config.t != 1.0;

    out << "x = " << x << ", " << level_label(config.alpha) << " intervals\n";
    out << std::left << std::setw(12) << "method" << std::right << std::setw(6) << "f1" << std::setw(6) << "f2"
        << "  " << std::left << std::setw(8) << "level" << std::setw(26) << "lambda interval";
    if (show_rate) {
        out << "rate interval (t = " << format_general(config.t, 6) << ")";
    }
    out << '\n';
    for (MethodKind method : config.methods()) {
        const DegreePair df = degrees_for(method, x);
        const EstimationInterval lam = lambda_interval(method, x, config.alpha);
        const std::string lam_text = "[" + format_general(lam.lower, 6) + ", " + format_general(lam.upper, 6) + "]";
        out << std::left << std::setw(12) << method_name(method) << std::right << std::setw(6) << df.f1
            << std::setw(6) << df.f2 << "  " << std::left << std::setw(8) << level_label(config.alpha)
            << std::setw(26) << lam_text;
        if (show_rate) {
            const EstimationInterval rate = rate_interval(method, x, config.t, config.alpha);
            out << "[" << format_general(rate.lower, 6) << ", " << format_general(rate.upper, 6) << "]";
        }
        out << '\n';
    }
    out << std::right;
}

void run_coverage(const ReportConfig& config, std::ostream& out) {
    config.validate();
    const std::vector<CoverageCurve> curves = compute_curves(config);
    out << "lambda";
    if (config.method) {
        out << ",coverage";
    } else {
        for (const auto& curve : curves) {
            out << ',' << method_name(curve.method);
        }
    }
    out << '\n';
    const int decimals = lambda_decimals(config.grid);
    for (std::size_t k = 0; k < config.grid.size(); ++k) {
        out << format_fixed(config.grid.lambda_at(k), decimals);
        for (const auto& curve : curves) {
            out << ',' << format_fixed(curve.values[k], 10);
        }
        out << '\n';
    }
}

void run_summary(const ReportConfig& config, std::ostream& out) {
    config.validate();
    const std::vector<CoverageCurve> curves = compute_curves(config);

    if (config.effective_format() == OutputFormat::csv) {
        out << "method,f1,f2,mean,minimum,maximum,argmin_lambda,argmax_lambda\n";
        const int decimals = lambda_decimals(config.grid);
        for (const auto& curve : curves) {
            const SummaryStats stats = summarize(curve);
            const auto rule = method_rule(curve.method);
            out << method_name(curve.method) << ',' << rule[0] << ',' << rule[1] << ','
                << format_fixed(round_to(stats.mean, 4), 4) << ',' << format_fixed(round_to(stats.minimum, 4), 4)
                << ',' << format_fixed(round_to(stats.maximum, 4), 4) << ','
                << format_fixed(stats.argmin_lambda, decimals) << ',' << format_fixed(stats.argmax_lambda, decimals)
                << '\n';
        }
        return;
    }

    constexpr int label_width = 60;
    out << "Coverage probabilities for " << level_label(config.alpha) << " Intervals\n";
    out << std::left << std::setw(label_width) << "Interval basis" << std::setw(6) << "f1" << std::setw(6) << "f2"
        << std::right << std::setw(8) << "Mean" << std::setw(9) << "Minimum" << std::setw(9) << "Maximum" << '\n';
    for (const auto& curve : curves) {
        const SummaryStats stats = summarize(curve);
        const auto rule = method_rule(curve.method);
        out << std::left << std::setw(label_width) << method_label(curve.method) << std::setw(6) << rule[0]
            << std::setw(6) << rule[1] << std::right << std::setw(8) << format_fixed(round_to(stats.mean, 4), 4)
            << std::setw(9) << format_fixed(round_to(stats.minimum, 4), 4) << std::setw(9)
            << format_fixed(round_to(stats.maximum, 4), 4) << '\n';
    }
}

void run_plot(const ReportConfig& config, std::ostream& out) {
    config.validate();
    const std::vector<CoverageCurve> curves = compute_curves(config);
    const GridSpec& grid = config.grid;

    constexpr double width = 720.0;
    constexpr double height = 440.0;
    constexpr double left = 70.0;
    constexpr double right = 690.0;
    constexpr double top = 50.0;
    constexpr double bottom = 385.0;

    double lowest = 1.0;
    for (const auto& curve : curves) {
        lowest = std::min(lowest, *std::min_element(curve.values.begin(), curve.values.end()));
    }
    const double y_min = lowest - 0.01;
    const double y_max = 1.0;
    double x_min = grid.lambda_at(0);
    double x_max = grid.lambda_at(grid.size() - 1);
    if (x_max == x_min) {
        const double pad = 0.5 / grid.denominator;
        x_min -= pad;
        x_max += pad;
    }
    auto px = [&](double lambda) { return left + (lambda - x_min) / (x_max - x_min) * (right - left); };
    auto py = [&](double value) {
        const double clipped = std::clamp(value, y_min, y_max);
        return bottom - (clipped - y_min) / (y_max - y_min) * (bottom - top);
    };
    auto coord = [](double v) { return format_fixed(v, 2); };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "  <title>" << xml_escape(plot_title(config.method, config.alpha)) << "</title>\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "  <text x=\"" << coord(width / 2) << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"15\">" << xml_escape(plot_title(config.method, config.alpha)) << "</text>\n";

    // Axes and ticks.
    out << "  <g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
        << "    <line x1=\"" << coord(left) << "\" y1=\"" << coord(bottom) << "\" x2=\"" << coord(right) << "\" y2=\""
        << coord(bottom) << "\"/>\n"
        << "    <line x1=\"" << coord(left) << "\" y1=\"" << coord(top) << "\" x2=\"" << coord(left) << "\" y2=\""
        << coord(bottom) << "\"/>\n"
        << "  </g>\n";
    out << "  <g font-family=\"sans-serif\" font-size=\"11\">\n";
    constexpr int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double lambda = x_min + (x_max - x_min) * i / ticks;
        const double value = y_min + (y_max - y_min) * i / ticks;
        out << "    <text x=\"" << coord(px(lambda)) << "\" y=\"" << coord(bottom + 16)
            << "\" text-anchor=\"middle\">" << format_general(lambda, 4) << "</text>\n";
        out << "    <text x=\"" << coord(left - 6) << "\" y=\"" << coord(py(value) + 4) << "\" text-anchor=\"end\">"
            << format_fixed(value, 3) << "</text>\n";
    }
    out << "    <text x=\"" << coord((left + right) / 2) << "\" y=\"" << coord(bottom + 36)
        << "\" text-anchor=\"middle\">λ</text>\n";
    out << "    <text x=\"18\" y=\"" << coord((top + bottom) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << coord((top + bottom) / 2) << ")\">coverage probability</text>\n";
    out << "  </g>\n";

    const double nominal = 1.0 - config.alpha;
    if (nominal >= y_min && nominal <= y_max) {
        out << "  <line class=\"nominal\" x1=\"" << coord(left) << "\" y1=\"" << coord(py(nominal)) << "\" x2=\""
            << coord(right) << "\" y2=\"" << coord(py(nominal))
            << "\" stroke=\"gray\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n";
    }

    for (const auto& curve : curves) {
        out << "  <polyline class=\"coverage\" data-method=\"" << method_name(curve.method)
            << "\" fill=\"none\" stroke=\"" << stroke_for(curve.method) << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t k = 0; k < curve.values.size(); ++k) {
            if (k != 0) {
                out << ' ';
            }
            out << coord(px(curve.lambda_at(k))) << ',' << coord(py(curve.values[k]));
        }
        out << "\"/>\n";
    }
    if (curves.size() > 1) {
        out << "  <g font-family=\"sans-serif\" font-size=\"11\">\n";
        double y = top + 14;
        for (const auto& curve : curves) {
            out << "    <text x=\"" << coord(right - 4) << "\" y=\"" << coord(y) << "\" text-anchor=\"end\" fill=\""
                << stroke_for(curve.method) << "\">" << method_name(curve.method) << "</text>\n";
            y += 14;
        }
        out << "  </g>\n";
    }
    out << "</svg>\n";
}

void run_report(const ReportConfig& config, std::ostream& out) {
    config.validate();
    auto dispatch = [&](std::ostream& sink) {
        switch (config.command) {
            case Command::interval: run_interval(config, sink); break;
            case Command::coverage: run_coverage(config, sink); break;
            case Command::summary: run_summary(config, sink); break;
            case Command::plot: run_plot(config, sink); break;
        }
    };
    if (!config.output_path) {
        dispatch(out);
        return;
    }
    // Render fully before touching the file so a failed computation leaves no partial output.
    std::ostringstream buffer;
    dispatch(buffer);
    std::ofstream file(*config.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw IoError("cannot open output file: " + config.output_path->string());
    }
    file << buffer.str();
    file.flush();
    if (!file) {
        throw IoError("failed writing output file: " + config.output_path->string());
    }
}

CoverageTable parse_coverage_csv(std::istream& in) {
    CoverageTable table;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("coverage CSV is empty");
    }
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 2 || header.front() != "lambda") {
        throw std::invalid_argument("coverage CSV header must start with 'lambda'");
    }
    table.columns.assign(header.begin() + 1, header.end());
    table.values.resize(table.columns.size());
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw std::invalid_argument("coverage CSV row has the wrong number of fields");
        }
        table.lambdas.push_back(parse_number(fields[0]));
        for (std::size_t c = 1; c < fields.size(); ++c) {
            table.values[c - 1].push_back(parse_number(fields[c]));
        }
    }
    return table;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Chi-square estimation intervals for a Poisson mean and their exact coverage", "poisson-ci"};
    app.require_subcommand(1);

    std::string method_text;
    double alpha = 0.05;
    std::uint64_t x = 0;
    double t = 1.0;
    GridSpec grid = GridSpec::paper();
    std::string output;
    std::string format_text;
    unsigned threads = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--method", method_text, "usual, structural, uniform, jeffreys, raise-f1, drop-f2 or all");
        sub->add_option("--alpha", alpha, "1 - confidence level (default 0.05)");
        sub->add_option("--grid-start", grid.start_index, "first grid index (lambda = index / denominator)");
        sub->add_option("--grid-end", grid.end_index, "last grid index");
        sub->add_option("--grid-denominator", grid.denominator, "grid denominator");
        sub->add_option("--output", output, "write to this file instead of stdout");
        sub->add_option("--format", format_text, "csv, svg or text");
        sub->add_option("--threads", threads, "worker threads for coverage curves (0 = all cores)");
    };

    CLI::App* interval = app.add_subcommand("interval", "estimation intervals for an observed count");
    add_common(interval);
    CLI::Option* x_option = interval->add_option("--x", x, "observed count");
    interval->add_option("--t", t, "exposure (time/distance/area/volume) for the rate interval");
    CLI::App* coverage = app.add_subcommand("coverage", "coverage curve as CSV");
    add_common(coverage);
    CLI::App* summary = app.add_subcommand("summary", "mean/min/max coverage table");
    add_common(summary);
    CLI::App* plot = app.add_subcommand("plot", "coverage curve as an SVG plot");
    add_common(plot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    ReportConfig config;
    try {
        if (interval->parsed()) {
            config.command = Command::interval;
        } else if (coverage->parsed()) {
            config.command = Command::coverage;
        } else if (summary->parsed()) {
            config.command = Command::summary;
        } else {
            config.command = Command::plot;
        }
        if (method_text.empty()) {
            if (config.command != Command::summary) {
                throw UsageError("--method is required (use 'all' for every method)");
            }
        } else if (method_text != "all") {
            const auto parsed = parse_method(method_text);
            if (!parsed) {
                throw UsageError("unknown method '" + method_text + "'");
            }
            config.method = *parsed;
        }
        config.alpha = alpha;
        if (x_option->count() > 0) {
            config.x = x;
        }
        config.t = t;
        config.grid = grid;
        config.threads = threads;
        if (!output.empty()) {
            config.output_path = output;
        }
        if (!format_text.empty()) {
            if (format_text == "csv") {
                config.format = OutputFormat::csv;
            } else if (format_text == "svg") {
                config.format = OutputFormat::svg;
            } else if (format_text == "text") {
                config.format = OutputFormat::text;
            } else {
                throw UsageError("unknown format '" + format_text + "'");
            }
        }
        run_report(config, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace poisson_ci
