#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "purt/rird.hpp"
#include "purt/test_result.hpp"

namespace purt {

/// Names of all available tests, in report order.
[[nodiscard]] const std::vector<std::string>& all_test_names();

struct RunConfig {
    std::string input;
    std::string input_kind = "raw";  // "raw" (cpi/rate long format) or "panel" (date,unit,rird)

    std::vector<InflationMode> modes = {InflationMode::ex_ante, InflationMode::ex_post};
    std::vector<Benchmark> benchmarks = {Benchmark::euro_area, Benchmark::group_average};
    int horizon = 12;
    bool leave_one_out = false;
    std::string benchmark_unit = "EA";
    std::optional<MonthIndex> window_first;
    std::optional<MonthIndex> window_last;

    std::vector<std::string> tests;  // empty = all

    int max_lag = 5;
    std::string lag_criterion = "aic";  // "aic" or "fixed"
    int fixed_lag = 0;
    double cd_threshold = 0.10;
    int mp_factors = 1;  // 0 = eigenvalue-ratio selection

    std::uint64_t seed = 42;
    std::uint64_t reps = 20000;
    unsigned threads = 0;  // 0 = hardware concurrency

    std::string cache_dir = "table-cache";
    std::string out_dir = "out";
    std::string format = "csv";  // "csv", "markdown", or "both"
};

/// Parses a JSON config file. Unknown keys, unknown test names, and invalid
/// values are ConfigErrors; nothing is computed before validation passes.
[[nodiscard]] RunConfig load_config(const std::string& path);
void validate(const RunConfig& config);

/// One rendered line of the report. Tests that failed carry the error text
/// and no numbers.
struct ReportRow {
    std::string test;
    std::optional<double> statistic;
    std::optional<double> p_value;
    std::optional<CriticalValues> critical_values;
    std::optional<Tail> tail;
    std::optional<std::array<bool, 3>> reject;  // at 1%, 5%, 10%
    std::string note;   // e.g. Simes accept flags, branch taken
    std::string error;  // non-empty if the test could not run
};

/// Results for one (inflation mode, benchmark) combination.
struct ReportSection {
    std::string label;  // e.g. "ex_ante/euro_area" or "panel-input"
    std::string mode;
    std::string benchmark;
    Panel panel;  // the tested differential panel, emitted alongside the report
    std::vector<SummaryRow> summary;
    std::vector<ReportRow> rows;
    std::string window;  // "YYYY-MM..YYYY-MM"
};

struct Report {
    std::vector<std::pair<std::string, std::string>> metadata;  // effective parameters, echoed
    std::vector<ReportSection> sections;
};

/// Runs the configured battery. Per-test failures are captured in rows, not
/// thrown; configuration and input errors are thrown.
[[nodiscard]] Report run(const RunConfig& config);

/// Renderings are content-equivalent: same numbers, same decisions.
[[nodiscard]] std::string render_csv(const Report& report);
[[nodiscard]] std::string render_markdown(const Report& report);

/// Writes report.csv / report.md (per format) plus one summary and one panel
/// CSV per section into out_dir. Returns the list of files written.
std::vector<std::string> write_report(const Report& report, const RunConfig& config);

}  // namespace purt
