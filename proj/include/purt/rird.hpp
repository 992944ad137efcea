#pragma once

#include <string>
#include <vector>

#include "purt/panel.hpp"

namespace purt {

/// How the one-month-ahead inflation expectation is proxied.
enum class InflationMode {
    ex_ante,  // expectation = current observed inflation
    ex_post   // perfect foresight: expectation = realized next-month inflation
};

/// What each unit's real rate is differenced against.
enum class Benchmark {
    euro_area,     // a designated benchmark unit's real rate
    group_average  // cross-section mean of the member units' real rates
};

[[nodiscard]] const char* to_string(InflationMode m) noexcept;
[[nodiscard]] const char* to_string(Benchmark b) noexcept;
[[nodiscard]] InflationMode inflation_mode_from_string(const std::string& s);
[[nodiscard]] Benchmark benchmark_from_string(const std::string& s);

struct RirdSpec {
    InflationMode mode = InflationMode::ex_ante;
    Benchmark benchmark = Benchmark::euro_area;
    /// Inflation horizon in months: 12 = year-on-year, 1 = month-on-month.
    int horizon = 12;
    /// group_average only: exclude the unit's own rate from the mean.
    bool leave_one_out = false;
    /// Reserved unit id of the benchmark economy.
    std::string benchmark_unit = "EA";
};

/// Annualized log-difference inflation in percent:
///   pi_t = 100 * (ln cpi_t - ln cpi_{t-h}) * (12 / h).
/// Output starts h months into the input; months whose lagged CPI is absent
/// are absent in the output. CPI values must be strictly positive.
[[nodiscard]] RawSeries compute_inflation(const RawSeries& cpi, int horizon);

/// Real interest rate under the chosen expectation proxy:
///   ex_ante:  r_t = i_t - pi_t
///   ex_post:  r_t = i_t - pi_{t+1}
/// Alignment is by timestamp; months lacking the needed inflation observation
/// are dropped, so ex_post loses the final observation and ex_ante loses the
/// initial inflation-formation months.
[[nodiscard]] RawSeries compute_real_rate(const RawSeries& rate, const RawSeries& inflation,
                                          InflationMode mode);

struct RirdPanel {
    Panel panel;
    RirdSpec spec;
};

/// Real-interest-differential panel. The input must be balanced (no
/// imputation happens here). Under euro_area the benchmark unit must be
/// present; it is subtracted from every other unit and excluded from the
/// output. Under group_average the benchmark unit (if present) is dropped and
/// each member is differenced against the member mean, which includes the
/// unit itself unless leave_one_out is set.
[[nodiscard]] RirdPanel compute_rird(const Panel& real_rates, const RirdSpec& spec);

struct SummaryRow {
    std::string unit;  // unit id, or "panel" for the pooled row
    std::size_t n = 0;
    double min = 0, max = 0, mean = 0, sd = 0;  // sd uses the n-1 denominator
};

/// Per-unit descriptive statistics over present cells, plus a pooled row
/// labeled "panel" computed over all present cells.
[[nodiscard]] std::vector<SummaryRow> summary_stats(const Panel& panel);

}  // namespace purt
