#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "purt/month_index.hpp"

namespace purt {

enum class Variable { cpi, rate };

[[nodiscard]] const char* to_string(Variable v) noexcept;
[[nodiscard]] Variable variable_from_string(const std::string& s);

struct Observation {
    MonthIndex t;
    double value = 0.0;
};

/// One unit's time series for one variable. Timestamps strictly increasing;
/// gaps are simply absent entries, never sentinel values.
struct RawSeries {
    std::string unit;
    Variable variable = Variable::cpi;
    std::vector<Observation> obs;
};

/// Inclusive month window. Unset endpoints mean unbounded on that side.
struct Window {
    std::optional<MonthIndex> first;
    std::optional<MonthIndex> last;

    [[nodiscard]] bool contains(const MonthIndex& t) const noexcept {
        if (first && t < *first) return false;
        if (last && *last < t) return false;
        return true;
    }
};

/// Rectangular unit-by-month grid. Absent cells are std::nullopt; the cell
/// type makes missingness explicit instead of hiding it in a magic number.
class Panel {
public:
    Panel() = default;
    Panel(std::vector<std::string> units, std::vector<MonthIndex> times);

    [[nodiscard]] std::size_t n_units() const noexcept { return units_.size(); }
    [[nodiscard]] std::size_t n_times() const noexcept { return times_.size(); }

    [[nodiscard]] const std::vector<std::string>& units() const noexcept { return units_; }
    [[nodiscard]] const std::vector<MonthIndex>& times() const noexcept { return times_; }

    [[nodiscard]] const std::optional<double>& at(std::size_t unit, std::size_t time) const;
    void set(std::size_t unit, std::size_t time, double value);
    void clear(std::size_t unit, std::size_t time);

    /// Index of a unit id, or throws DataError.
    [[nodiscard]] std::size_t unit_index(const std::string& unit) const;
    [[nodiscard]] bool has_unit(const std::string& unit) const noexcept;

    [[nodiscard]] bool balanced() const noexcept;

    /// One unit's values in time order. Requires the row to be complete.
    [[nodiscard]] std::vector<double> row(std::size_t unit) const;

    /// Panel with the given unit removed.
    [[nodiscard]] Panel without_unit(const std::string& unit) const;

private:
    std::vector<std::string> units_;
    std::vector<MonthIndex> times_;
    std::vector<std::optional<double>> cells_;  // row-major, n_units x n_times
};

/// Aligns per-unit series of one variable onto a shared time axis: the union
/// of the series' timestamps intersected with the window. Unit order follows
/// first appearance in `series`. A unit with no observation inside the window
/// is an error, not an empty row.
[[nodiscard]] Panel align_panel(const std::vector<RawSeries>& series, Variable variable,
                                const Window& window = {});

/// Returns its argument if every cell is present; otherwise throws
/// UnbalancedError naming the first missing (unit, month).
const Panel& require_balanced(const Panel& panel);

/// Dense N x T matrix (rows = units). Throws UnbalancedError on gaps.
[[nodiscard]] Eigen::MatrixXd to_matrix(const Panel& panel);

}  // namespace purt
