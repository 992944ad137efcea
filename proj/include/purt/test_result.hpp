#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace purt {

enum class Tail { left, right };

[[nodiscard]] const char* to_string(Tail t) noexcept;

/// Critical values ordered 1%, 5%, 10%.
struct CriticalValues {
    double pct1 = 0.0;
    double pct5 = 0.0;
    double pct10 = 0.0;

    [[nodiscard]] double at(std::size_t level) const noexcept {
        return level == 0 ? pct1 : level == 1 ? pct5 : pct10;
    }
};

/// Rejection decisions implied by (statistic, critical values, tail).
/// Left tail rejects below, right tail above; rejection at a tighter level
/// implies rejection at the looser ones by the ordering of the values.
[[nodiscard]] std::array<bool, 3> decide(double statistic, const CriticalValues& cv, Tail tail) noexcept;

struct UnitDiagnostic {
    std::string unit;
    double t_stat = 0.0;
    int lag = 0;
    std::optional<double> p_value;
};

struct TestResult {
    std::string name;
    double statistic = 0.0;
    std::optional<double> p_value;
    std::optional<CriticalValues> critical_values;
    Tail tail = Tail::left;
    std::array<bool, 3> reject{false, false, false};  // at 1%, 5%, 10%
    std::vector<UnitDiagnostic> per_unit;
    std::map<std::string, double> diagnostics;
};

}  // namespace purt
