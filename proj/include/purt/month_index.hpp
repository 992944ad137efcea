#pragma once

#include <compare>
#include <string>

namespace purt {

/// Calendar month. There is intentionally no day component: the data this
/// toolkit consumes is monthly, and "2000-01-15" in an input file is a
/// schema violation, not something to truncate.
struct MonthIndex {
    int year = 0;
    int month = 1;  // 1..12

    /// Parses strict "YYYY-MM". Throws SchemaError on anything else,
    /// including date strings that carry a day component.
    [[nodiscard]] static MonthIndex parse(const std::string& text);

    /// Formats as "YYYY-MM".
    [[nodiscard]] std::string str() const;

    /// Months since year 0. Consecutive months differ by exactly 1.
    [[nodiscard]] constexpr int serial() const noexcept { return year * 12 + (month - 1); }

    [[nodiscard]] static constexpr MonthIndex from_serial(int s) noexcept {
        // C++ integer division truncates toward zero; force floor for
        // negative serials so round-tripping holds everywhere.
        int y = s / 12;
        int m = s % 12;
        if (m < 0) {
            y -= 1;
            m += 12;
        }
        return MonthIndex{y, m + 1};
    }

    [[nodiscard]] constexpr MonthIndex plus(int months) const noexcept {
        return from_serial(serial() + months);
    }

    constexpr auto operator<=>(const MonthIndex&) const noexcept = default;
};

}  // namespace purt
