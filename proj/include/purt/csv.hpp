#pragma once

#include <map>
#include <string>
#include <vector>

#include "purt/panel.hpp"

namespace purt {

/// Column-name mapping for the long-format input file. Defaults match the
/// canonical header `date,country,variable,value`.
struct CsvSchema {
    std::string date = "date";
    std::string unit = "country";
    std::string variable = "variable";
    std::string value = "value";
};

/// Loads a long-format CSV of monthly observations. Rules:
///  - header must contain the four schema columns (any order, extras rejected)
///  - dates are strict "YYYY-MM"
///  - variable is "cpi" or "rate"
///  - value is a decimal number with '.' separator; an empty cell or "NA"
///    marks an explicitly missing observation and is skipped
///  - duplicate (date, unit, variable) entries are an error naming both rows
/// Error messages carry 1-based row numbers including the header row.
[[nodiscard]] std::vector<RawSeries> load_csv(const std::string& path,
                                              const CsvSchema& schema = {});

/// Writes a panel as `date,unit,rird` rows (missing cells skipped), the
/// interchange layout also used for synthetic panels.
void save_panel_csv(const Panel& panel, const std::string& path);

/// Reads the `date,unit,rird` layout back into a Panel.
[[nodiscard]] Panel load_panel_csv(const std::string& path);

}  // namespace purt
