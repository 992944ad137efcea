#include "purt/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "purt/errors.hpp"

namespace purt {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

std::string strip_bom(std::string s) {
    if (s.size() >= 3 && s[0] == '\xEF' && s[1] == '\xBB' && s[2] == '\xBF') return s.substr(3);
    return s;
}

double parse_value(const std::string& field, std::size_t row) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0') {
        throw SchemaError("row " + std::to_string(row) + ": value '" + field +
                          "' is not a decimal number");
    }
    return v;
}

bool is_missing_marker(const std::string& field) {
    return field.empty() || field == "NA";
}

std::size_t column_of(const std::vector<std::string>& header, const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw SchemaError("header is missing column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

std::vector<RawSeries> load_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw SchemaError("'" + path + "' is empty");
    const auto header = split_line(strip_cr(strip_bom(line)));
    if (header.size() != 4) {
        throw SchemaError("header has " + std::to_string(header.size()) +
                          " columns; expected exactly 4");
    }
    const std::size_t col_date = column_of(header, schema.date);
    const std::size_t col_unit = column_of(header, schema.unit);
    const std::size_t col_var = column_of(header, schema.variable);
    const std::size_t col_value = column_of(header, schema.value);

    std::vector<RawSeries> series;
    // (unit, variable) -> index into series; (unit, variable, month) -> row number
    std::map<std::pair<std::string, int>, std::size_t> series_of;
    std::map<std::tuple<std::string, int, int>, std::size_t> row_of;

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != 4) {
            throw SchemaError("row " + std::to_string(row) + " has " +
                              std::to_string(fields.size()) + " fields; expected 4");
        }
        MonthIndex t;
        try {
            t = MonthIndex::parse(fields[col_date]);
        } catch (const SchemaError& e) {
            throw SchemaError("row " + std::to_string(row) + ": " + e.what());
        }
        const std::string& unit = fields[col_unit];
        if (unit.empty()) throw SchemaError("row " + std::to_string(row) + ": empty unit id");
        Variable var;
        try {
            var = variable_from_string(fields[col_var]);
        } catch (const SchemaError& e) {
            throw SchemaError("row " + std::to_string(row) + ": " + e.what());
        }

        const auto dup_key = std::make_tuple(unit, static_cast<int>(var), t.serial());
        auto [dup_it, fresh] = row_of.emplace(dup_key, row);
        if (!fresh) {
            throw DataError("duplicate observation for (" + unit + ", " +
                            to_string(var) + ", " + t.str() + ") at rows " +
                            std::to_string(dup_it->second) + " and " + std::to_string(row));
        }

        if (is_missing_marker(fields[col_value])) continue;  // explicitly missing
        const double value = parse_value(fields[col_value], row);

        const auto key = std::make_pair(unit, static_cast<int>(var));
        auto it = series_of.find(key);
        if (it == series_of.end()) {
            it = series_of.emplace(key, series.size()).first;
            series.push_back(RawSeries{unit, var, {}});
        }
        series[it->second].obs.push_back(Observation{t, value});
    }

    for (auto& s : series) {
        std::sort(s.obs.begin(), s.obs.end(),
                  [](const Observation& a, const Observation& b) { return a.t < b.t; });
    }
    return series;
}

void save_panel_csv(const Panel& panel, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "date,unit,rird\n";
    char buf[40];
    for (std::size_t i = 0; i < panel.n_units(); ++i) {
        for (std::size_t t = 0; t < panel.n_times(); ++t) {
            const auto& cell = panel.at(i, t);
            if (!cell) continue;
            std::snprintf(buf, sizeof buf, "%.17g", *cell);
            out << panel.times()[t].str() << ',' << panel.units()[i] << ',' << buf << '\n';
        }
    }
    if (!out) throw DataError("write to '" + path + "' failed");
}

Panel load_panel_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("'" + path + "' is empty");
    if (strip_cr(strip_bom(line)) != "date,unit,rird") {
        throw SchemaError("'" + path + "' must start with header date,unit,rird");
    }

    struct Cell {
        MonthIndex t;
        std::string unit;
        double value;
    };
    std::vector<Cell> cells;
    std::vector<std::string> units;
    std::set<MonthIndex> axis;
    std::map<std::tuple<std::string, int>, std::size_t> row_of;

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != 3) {
            throw SchemaError("row " + std::to_string(row) + " has " +
                              std::to_string(fields.size()) + " fields; expected 3");
        }
        MonthIndex t;
        try {
            t = MonthIndex::parse(fields[0]);
        } catch (const SchemaError& e) {
            throw SchemaError("row " + std::to_string(row) + ": " + e.what());
        }
        const auto dup_key = std::make_tuple(fields[1], t.serial());
        auto [dup_it, fresh] = row_of.emplace(dup_key, row);
        if (!fresh) {
            throw DataError("duplicate cell for (" + fields[1] + ", " + t.str() +
                            ") at rows " + std::to_string(dup_it->second) + " and " +
                            std::to_string(row));
        }
        if (is_missing_marker(fields[2])) continue;
        cells.push_back(Cell{t, fields[1], parse_value(fields[2], row)});
        if (std::find(units.begin(), units.end(), fields[1]) == units.end()) {
            units.push_back(fields[1]);
        }
        axis.insert(t);
    }
    if (cells.empty()) throw DataError("'" + path + "' contains no observations");

    Panel panel(units, std::vector<MonthIndex>(axis.begin(), axis.end()));
    for (const auto& c : cells) {
        const auto pos = std::lower_bound(panel.times().begin(), panel.times().end(), c.t);
        panel.set(panel.unit_index(c.unit),
                  static_cast<std::size_t>(pos - panel.times().begin()), c.value);
    }
    return panel;
}

}  // namespace purt
