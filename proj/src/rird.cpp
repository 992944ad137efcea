#include "purt/rird.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "purt/errors.hpp"

namespace purt {

const char* to_string(InflationMode m) noexcept {
    return m == InflationMode::ex_ante ? "ex_ante" : "ex_post";
}

const char* to_string(Benchmark b) noexcept {
    return b == Benchmark::euro_area ? "euro_area" : "group_average";
}

InflationMode inflation_mode_from_string(const std::string& s) {
    if (s == "ex_ante") return InflationMode::ex_ante;
    if (s == "ex_post") return InflationMode::ex_post;
    throw ConfigError("unknown inflation mode '" + s + "'");
}

Benchmark benchmark_from_string(const std::string& s) {
    if (s == "euro_area") return Benchmark::euro_area;
    if (s == "group_average") return Benchmark::group_average;
    throw ConfigError("unknown benchmark '" + s + "'");
}

RawSeries compute_inflation(const RawSeries& cpi, int horizon) {
    if (horizon < 1) throw ConfigError("inflation horizon must be >= 1 month");
    if (cpi.variable != Variable::cpi) {
        throw DataError("compute_inflation expects a cpi series, got " +
                        std::string(to_string(cpi.variable)));
    }
    std::map<int, double> by_serial;
    for (const auto& o : cpi.obs) {
        if (o.value <= 0.0) {
            throw DataError("unit '" + cpi.unit + "': CPI at " + o.t.str() +
                            " is not strictly positive");
        }
        by_serial[o.t.serial()] = o.value;
    }

    RawSeries out;
    out.unit = cpi.unit;
    out.variable = Variable::rate;  // inflation is a rate-like percent series
    const double annualize = 12.0 / horizon;
    for (const auto& o : cpi.obs) {
        const auto lagged = by_serial.find(o.t.serial() - horizon);
        if (lagged == by_serial.end()) continue;
        const double pi = 100.0 * (std::log(o.value) - std::log(lagged->second)) * annualize;
        out.obs.push_back(Observation{o.t, pi});
    }
    return out;
}

RawSeries compute_real_rate(const RawSeries& rate, const RawSeries& inflation,
                            InflationMode mode) {
    if (rate.unit != inflation.unit) {
        throw DataError("rate series for '" + rate.unit + "' paired with inflation for '" +
                        inflation.unit + "'");
    }
    std::map<int, double> pi;
    for (const auto& o : inflation.obs) pi[o.t.serial()] = o.value;

    // The expected inflation over (t, t+1] is this month's observed inflation
    // under ex_ante and next month's realized inflation under ex_post.
    const int shift = mode == InflationMode::ex_ante ? 0 : 1;

    RawSeries out;
    out.unit = rate.unit;
    out.variable = Variable::rate;
    for (const auto& o : rate.obs) {
        const auto expected = pi.find(o.t.serial() + shift);
        if (expected == pi.end()) continue;
        out.obs.push_back(Observation{o.t, o.value - expected->second});
    }
    return out;
}

RirdPanel compute_rird(const Panel& real_rates, const RirdSpec& spec) {
    require_balanced(real_rates);

    const bool has_benchmark = real_rates.has_unit(spec.benchmark_unit);
    if (spec.benchmark == Benchmark::euro_area && !has_benchmark) {
        throw DataError("benchmark unit '" + spec.benchmark_unit + "' is not in the panel");
    }

    // Member units: everything except the reserved benchmark economy.
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < real_rates.n_units(); ++i) {
        if (real_rates.units()[i] != spec.benchmark_unit) members.push_back(i);
    }
    if (spec.benchmark == Benchmark::group_average && members.size() < 2) {
        throw DataError("group_average needs at least 2 member units");
    }
    if (members.empty()) throw DataError("no member units besides the benchmark");

    std::vector<std::string> out_units;
    out_units.reserve(members.size());
    for (const auto i : members) out_units.push_back(real_rates.units()[i]);

    Panel out(out_units, real_rates.times());
    const std::size_t T = real_rates.n_times();

    for (std::size_t t = 0; t < T; ++t) {
        double bench = 0.0;
        if (spec.benchmark == Benchmark::euro_area) {
            bench = *real_rates.at(real_rates.unit_index(spec.benchmark_unit), t);
        } else {
            for (const auto i : members) bench += *real_rates.at(i, t);
            bench /= static_cast<double>(members.size());
        }
        for (std::size_t r = 0; r < members.size(); ++r) {
            const double own = *real_rates.at(members[r], t);
            double reference = bench;
            if (spec.benchmark == Benchmark::group_average && spec.leave_one_out) {
                const auto n = static_cast<double>(members.size());
                reference = (bench * n - own) / (n - 1.0);
            }
            out.set(r, t, own - reference);
        }
    }
    return RirdPanel{std::move(out), spec};
}

std::vector<SummaryRow> summary_stats(const Panel& panel) {
    std::vector<SummaryRow> rows;
    SummaryRow pooled;
    pooled.unit = "panel";
    pooled.min = std::numeric_limits<double>::infinity();
    pooled.max = -std::numeric_limits<double>::infinity();
    double pooled_sum = 0.0;
    std::vector<double> pooled_values;

    for (std::size_t i = 0; i < panel.n_units(); ++i) {
        SummaryRow r;
        r.unit = panel.units()[i];
        r.min = std::numeric_limits<double>::infinity();
        r.max = -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        std::vector<double> values;
        for (std::size_t t = 0; t < panel.n_times(); ++t) {
            const auto& cell = panel.at(i, t);
            if (!cell) continue;
            values.push_back(*cell);
            sum += *cell;
            r.min = std::min(r.min, *cell);
            r.max = std::max(r.max, *cell);
        }
        if (values.empty()) {
            throw DataError("unit '" + r.unit + "' has no observations to summarize");
        }
        r.n = values.size();
        r.mean = sum / static_cast<double>(r.n);
        double ss = 0.0;
        for (const double v : values) ss += (v - r.mean) * (v - r.mean);
        r.sd = r.n > 1 ? std::sqrt(ss / static_cast<double>(r.n - 1)) : 0.0;
        rows.push_back(r);

        pooled_sum += sum;
        pooled.min = std::min(pooled.min, r.min);
        pooled.max = std::max(pooled.max, r.max);
        pooled_values.insert(pooled_values.end(), values.begin(), values.end());
    }

    pooled.n = pooled_values.size();
    pooled.mean = pooled_sum / static_cast<double>(pooled.n);
    double ss = 0.0;
    for (const double v : pooled_values) ss += (v - pooled.mean) * (v - pooled.mean);
    pooled.sd = pooled.n > 1 ? std::sqrt(ss / static_cast<double>(pooled.n - 1)) : 0.0;
    rows.push_back(pooled);
    return rows;
}

}  // namespace purt
