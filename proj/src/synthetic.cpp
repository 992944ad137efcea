#include "purt/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "purt/errors.hpp"
#include "purt/rng.hpp"

namespace purt {

Dgp dgp_from_string(const std::string& s) {
    if (s == "random_walk") return Dgp::random_walk;
    if (s == "ar1") return Dgp::ar1;
    if (s == "factor") return Dgp::factor;
    throw ConfigError("unknown dgp '" + s + "'; expected random_walk, ar1, or factor");
}

const char* to_string(Dgp d) noexcept {
    switch (d) {
        case Dgp::random_walk: return "random_walk";
        case Dgp::ar1: return "ar1";
        default: return "factor";
    }
}

namespace {

std::string padded_name(const char* prefix, std::size_t index, std::size_t total) {
    int width = 2;
    for (std::size_t rest = total; rest >= 100; rest /= 10) ++width;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, index);
    return buf;
}

std::vector<MonthIndex> month_axis(MonthIndex start, std::size_t n_times) {
    std::vector<MonthIndex> times;
    times.reserve(n_times);
    for (std::size_t t = 0; t < n_times; ++t) {
        times.push_back(start.plus(static_cast<int>(t)));
    }
    return times;
}

}  // namespace

Panel gen_panel(const DgpSpec& spec) {
    if (spec.n_units < 1) throw ConfigError("synthetic panel needs at least 1 unit");
    if (spec.n_times < 25) throw ConfigError("synthetic panel needs at least 25 periods");
    if (spec.dgp == Dgp::ar1 && !(std::abs(spec.ar_root) < 1.0)) {
        throw ConfigError("ar root must lie strictly inside the unit circle");
    }
    if (spec.dgp == Dgp::factor && !(spec.factor_share >= 0.0 && spec.factor_share < 1.0)) {
        throw ConfigError("factor share must lie in [0, 1)");
    }

    std::vector<std::string> units;
    units.reserve(spec.n_units);
    for (std::size_t i = 1; i <= spec.n_units; ++i) {
        units.push_back(padded_name("U", i, spec.n_units));
    }
    Panel panel(units, month_axis(spec.start, spec.n_times));

    rng::Stream stream(spec.seed, 0);

    std::vector<double> common(spec.n_times, 0.0);
    if (spec.dgp == Dgp::factor) {
        for (auto& g : common) g = stream.normal();
    }

    for (std::size_t i = 0; i < spec.n_units; ++i) {
        double level = 0.0;
        for (std::size_t t = 0; t < spec.n_times; ++t) {
            switch (spec.dgp) {
                case Dgp::random_walk:
                    level += stream.normal();
                    break;
                case Dgp::ar1: {
                    const double shock = stream.normal();
                    // Stationary start: the first value already has the
                    // process's unconditional variance.
                    level = t == 0 ? shock / std::sqrt(1.0 - spec.ar_root * spec.ar_root)
                                   : spec.ar_root * level + shock;
                    break;
                }
                case Dgp::factor: {
                    const double shock = std::sqrt(spec.factor_share) * common[t] +
                                         std::sqrt(1.0 - spec.factor_share) * stream.normal();
                    level += shock;
                    break;
                }
            }
            panel.set(i, t, level);
        }
    }
    return panel;
}

void gen_raw_macro_csv(const std::string& path, std::size_t n_units, std::size_t n_times,
                       std::uint64_t seed) {
    if (n_units < 2) throw ConfigError("raw synthetic file needs at least 2 units");
    if (n_times < 40) throw ConfigError("raw synthetic file needs at least 40 months");

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "date,country,variable,value\n";

    const auto times = month_axis(MonthIndex{2000, 1}, n_times);
    rng::Stream stream(seed, 0);

    std::vector<std::string> units;
    for (std::size_t i = 1; i <= n_units; ++i) units.push_back(padded_name("C", i, n_units));
    units.push_back("EA");

    char buf[64];
    for (const auto& unit : units) {
        // Price level: log random walk with mild drift, so year-over-year
        // inflation hovers around a few percent.
        double log_cpi = std::log(100.0);
        // Nominal rate: slow AR(1) around 4 percent.
        double rate_dev = stream.normal();
        for (std::size_t t = 0; t < n_times; ++t) {
            log_cpi += 0.003 + 0.002 * stream.normal();
            rate_dev = 0.9 * rate_dev + 0.3 * stream.normal();
            const std::string date = times[t].str();
            std::snprintf(buf, sizeof buf, "%.10g", std::exp(log_cpi));
            out << date << ',' << unit << ",cpi," << buf << '\n';
            std::snprintf(buf, sizeof buf, "%.10g", 4.0 + rate_dev);
            out << date << ',' << unit << ",rate," << buf << '\n';
        }
    }
    if (!out) throw DataError("write to '" + path + "' failed");
}

}  // namespace purt
