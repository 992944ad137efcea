#include "purt/dist_tables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "purt/detail/llc_core.hpp"
#include "purt/errors.hpp"
#include "purt/rng.hpp"
#include "purt/secondgen.hpp"
#include "purt/stats.hpp"

namespace purt::tables {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw CacheError("bad number '" + s + "' in table file");
    return v;
}

std::string params_string(const std::map<std::string, std::string>& params) {
    std::string out;
    for (const auto& [k, v] : params) {
        if (!out.empty()) out += ';';
        out += k + '=' + v;
    }
    return out;
}

std::vector<double> random_walk(rng::Stream& stream, int T) {
    std::vector<double> y(static_cast<std::size_t>(T));
    double level = 0.0;
    for (auto& v : y) {
        level += stream.normal();
        v = level;
    }
    return y;
}

std::vector<double> sorted_to_grid(std::vector<double>& draws, const std::vector<double>& probs) {
    std::sort(draws.begin(), draws.end());
    std::vector<double> q(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        q[i] = stats::sorted_quantile(draws, probs[i]);
    }
    return q;
}

void require_reps(std::uint64_t reps, std::uint64_t floor, const char* what) {
    if (reps < floor) {
        throw ConfigError(std::string(what) + " needs at least " + std::to_string(floor) +
                          " replications");
    }
}

}  // namespace

std::vector<double> probability_grid() {
    std::vector<double> probs(199);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        probs[i] = static_cast<double>(i + 1) * 0.005;
    }
    return probs;
}

std::string QuantileTable::key() const {
    return family + "|" + params_string(params) + "|seed=" + std::to_string(seed) +
           "|reps=" + std::to_string(reps);
}

QuantileTable simulate_df_quantiles(Deterministics det, int T, int p, std::uint64_t reps,
                                    std::uint64_t seed, unsigned threads) {
    require_reps(reps, 10000, "simulate_df_quantiles");
    if (T < 25) throw ConfigError("simulate_df_quantiles needs T >= 25");
    if (p < 0 || p > T / 4) throw ConfigError("simulate_df_quantiles: lag out of range");

    AdfSpec spec;
    spec.det = det;
    spec.rule = LagRule::fixed;
    spec.fixed_lag = p;

    std::vector<double> draws(reps);
    rng::parallel_for(reps, threads, [&](std::size_t r) {
        rng::Stream stream(seed, r);
        const auto y = random_walk(stream, T);
        draws[r] = adf_fit(y, spec).t_stat;
    });

    QuantileTable table;
    table.family = "df_t";
    table.params = {{"case", to_string(det)}, {"T", std::to_string(T)}, {"p", std::to_string(p)}};
    table.probs = probability_grid();
    table.quants.push_back(sorted_to_grid(draws, table.probs));
    table.seed = seed;
    table.reps = reps;
    return table;
}

QuantileTable simulate_df_quantiles_selected(Deterministics det, int T, int max_lag,
                                             std::uint64_t reps, std::uint64_t seed,
                                             unsigned threads) {
    require_reps(reps, 10000, "simulate_df_quantiles_selected");
    if (T < 25) throw ConfigError("simulate_df_quantiles_selected needs T >= 25");
    if (max_lag < 0 || max_lag > T / 4) {
        throw ConfigError("simulate_df_quantiles_selected: max_lag out of range");
    }

    AdfSpec spec;
    spec.det = det;
    spec.rule = LagRule::aic_selected;
    spec.max_lag = max_lag;

    std::vector<double> draws(reps);
    rng::parallel_for(reps, threads, [&](std::size_t r) {
        rng::Stream stream(seed, r);
        const auto y = random_walk(stream, T);
        draws[r] = adf_fit(y, spec).t_stat;
    });

    QuantileTable table;
    table.family = "df_t";
    table.params = {{"case", to_string(det)},
                    {"T", std::to_string(T)},
                    {"sel", "aic"},
                    {"max_lag", std::to_string(max_lag)}};
    table.probs = probability_grid();
    table.quants.push_back(sorted_to_grid(draws, table.probs));
    table.seed = seed;
    table.reps = reps;
    return table;
}

IpsMoments simulate_ips_moments(int T, int p, std::uint64_t reps, std::uint64_t seed,
                                unsigned threads) {
    require_reps(reps, 10000, "simulate_ips_moments");
    if (T < 25) throw ConfigError("simulate_ips_moments needs T >= 25");

    AdfSpec spec;
    spec.det = Deterministics::constant;
    spec.rule = LagRule::fixed;
    spec.fixed_lag = p;

    std::vector<double> draws(reps);
    rng::parallel_for(reps, threads, [&](std::size_t r) {
        rng::Stream stream(seed, r);
        const auto y = random_walk(stream, T);
        draws[r] = adf_fit(y, spec).t_stat;
    });

    IpsMoments m;
    m.mean_t = stats::mean(draws);
    m.var_t = stats::variance(draws);
    return m;
}

LlcAdjustments simulate_llc_adjustments(int T, std::uint64_t reps, std::uint64_t seed,
                                        int max_lag, unsigned threads) {
    require_reps(reps, 1000, "simulate_llc_adjustments");
    if (T < 25) throw ConfigError("simulate_llc_adjustments needs T >= 25");

    std::vector<double> cross(reps), scale(reps), level(reps);
    const LrvSpec lrv;
    rng::parallel_for(reps, threads, [&](std::size_t r) {
        rng::Stream stream(seed, r);
        const auto y = random_walk(stream, T);
        const detail::LlcUnit unit = detail::llc_unit_block(y, max_lag, lrv);
        cross[r] = unit.e_tilde.dot(unit.v_tilde);
        scale[r] = static_cast<double>(unit.n) * unit.s_ratio;
        level[r] = unit.v_tilde.squaredNorm();
    });

    // The adjusted statistic equals sum_i (e_i'v_i - mu* T_i S_i) over
    // sigma_hat * sqrt(sum_i v_i'v_i), so the moments to match live on the
    // numerator scale: mu* equates the mean cross product with the mean of
    // T*S, sigma* is the centered spread against the root mean level
    // variation. Matching the single-unit t-ratio instead would bake its
    // finite-sample skew into mu* and miscenter every wider panel.
    const double mean_scale = stats::mean(scale);
    const double mean_level = stats::mean(level);
    if (mean_scale == 0.0 || mean_level <= 0.0) {
        throw DegenerateInputError("llc adjustment calibration degenerate");
    }
    LlcAdjustments adj;
    adj.mu_star = stats::mean(cross) / mean_scale;
    std::vector<double> centered(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        centered[r] = cross[r] - adj.mu_star * scale[r];
    }
    adj.sigma_star = std::sqrt(stats::variance(centered) / mean_level);
    return adj;
}

QuantileTable simulate_hansen_surface(Deterministics det, std::uint64_t reps, std::uint64_t seed,
                                      int steps, unsigned threads) {
    require_reps(reps, 10000, "simulate_hansen_surface");
    if (steps < 1000) throw ConfigError("simulate_hansen_surface needs at least 1000 steps");

    // One unit-root functional draw and one independent normal per
    // replication; every rho^2 grid point reuses them (common random
    // numbers), which keeps the quantile surface monotone in rho^2.
    std::vector<double> df_draws(reps), z_draws(reps);
    const double root_steps = std::sqrt(static_cast<double>(steps));
    rng::parallel_for(reps, threads, [&](std::size_t r) {
        rng::Stream stream(seed, r);
        std::vector<double> path(static_cast<std::size_t>(steps));
        double level = 0.0;
        for (auto& v : path) {
            level += stream.normal() / root_steps;
            v = level;
        }
        double mean_lag = 0.0;
        if (det == Deterministics::constant) {
            // Mean of the pre-increment values W_0 .. W_{M-1}; W_0 = 0.
            double s = 0.0;
            for (std::size_t j = 0; j + 1 < path.size(); ++j) s += path[j];
            mean_lag = s / static_cast<double>(steps);
        }
        double num = 0.0, den = 0.0;
        double prev = 0.0;  // W_0
        for (std::size_t j = 0; j < path.size(); ++j) {
            const double w = prev - mean_lag;
            num += w * (path[j] - prev);
            den += w * w;
            prev = path[j];
        }
        den /= static_cast<double>(steps);
        df_draws[r] = num / std::sqrt(den);
        z_draws[r] = stream.normal();
    });

    QuantileTable table;
    table.family = "hansen_cadf";
    table.params = {{"case", to_string(det)}, {"steps", std::to_string(steps)}};
    table.probs = probability_grid();
    table.seed = seed;
    table.reps = reps;
    for (int g = 0; g <= 10; ++g) {
        const double rho2 = static_cast<double>(g) / 10.0;
        const double a = std::sqrt(rho2);
        const double b = std::sqrt(1.0 - rho2);
        std::vector<double> draws(reps);
        for (std::size_t r = 0; r < reps; ++r) {
            draws[r] = a * df_draws[r] + b * z_draws[r];
        }
        table.aux.push_back(rho2);
        table.quants.push_back(sorted_to_grid(draws, table.probs));
    }
    return table;
}

QuantileTable simulate_cips_quantiles(int n_units, int T, std::uint64_t reps, std::uint64_t seed,
                                      int max_lag, unsigned threads) {
    require_reps(reps, 500, "simulate_cips_quantiles");
    if (n_units < 2) throw ConfigError("simulate_cips_quantiles needs N >= 2");
    if (T < 25) throw ConfigError("simulate_cips_quantiles needs T >= 25");

    AdfSpec spec;
    spec.det = Deterministics::constant;
    spec.rule = LagRule::aic_selected;
    spec.max_lag = max_lag;

    std::vector<double> draws(reps);
    rng::parallel_for(reps, threads, [&](std::size_t r) {
        rng::Stream stream(seed, r);
        std::vector<std::vector<double>> panel(static_cast<std::size_t>(n_units));
        for (auto& y : panel) y = random_walk(stream, T);
        std::vector<double> ybar(static_cast<std::size_t>(T), 0.0);
        for (const auto& y : panel) {
            for (int t = 0; t < T; ++t) ybar[static_cast<std::size_t>(t)] += y[static_cast<std::size_t>(t)];
        }
        for (auto& v : ybar) v /= static_cast<double>(n_units);
        double sum_t = 0.0;
        for (const auto& y : panel) sum_t += cadf_unit(y, ybar, spec).t_stat;
        draws[r] = sum_t / static_cast<double>(n_units);
    });

    QuantileTable table;
    table.family = "cips";
    table.params = {{"case", "constant"},
                    {"N", std::to_string(n_units)},
                    {"T", std::to_string(T)},
                    {"max_lag", std::to_string(max_lag)}};
    table.probs = probability_grid();
    table.quants.push_back(sorted_to_grid(draws, table.probs));
    table.seed = seed;
    table.reps = reps;
    return table;
}

namespace {

// Continues the CDF past a grid edge on the probit scale, through the two
// outermost grid points. The log and probit combinations downstream need
// tail p-values that keep shrinking at a Gaussian-like rate; stopping at
// the edge probability (or at the clamp) hands one stray unit a bounded
// but huge weight and distorts the combined statistic's tail.
double probit_tail(double p_a, double q_a, double p_b, double q_b, double stat) {
    if (q_a == q_b) return stat < q_a ? kPClamp : 1.0 - kPClamp;
    const double z_a = stats::normal_quantile(p_a);
    const double z_b = stats::normal_quantile(p_b);
    const double z = z_a + (z_b - z_a) * (stat - q_a) / (q_b - q_a);
    const double p = stats::normal_cdf(z);
    return std::min(1.0 - kPClamp, std::max(kPClamp, p));
}

double interpolate_pvalue(const std::vector<double>& probs, const std::vector<double>& quants,
                          double stat) {
    const std::size_t m = quants.size();
    if (stat < quants.front()) {
        if (m < 2) return kPClamp;
        return probit_tail(probs[0], quants[0], probs[1], quants[1], stat);
    }
    if (stat > quants.back()) {
        if (m < 2) return 1.0 - kPClamp;
        return probit_tail(probs[m - 1], quants[m - 1], probs[m - 2], quants[m - 2], stat);
    }
    const auto it = std::lower_bound(quants.begin(), quants.end(), stat);
    const auto hi = static_cast<std::size_t>(it - quants.begin());
    if (hi == 0) return probs.front();
    if (quants[hi] == quants[hi - 1]) return probs[hi];
    const double frac = (stat - quants[hi - 1]) / (quants[hi] - quants[hi - 1]);
    const double p = probs[hi - 1] + frac * (probs[hi] - probs[hi - 1]);
    return std::min(1.0 - kPClamp, std::max(kPClamp, p));
}

}  // namespace

double pvalue_from_table(const QuantileTable& table, double stat) {
    if (!table.aux.empty()) {
        throw CacheError("pvalue_from_table used on a surface table; pass rho2 instead");
    }
    if (table.quants.size() != 1 || table.quants[0].size() != table.probs.size()) {
        throw CacheError("malformed quantile table '" + table.family + "'");
    }
    return interpolate_pvalue(table.probs, table.quants[0], stat);
}

double pvalue_from_surface(const QuantileTable& surface, double stat, double rho2) {
    if (surface.aux.empty()) throw CacheError("surface table expected");
    if (surface.quants.size() != surface.aux.size()) throw CacheError("malformed surface table");
    const double r = std::min(surface.aux.back(), std::max(surface.aux.front(), rho2));
    const auto it = std::lower_bound(surface.aux.begin(), surface.aux.end(), r);
    const auto hi = static_cast<std::size_t>(it - surface.aux.begin());
    if (hi == 0 || (hi < surface.aux.size() && surface.aux[hi] == r)) {
        return interpolate_pvalue(surface.probs, surface.quants[hi], stat);
    }
    const double p_lo = interpolate_pvalue(surface.probs, surface.quants[hi - 1], stat);
    const double p_hi = interpolate_pvalue(surface.probs, surface.quants[hi], stat);
    const double frac = (r - surface.aux[hi - 1]) / (surface.aux[hi] - surface.aux[hi - 1]);
    return p_lo + frac * (p_hi - p_lo);
}

namespace {

std::uint64_t fnv1a_bytes(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string checksum_hex(const std::string& bytes) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a_bytes(bytes)));
    return buf;
}

std::string data_section(const QuantileTable& table) {
    const std::string common = params_string(table.params);
    std::ostringstream out;
    out << "family,params,prob,quantile\n";
    for (std::size_t s = 0; s < table.quants.size(); ++s) {
        std::string row_params = common;
        if (!table.aux.empty()) row_params += ";rho2=" + format_double(table.aux[s]);
        for (std::size_t i = 0; i < table.probs.size(); ++i) {
            out << table.family << ',' << row_params << ',' << format_double(table.probs[i])
                << ',' << format_double(table.quants[s][i]) << '\n';
        }
    }
    return out.str();
}

std::string expect_prefix(const std::string& line, const std::string& prefix,
                          const std::string& path) {
    if (line.rfind(prefix, 0) != 0) {
        throw CacheError("'" + path + "': expected line starting with '" + prefix + "'");
    }
    return line.substr(prefix.size());
}

}  // namespace

void store_table(const QuantileTable& table, const std::string& path) {
    const std::string data = data_section(table);
    std::ostringstream head;
    head << "# purt-table version=" << kTableVersion << '\n'
         << "# family=" << table.family << '\n'
         << "# params=" << params_string(table.params) << '\n'
         << "# seed=" << table.seed << '\n'
         << "# reps=" << table.reps << '\n'
         << "# checksum=" << checksum_hex(data) << '\n';

    const std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        if (!out) throw CacheError("cannot write '" + tmp.string() + "'");
        out << head.str() << data;
        if (!out) throw CacheError("write to '" + tmp.string() + "' failed");
    }
    std::filesystem::rename(tmp, target);  // atomic publish
}

QuantileTable load_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheError("cannot open '" + path + "'");

    std::string line;
    auto next_line = [&]() -> std::string {
        if (!std::getline(in, line)) throw CacheError("'" + path + "': truncated header");
        return line;
    };

    const std::string version = expect_prefix(next_line(), "# purt-table version=", path);
    if (version != std::to_string(kTableVersion)) {
        throw CacheError("'" + path + "': table version " + version + " does not match " +
                         std::to_string(kTableVersion) + "; regeneration required");
    }

    QuantileTable table;
    table.family = expect_prefix(next_line(), "# family=", path);
    const std::string params_str = expect_prefix(next_line(), "# params=", path);
    table.seed = std::stoull(expect_prefix(next_line(), "# seed=", path));
    table.reps = std::stoull(expect_prefix(next_line(), "# reps=", path));
    const std::string stored_sum = expect_prefix(next_line(), "# checksum=", path);

    std::ostringstream rest;
    rest << in.rdbuf();
    const std::string data = rest.str();
    if (checksum_hex(data) != stored_sum) {
        throw CacheError("'" + path + "': checksum mismatch; file is corrupt or was edited");
    }

    if (!params_str.empty()) {
        std::stringstream ss(params_str);
        std::string item;
        while (std::getline(ss, item, ';')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw CacheError("'" + path + "': bad params entry");
            table.params[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }

    std::stringstream body(data);
    if (!std::getline(body, line) || line != "family,params,prob,quantile") {
        throw CacheError("'" + path + "': missing data header");
    }
    const std::string common = params_string(table.params);
    std::string current_slice_params;
    while (std::getline(body, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string family, row_params, prob_s, quant_s;
        if (!std::getline(row, family, ',') || !std::getline(row, row_params, ',') ||
            !std::getline(row, prob_s, ',') || !std::getline(row, quant_s)) {
            throw CacheError("'" + path + "': malformed row '" + line + "'");
        }
        if (family != table.family) throw CacheError("'" + path + "': family mismatch in rows");

        if (row_params != current_slice_params) {
            current_slice_params = row_params;
            if (row_params == common) {
                if (!table.aux.empty() || !table.quants.empty()) {
                    throw CacheError("'" + path + "': mixed plain and surface rows");
                }
            } else {
                const std::string marker = common.empty() ? "rho2=" : common + ";rho2=";
                if (row_params.rfind(marker, 0) != 0) {
                    throw CacheError("'" + path + "': row params '" + row_params +
                                     "' do not extend '" + common + "'");
                }
                table.aux.push_back(parse_double(row_params.substr(marker.size())));
            }
            table.quants.emplace_back();
        }
        // The probability grid is shared; it is collected from the first
        // slice only and cross-checked against the others at the end.
        if (table.quants.size() == 1) table.probs.push_back(parse_double(prob_s));
        table.quants.back().push_back(parse_double(quant_s));
    }

    if (table.quants.empty()) throw CacheError("'" + path + "': no data rows");
    for (const auto& slice : table.quants) {
        if (slice.size() != table.probs.size()) {
            throw CacheError("'" + path + "': slices have inconsistent lengths");
        }
    }
    if (!table.aux.empty() && !std::is_sorted(table.aux.begin(), table.aux.end())) {
        throw CacheError("'" + path + "': rho2 grid out of order");
    }
    return table;
}

namespace {

std::string sanitize_filename(const std::string& key) {
    std::string out;
    out.reserve(key.size());
    for (const char c : key) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                          (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_';
        out += keep ? c : '_';
    }
    return out;
}

}  // namespace

TableCache::TableCache(std::string dir, std::uint64_t seed, std::uint64_t reps, unsigned threads)
    : dir_(std::move(dir)), seed_(seed), reps_(reps), threads_(threads) {
    if (reps_ < 10000) throw ConfigError("table cache needs reps >= 10000");
    std::filesystem::create_directories(dir_);
}

std::uint64_t TableCache::surface_reps() const noexcept {
    return std::max<std::uint64_t>(reps_, 400000);
}

std::uint64_t TableCache::adjustment_reps() const noexcept {
    return std::max<std::uint64_t>(reps_, 100000);
}

const QuantileTable& TableCache::table_for(
    const std::string& family, const std::map<std::string, std::string>& params,
    std::uint64_t reps, const std::function<QuantileTable(std::uint64_t)>& simulate) {
    QuantileTable probe;
    probe.family = family;
    probe.params = params;
    probe.seed = seed_;
    probe.reps = reps;
    const std::string key = probe.key();

    const std::lock_guard<std::mutex> guard(mutex_);
    if (const auto it = memo_.find(key); it != memo_.end()) return *it->second;

    const std::string path =
        (std::filesystem::path(dir_) / (sanitize_filename(key) + ".csv")).string();
    if (std::filesystem::exists(path)) {
        try {
            auto loaded = std::make_unique<QuantileTable>(load_table(path));
            if (loaded->family == family && loaded->params == params && loaded->reps == reps) {
                const auto [it, inserted] = memo_.emplace(key, std::move(loaded));
                return *it->second;
            }
            // Key collision with different content: fall through and rebuild.
        } catch (const CacheError&) {
            // Corrupt or stale-version file: rebuild below and overwrite.
        }
    }

    auto fresh = std::make_unique<QuantileTable>(simulate(rng::derive_seed(seed_, key)));
    fresh->seed = seed_;
    store_table(*fresh, path);
    const auto [it, inserted] = memo_.emplace(key, std::move(fresh));
    return *it->second;
}

const QuantileTable& TableCache::df_table(Deterministics det, int T, int p) {
    const std::map<std::string, std::string> params = {
        {"case", to_string(det)}, {"T", std::to_string(T)}, {"p", std::to_string(p)}};
    return table_for("df_t", params, reps_, [&](std::uint64_t seed) {
        return simulate_df_quantiles(det, T, p, reps_, seed, threads_);
    });
}

const QuantileTable& TableCache::df_table_selected(Deterministics det, int T, int max_lag) {
    const std::map<std::string, std::string> params = {{"case", to_string(det)},
                                                       {"T", std::to_string(T)},
                                                       {"sel", "aic"},
                                                       {"max_lag", std::to_string(max_lag)}};
    return table_for("df_t", params, reps_, [&](std::uint64_t seed) {
        return simulate_df_quantiles_selected(det, T, max_lag, reps_, seed, threads_);
    });
}

const QuantileTable& TableCache::df_asymptotic_none() {
    return df_table(Deterministics::none, 1000, 0);
}

const QuantileTable& TableCache::hansen_surface(Deterministics det) {
    const std::map<std::string, std::string> params = {{"case", to_string(det)},
                                                       {"steps", "2000"}};
    const std::uint64_t reps = surface_reps();
    return table_for("hansen_cadf", params, reps, [&](std::uint64_t seed) {
        return simulate_hansen_surface(det, reps, seed, 2000, threads_);
    });
}

IpsMoments TableCache::ips_moments(int T, int p) {
    const std::map<std::string, std::string> params = {
        {"kind", "ips_moments"}, {"T", std::to_string(T)}, {"p", std::to_string(p)}};
    const QuantileTable& t = table_for("ips_moments", params, reps_, [&](std::uint64_t seed) {
        const IpsMoments m = simulate_ips_moments(T, p, reps_, seed, threads_);
        QuantileTable enc;
        enc.family = "ips_moments";
        enc.params = params;
        enc.probs = {0.0, 1.0};  // slot labels: 0 -> mean, 1 -> variance
        enc.quants.push_back({m.mean_t, m.var_t});
        enc.reps = reps_;
        return enc;
    });
    return IpsMoments{t.quants[0][0], t.quants[0][1]};
}

LlcAdjustments TableCache::llc_adjustments(int T, int max_lag) {
    const std::map<std::string, std::string> params = {{"kind", "llc_adjustments"},
                                                       {"T", std::to_string(T)},
                                                       {"max_lag", std::to_string(max_lag)}};
    const std::uint64_t reps = adjustment_reps();
    const QuantileTable& t = table_for("llc_adjustments", params, reps, [&](std::uint64_t seed) {
        const LlcAdjustments a = simulate_llc_adjustments(T, reps, seed, max_lag, threads_);
        QuantileTable enc;
        enc.family = "llc_adjustments";
        enc.params = params;
        enc.probs = {0.0, 1.0};  // slot labels: 0 -> mean adj, 1 -> sd adj
        enc.quants.push_back({a.mu_star, a.sigma_star});
        enc.reps = reps;
        return enc;
    });
    return LlcAdjustments{t.quants[0][0], t.quants[0][1]};
}

}  // namespace purt::tables
