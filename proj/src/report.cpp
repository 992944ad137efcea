#include "purt/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "purt/combo.hpp"
#include "purt/csv.hpp"
#include "purt/errors.hpp"
#include "purt/firstgen.hpp"
#include "purt/secondgen.hpp"

namespace purt {

const std::vector<std::string>& all_test_names() {
    static const std::vector<std::string> names = {
        "mw",   "choi_z",      "llc",  "ips",   "moon_perron", "cips",     "choi2006",
        "padf", "pcadf",       "pcadf_pc", "sadf", "scadf",    "scadf_pc", "cd"};
    return names;
}

namespace {

using nlohmann::json;

std::string fmt(double v, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

template <typename T>
T checked(const json& j, const std::string& key, const char* type_name) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' must be a " + type_name);
    }
}

MonthIndex parse_month(const std::string& text, const std::string& key) {
    try {
        return MonthIndex::parse(text);
    } catch (const Error& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    static const std::set<std::string> known = {
        "input",        "input_kind", "modes",         "benchmarks", "horizon",
        "leave_one_out","benchmark_unit", "window_first", "window_last", "tests",
        "max_lag",      "lag_criterion", "fixed_lag",  "cd_threshold", "mp_factors",
        "seed",         "reps",       "threads",       "cache_dir",  "out_dir",
        "format"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
    }

    RunConfig c;
    if (j.contains("input")) c.input = checked<std::string>(j, "input", "string");
    if (j.contains("input_kind")) c.input_kind = checked<std::string>(j, "input_kind", "string");
    if (j.contains("modes")) {
        c.modes.clear();
        for (const auto& m : checked<std::vector<std::string>>(j, "modes", "string array")) {
            c.modes.push_back(inflation_mode_from_string(m));
        }
    }
    if (j.contains("benchmarks")) {
        c.benchmarks.clear();
        for (const auto& b : checked<std::vector<std::string>>(j, "benchmarks", "string array")) {
            c.benchmarks.push_back(benchmark_from_string(b));
        }
    }
    if (j.contains("horizon")) c.horizon = checked<int>(j, "horizon", "number");
    if (j.contains("leave_one_out")) c.leave_one_out = checked<bool>(j, "leave_one_out", "bool");
    if (j.contains("benchmark_unit")) {
        c.benchmark_unit = checked<std::string>(j, "benchmark_unit", "string");
    }
    if (j.contains("window_first")) {
        c.window_first = parse_month(checked<std::string>(j, "window_first", "string"),
                                     "window_first");
    }
    if (j.contains("window_last")) {
        c.window_last = parse_month(checked<std::string>(j, "window_last", "string"),
                                    "window_last");
    }
    if (j.contains("tests")) c.tests = checked<std::vector<std::string>>(j, "tests", "string array");
    if (j.contains("max_lag")) c.max_lag = checked<int>(j, "max_lag", "number");
    if (j.contains("lag_criterion")) {
        c.lag_criterion = checked<std::string>(j, "lag_criterion", "string");
    }
    if (j.contains("fixed_lag")) c.fixed_lag = checked<int>(j, "fixed_lag", "number");
    if (j.contains("cd_threshold")) c.cd_threshold = checked<double>(j, "cd_threshold", "number");
    if (j.contains("mp_factors")) c.mp_factors = checked<int>(j, "mp_factors", "number");
    if (j.contains("seed")) c.seed = checked<std::uint64_t>(j, "seed", "number");
    if (j.contains("reps")) c.reps = checked<std::uint64_t>(j, "reps", "number");
    if (j.contains("threads")) c.threads = checked<unsigned>(j, "threads", "number");
    if (j.contains("cache_dir")) c.cache_dir = checked<std::string>(j, "cache_dir", "string");
    if (j.contains("out_dir")) c.out_dir = checked<std::string>(j, "out_dir", "string");
    if (j.contains("format")) c.format = checked<std::string>(j, "format", "string");

    validate(c);
    return c;
}

void validate(const RunConfig& config) {
    if (config.input.empty()) throw ConfigError("config needs an 'input' path");
    if (config.input_kind != "raw" && config.input_kind != "panel") {
        throw ConfigError("input_kind must be 'raw' or 'panel'");
    }
    if (config.input_kind == "raw") {
        if (config.modes.empty()) throw ConfigError("at least one inflation mode is required");
        if (config.benchmarks.empty()) throw ConfigError("at least one benchmark is required");
        if (config.benchmark_unit.empty()) throw ConfigError("benchmark_unit must be non-empty");
        if (config.horizon < 1 || config.horizon > 24) {
            throw ConfigError("horizon must lie in 1..24 months");
        }
    }
    if (config.window_first && config.window_last && *config.window_last < *config.window_first) {
        throw ConfigError("window_last precedes window_first");
    }
    for (const auto& t : config.tests) {
        const auto& names = all_test_names();
        if (std::find(names.begin(), names.end(), t) == names.end()) {
            throw ConfigError("unknown test '" + t + "'");
        }
    }
    if (config.max_lag < 0 || config.max_lag > 24) throw ConfigError("max_lag must lie in 0..24");
    if (config.lag_criterion != "aic" && config.lag_criterion != "fixed") {
        throw ConfigError("lag_criterion must be 'aic' or 'fixed'");
    }
    if (config.fixed_lag < 0 || config.fixed_lag > 24) {
        throw ConfigError("fixed_lag must lie in 0..24");
    }
    if (!(config.cd_threshold >= 0.0 && config.cd_threshold <= 1.0)) {
        throw ConfigError("cd_threshold must lie in [0, 1]");
    }
    if (config.mp_factors < 0) throw ConfigError("mp_factors must be >= 0 (0 = automatic)");
    if (config.reps < 10000) throw ConfigError("reps must be at least 10000");
    if (config.format != "csv" && config.format != "markdown" && config.format != "both") {
        throw ConfigError("format must be 'csv', 'markdown', or 'both'");
    }
}

namespace {

Panel apply_window(const Panel& panel, const Window& window) {
    if (!window.first && !window.last) return panel;
    std::vector<MonthIndex> times;
    for (const auto& t : panel.times()) {
        if (window.contains(t)) times.push_back(t);
    }
    if (times.empty()) throw DataError("window excludes every observation");
    Panel out(panel.units(), times);
    for (std::size_t i = 0; i < panel.n_units(); ++i) {
        for (std::size_t k = 0; k < times.size(); ++k) {
            const auto src = static_cast<std::size_t>(
                std::find(panel.times().begin(), panel.times().end(), times[k]) -
                panel.times().begin());
            if (const auto& cell = panel.at(i, src)) out.set(i, k, *cell);
        }
    }
    return out;
}

std::vector<std::string> selected_tests(const RunConfig& config) {
    const auto& names = all_test_names();
    if (config.tests.empty()) return names;
    const std::set<std::string> wanted(config.tests.begin(), config.tests.end());
    std::vector<std::string> out;
    for (const auto& n : names) {
        if (wanted.count(n)) out.push_back(n);
    }
    return out;
}

ReportRow row_from_result(const TestResult& r, std::string note = {}) {
    ReportRow row;
    row.test = r.name;
    row.statistic = r.statistic;
    row.p_value = r.p_value;
    row.critical_values = r.critical_values;
    row.tail = r.tail;
    row.reject = r.reject;
    row.note = std::move(note);
    return row;
}

std::string accept_note(const SimesDecision& d) {
    std::string note = "accept:";
    const char* levels[] = {" 1%=", " 5%=", " 10%="};
    for (std::size_t i = 0; i < 3; ++i) {
        note += levels[i];
        note += d.accept[i] ? "yes" : "no";
    }
    return note;
}

std::string branch_note(const ComboFamilyResult& r) {
    std::string note = r.dependence_branch ? "branch=adjusted" : "branch=independent";
    note += " cd_p=" + fmt(r.cd_pvalue, 4);
    return note;
}

/// Runs one registry entry against the panel, appending one row per statistic
/// the entry produces. Failures become rows carrying the error text.
void run_test(const std::string& name, const Panel& panel, tables::TableCache& cache,
              const RunConfig& config, std::vector<ReportRow>& rows) {
    AdfSpec adf;
    adf.det = Deterministics::constant;
    adf.rule = config.lag_criterion == "aic" ? LagRule::aic_selected : LagRule::fixed;
    adf.max_lag = config.max_lag;
    adf.fixed_lag = config.fixed_lag;

    ComboSpec combo;
    combo.adf = adf;
    combo.cadf.det = Deterministics::constant;
    combo.cadf.max_lag_y = config.max_lag;
    combo.cadf.max_lag_x = std::max(1, config.max_lag);
    combo.cd_threshold = config.cd_threshold;

    std::vector<std::string> sub_names = {name};
    if (name == "moon_perron") sub_names = {"mp_ta", "mp_tb"};
    if (name == "choi2006") sub_names = {"pm", "z", "lstar"};

    try {
        if (name == "mw") {
            rows.push_back(row_from_result(mw_test(panel, cache, adf)));
        } else if (name == "choi_z") {
            rows.push_back(row_from_result(choi_z_test(panel, cache, adf)));
        } else if (name == "llc") {
            rows.push_back(row_from_result(llc_test(panel, cache, LrvSpec{}, config.max_lag)));
        } else if (name == "ips") {
            rows.push_back(row_from_result(ips_test(panel, cache, adf)));
        } else if (name == "moon_perron") {
            const MoonPerronResult mp = moon_perron_test(panel, config.mp_factors);
            const std::string note = "factors=" + std::to_string(mp.k);
            rows.push_back(row_from_result(mp.t_a, note));
            rows.push_back(row_from_result(mp.t_b, note));
        } else if (name == "cips") {
            rows.push_back(row_from_result(cips_test(panel, adf), "cv=embedded"));
        } else if (name == "choi2006") {
            const Choi2006Result ch = choi2006_tests(panel, cache, config.max_lag);
            rows.push_back(row_from_result(ch.pm));
            rows.push_back(row_from_result(ch.z));
            rows.push_back(row_from_result(ch.lstar));
        } else if (name == "padf" || name == "pcadf" || name == "pcadf_pc") {
            const UnitPvalueKind kind = name == "padf"     ? UnitPvalueKind::adf
                                        : name == "pcadf"  ? UnitPvalueKind::cadf_mean_others
                                                           : UnitPvalueKind::cadf_first_pc;
            const ComboFamilyResult r = combination_test(panel, kind, cache, combo);
            rows.push_back(row_from_result(r.combined, branch_note(r)));
        } else if (name == "sadf" || name == "scadf" || name == "scadf_pc") {
            const UnitPvalueKind kind = name == "sadf"     ? UnitPvalueKind::adf
                                        : name == "scadf"  ? UnitPvalueKind::cadf_mean_others
                                                           : UnitPvalueKind::cadf_first_pc;
            const SimesFamilyResult r = simes_family_test(panel, kind, cache, combo);
            ReportRow row;
            row.test = name;
            row.reject = std::array<bool, 3>{!r.decision.accept[0], !r.decision.accept[1],
                                             !r.decision.accept[2]};
            row.note = accept_note(r.decision);
            rows.push_back(std::move(row));
        } else if (name == "cd") {
            rows.push_back(row_from_result(cross_section_dependence(panel, adf)));
        } else {
            throw ConfigError("unknown test '" + name + "'");
        }
    } catch (const Error& e) {
        for (const auto& sub : sub_names) {
            ReportRow row;
            row.test = sub;
            row.error = e.what();
            rows.push_back(std::move(row));
        }
    }
}

std::string window_string(const Panel& panel) {
    return panel.times().front().str() + ".." + panel.times().back().str();
}

ReportSection make_section(std::string label, std::string mode, std::string benchmark,
                           Panel panel, tables::TableCache& cache, const RunConfig& config) {
    ReportSection s;
    s.label = std::move(label);
    s.mode = std::move(mode);
    s.benchmark = std::move(benchmark);
    s.window = window_string(panel);
    s.summary = summary_stats(panel);
    for (const auto& name : selected_tests(config)) {
        run_test(name, panel, cache, config, s.rows);
    }
    s.panel = std::move(panel);
    return s;
}

}  // namespace

Report run(const RunConfig& config) {
    validate(config);
    tables::TableCache cache(config.cache_dir, config.seed, config.reps, config.threads);
    const Window window{config.window_first, config.window_last};

    Report report;
    auto meta = [&](const std::string& k, const std::string& v) {
        report.metadata.emplace_back(k, v);
    };
    meta("input", config.input);
    meta("input_kind", config.input_kind);
    if (config.input_kind == "raw") {
        std::string modes, benches;
        for (const auto& m : config.modes) {
            modes += (modes.empty() ? "" : ",") + std::string(to_string(m));
        }
        for (const auto& b : config.benchmarks) {
            benches += (benches.empty() ? "" : ",") + std::string(to_string(b));
        }
        meta("modes", modes);
        meta("benchmarks", benches);
        meta("horizon", std::to_string(config.horizon));
        meta("leave_one_out", config.leave_one_out ? "true" : "false");
        meta("benchmark_unit", config.benchmark_unit);
    }
    meta("window_first", config.window_first ? config.window_first->str() : "unbounded");
    meta("window_last", config.window_last ? config.window_last->str() : "unbounded");
    std::string tests;
    for (const auto& t : selected_tests(config)) tests += (tests.empty() ? "" : ",") + t;
    meta("tests", tests);
    meta("max_lag", std::to_string(config.max_lag));
    meta("lag_criterion", config.lag_criterion);
    if (config.lag_criterion == "fixed") meta("fixed_lag", std::to_string(config.fixed_lag));
    meta("cd_threshold", fmt(config.cd_threshold, 4));
    meta("mp_factors", config.mp_factors == 0 ? "auto" : std::to_string(config.mp_factors));
    meta("seed", std::to_string(config.seed));
    meta("reps", std::to_string(config.reps));
    meta("threads", config.threads == 0 ? "auto" : std::to_string(config.threads));
    meta("cache_dir", config.cache_dir);
    meta("out_dir", config.out_dir);
    meta("format", config.format);

    if (config.input_kind == "panel") {
        Panel panel = apply_window(load_panel_csv(config.input), window);
        require_balanced(panel);
        report.sections.push_back(
            make_section("panel", "-", "-", std::move(panel), cache, config));
        return report;
    }

    const std::vector<RawSeries> raw = load_csv(config.input);
    std::vector<const RawSeries*> cpi_series, rate_series;
    for (const auto& s : raw) {
        (s.variable == Variable::cpi ? cpi_series : rate_series).push_back(&s);
    }

    for (const InflationMode mode : config.modes) {
        // Real rates depend on the expectation proxy but not on the benchmark.
        std::vector<RawSeries> real;
        real.reserve(rate_series.size());
        for (const RawSeries* rate : rate_series) {
            const auto cpi = std::find_if(cpi_series.begin(), cpi_series.end(),
                                          [&](const RawSeries* c) { return c->unit == rate->unit; });
            if (cpi == cpi_series.end()) {
                throw DataError("unit '" + rate->unit + "' has rates but no price series");
            }
            real.push_back(
                compute_real_rate(*rate, compute_inflation(**cpi, config.horizon), mode));
        }
        const Panel rates = align_panel(real, Variable::rate, window);
        require_balanced(rates);

        for (const Benchmark benchmark : config.benchmarks) {
            RirdSpec spec;
            spec.mode = mode;
            spec.benchmark = benchmark;
            spec.horizon = config.horizon;
            spec.leave_one_out = config.leave_one_out;
            spec.benchmark_unit = config.benchmark_unit;
            RirdPanel rird = compute_rird(rates, spec);
            const std::string label =
                std::string(to_string(mode)) + "/" + to_string(benchmark);
            report.sections.push_back(make_section(label, to_string(mode),
                                                   to_string(benchmark),
                                                   std::move(rird.panel), cache, config));
        }
    }
    return report;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void render_row_csv(std::ostream& out, const ReportSection& s, const ReportRow& r) {
    out << csv_escape(s.label) << ',' << s.mode << ',' << s.benchmark << ',' << s.window << ','
        << r.test << ',';
    out << (r.statistic ? fmt(*r.statistic, 6) : "") << ',';
    out << (r.p_value ? fmt(*r.p_value, 6) : "") << ',';
    if (r.critical_values) {
        out << fmt(r.critical_values->pct1, 4) << ',' << fmt(r.critical_values->pct5, 4) << ','
            << fmt(r.critical_values->pct10, 4) << ',';
    } else {
        out << ",,,";
    }
    out << (r.tail ? to_string(*r.tail) : "") << ',';
    if (r.reject) {
        out << ((*r.reject)[0] ? 1 : 0) << ',' << ((*r.reject)[1] ? 1 : 0) << ','
            << ((*r.reject)[2] ? 1 : 0) << ',';
    } else {
        out << ",,,";
    }
    out << csv_escape(r.note) << ',' << csv_escape(r.error) << '\n';
}

}  // namespace

std::string render_csv(const Report& report) {
    std::ostringstream out;
    for (const auto& [k, v] : report.metadata) {
        out << "# " << k << "=" << v << '\n';
    }
    out << "section,mode,benchmark,window,test,statistic,p_value,cv_1pct,cv_5pct,cv_10pct,"
           "tail,reject_1pct,reject_5pct,reject_10pct,note,error\n";
    for (const auto& s : report.sections) {
        for (const auto& r : s.rows) render_row_csv(out, s, r);
    }
    return out.str();
}

std::string render_markdown(const Report& report) {
    std::ostringstream out;
    out << "# Panel unit root report\n\n## Parameters\n\n| key | value |\n|---|---|\n";
    for (const auto& [k, v] : report.metadata) {
        out << "| " << k << " | " << v << " |\n";
    }
    for (const auto& s : report.sections) {
        out << "\n## " << s.label << " (window " << s.window << ")\n\n";
        out << "### Summary\n\n| unit | n | min | max | mean | sd |\n|---|---|---|---|---|---|\n";
        for (const auto& row : s.summary) {
            out << "| " << row.unit << " | " << row.n << " | " << fmt(row.min, 4) << " | "
                << fmt(row.max, 4) << " | " << fmt(row.mean, 4) << " | " << fmt(row.sd, 4)
                << " |\n";
        }
        out << "\n### Results\n\n| test | statistic | p-value | cv 1% | cv 5% | cv 10% | tail |"
               " reject 1% | reject 5% | reject 10% | note | error |\n"
               "|---|---|---|---|---|---|---|---|---|---|---|---|\n";
        for (const auto& r : s.rows) {
            out << "| " << r.test << " | " << (r.statistic ? fmt(*r.statistic, 6) : "-") << " | "
                << (r.p_value ? fmt(*r.p_value, 6) : "-") << " | ";
            if (r.critical_values) {
                out << fmt(r.critical_values->pct1, 4) << " | "
                    << fmt(r.critical_values->pct5, 4) << " | "
                    << fmt(r.critical_values->pct10, 4) << " | ";
            } else {
                out << "- | - | - | ";
            }
            out << (r.tail ? to_string(*r.tail) : "-") << " | ";
            if (r.reject) {
                out << ((*r.reject)[0] ? "yes" : "no") << " | "
                    << ((*r.reject)[1] ? "yes" : "no") << " | "
                    << ((*r.reject)[2] ? "yes" : "no") << " | ";
            } else {
                out << "- | - | - | ";
            }
            out << (r.note.empty() ? "-" : r.note) << " | " << (r.error.empty() ? "-" : r.error)
                << " |\n";
        }
    }
    return out.str();
}

namespace {

std::string section_file_label(const std::string& label) {
    std::string out;
    for (const char c : label) out += c == '/' ? '_' : c;
    return out;
}

}  // namespace

std::vector<std::string> write_report(const Report& report, const RunConfig& config) {
    std::filesystem::create_directories(config.out_dir);
    const std::filesystem::path dir(config.out_dir);
    std::vector<std::string> written;

    auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = (dir / name).string();
        std::ofstream out(path, std::ios::trunc | std::ios::binary);
        if (!out) throw DataError("cannot write '" + path + "'");
        out << content;
        if (!out) throw DataError("write to '" + path + "' failed");
        written.push_back(path);
    };

    if (config.format == "csv" || config.format == "both") {
        emit("report.csv", render_csv(report));
    }
    if (config.format == "markdown" || config.format == "both") {
        emit("report.md", render_markdown(report));
    }

    for (const auto& s : report.sections) {
        const std::string label = section_file_label(s.label);
        std::ostringstream summary;
        summary << "unit,n,min,max,mean,sd\n";
        for (const auto& row : s.summary) {
            summary << row.unit << ',' << row.n << ',' << fmt(row.min, 6) << ','
                    << fmt(row.max, 6) << ',' << fmt(row.mean, 6) << ',' << fmt(row.sd, 6)
                    << '\n';
        }
        emit("summary_" + label + ".csv", summary.str());

        const std::string panel_path = (dir / ("panel_" + label + ".csv")).string();
        save_panel_csv(s.panel, panel_path);
        written.push_back(panel_path);
    }
    return written;
}

}  // namespace purt
