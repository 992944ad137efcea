#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "purt/csv.hpp"
#include "purt/dist_tables.hpp"
#include "purt/errors.hpp"
#include "purt/report.hpp"
#include "purt/synthetic.hpp"

namespace {

purt::Deterministics det_from_string(const std::string& s) {
    if (s == "none") return purt::Deterministics::none;
    if (s == "constant") return purt::Deterministics::constant;
    throw purt::ConfigError("deterministic case must be 'none' or 'constant'");
}

int cmd_run(const std::string& config_path, const std::string& input_override,
            const std::string& out_dir_override, const std::string& cache_dir_override,
            const std::string& format_override, bool print) {
    purt::RunConfig config = purt::load_config(config_path);
    if (!input_override.empty()) config.input = input_override;
    if (!out_dir_override.empty()) config.out_dir = out_dir_override;
    if (!cache_dir_override.empty()) config.cache_dir = cache_dir_override;
    if (!format_override.empty()) config.format = format_override;
    purt::validate(config);

    const purt::Report report = purt::run(config);
    for (const auto& file : purt::write_report(report, config)) {
        std::cout << "wrote " << file << '\n';
    }
    if (print) std::cout << purt::render_csv(report);
    return 0;
}

int cmd_simulate(const std::string& family, const std::string& det_s, int t_len, int lag,
                 int max_lag, const std::string& cache_dir, std::uint64_t seed,
                 std::uint64_t reps, unsigned threads) {
    const purt::Deterministics det = det_from_string(det_s);
    purt::tables::TableCache cache(cache_dir, seed, reps, threads);
    if (family == "df") {
        const auto& table = cache.df_table(det, t_len, lag);
        std::cout << "cached " << table.key() << '\n';
    } else if (family == "surface") {
        const auto& table = cache.hansen_surface(det);
        std::cout << "cached " << table.key() << '\n';
    } else if (family == "ips") {
        const auto m = cache.ips_moments(t_len, lag);
        std::cout << "cached ips_moments T=" << t_len << " p=" << lag << " mean=" << m.mean_t
                  << " var=" << m.var_t << '\n';
    } else if (family == "llc") {
        const auto a = cache.llc_adjustments(t_len, max_lag);
        std::cout << "cached llc_adjustments T=" << t_len << " mu=" << a.mu_star
                  << " sigma=" << a.sigma_star << '\n';
    } else {
        throw purt::ConfigError("family must be df, surface, ips, or llc");
    }
    return 0;
}

int cmd_gen(const std::string& kind, const std::string& out, const std::string& dgp_s,
            std::size_t units, std::size_t times, std::uint64_t seed) {
    if (kind == "panel") {
        purt::DgpSpec spec;
        spec.dgp = purt::dgp_from_string(dgp_s);
        spec.n_units = units;
        spec.n_times = times;
        spec.seed = seed;
        purt::save_panel_csv(purt::gen_panel(spec), out);
    } else if (kind == "raw") {
        purt::gen_raw_macro_csv(out, units, times, seed);
    } else {
        throw purt::ConfigError("kind must be 'panel' or 'raw'");
    }
    std::cout << "wrote " << out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Panel unit root testing toolkit"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run the configured test battery on an input file");
    std::string config_path, input_override, out_dir_override, cache_dir_override;
    std::string format_override;
    bool print = false;
    run->add_option("-c,--config", config_path, "JSON configuration file")->required();
    run->add_option("--input", input_override, "Override the configured input path");
    run->add_option("--out-dir", out_dir_override, "Override the configured output directory");
    run->add_option("--cache-dir", cache_dir_override, "Override the table cache directory");
    run->add_option("--format", format_override, "Override the report format");
    run->add_flag("--print", print, "Echo the CSV report to stdout");

    auto* sim = app.add_subcommand("simulate-tables", "Pre-build simulated distribution tables");
    std::string family = "df", det_s = "constant", sim_cache = "table-cache";
    int t_len = 148, lag = 0, sim_max_lag = 5;
    std::uint64_t sim_seed = 42, sim_reps = 20000;
    unsigned sim_threads = 0;
    sim->add_option("--family", family, "df, surface, ips, or llc");
    sim->add_option("--det", det_s, "Deterministic case: none or constant");
    sim->add_option("--length", t_len, "Series length T");
    sim->add_option("--lag", lag, "Augmentation lag");
    sim->add_option("--max-lag", sim_max_lag, "Lag search bound (llc family)");
    sim->add_option("--cache-dir", sim_cache, "Table cache directory");
    sim->add_option("--seed", sim_seed, "Master seed");
    sim->add_option("--reps", sim_reps, "Replications");
    sim->add_option("--threads", sim_threads, "Worker threads (0 = hardware)");

    auto* gen = app.add_subcommand("gen-synthetic", "Generate synthetic input files");
    std::string kind = "panel", out = "synthetic.csv", dgp_s = "random_walk";
    std::size_t units = 10, times = 148;
    std::uint64_t gen_seed = 42;
    gen->add_option("--kind", kind, "panel (date,unit,rird) or raw (cpi/rate long format)");
    gen->add_option("-o,--out", out, "Output path");
    gen->add_option("--dgp", dgp_s, "random_walk, ar1, or factor (panel kind)");
    gen->add_option("--units", units, "Number of units");
    gen->add_option("--times", times, "Number of months");
    gen->add_option("--seed", gen_seed, "Seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(run)) {
            return cmd_run(config_path, input_override, out_dir_override, cache_dir_override,
                           format_override, print);
        }
        if (app.got_subcommand(sim)) {
            return cmd_simulate(family, det_s, t_len, lag, sim_max_lag, sim_cache, sim_seed,
                                sim_reps, sim_threads);
        }
        return cmd_gen(kind, out, dgp_s, units, times, gen_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
