#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "purt/dist_tables.hpp"
#include "purt/panel.hpp"
#include "purt/synthetic.hpp"

namespace testutil {

/// Balanced panel from literal rows (one per unit). Units are named
/// "U1".."Un"; the month axis starts at 2000-01.
inline purt::Panel make_panel(const std::vector<std::vector<double>>& rows) {
    std::vector<std::string> units;
    for (std::size_t i = 1; i <= rows.size(); ++i) units.push_back("U" + std::to_string(i));
    std::vector<purt::MonthIndex> times;
    for (std::size_t t = 0; t < rows.front().size(); ++t) {
        times.push_back(purt::MonthIndex{2000, 1}.plus(static_cast<int>(t)));
    }
    purt::Panel panel(units, times);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t t = 0; t < rows[i].size(); ++t) panel.set(i, t, rows[i][t]);
    }
    return panel;
}

inline purt::Panel rw_panel(std::size_t n_units, std::size_t n_times, std::uint64_t seed) {
    purt::DgpSpec spec;
    spec.dgp = purt::Dgp::random_walk;
    spec.n_units = n_units;
    spec.n_times = n_times;
    spec.seed = seed;
    return purt::gen_panel(spec);
}

inline purt::Panel ar1_panel(std::size_t n_units, std::size_t n_times, std::uint64_t seed,
                             double root = 0.8) {
    purt::DgpSpec spec;
    spec.dgp = purt::Dgp::ar1;
    spec.n_units = n_units;
    spec.n_times = n_times;
    spec.seed = seed;
    spec.ar_root = root;
    return purt::gen_panel(spec);
}

/// Self-cleaning scratch directory unique to one test.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static std::atomic<unsigned> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("purt-test-" + std::to_string(counter.fetch_add(1)) + "-" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

/// One table cache for the whole test binary, so distribution tables are
/// simulated once and reused by every suite. Lives in its own scratch dir.
inline purt::tables::TableCache& shared_cache() {
    static TempDir dir;
    static purt::tables::TableCache cache(dir.path.string(), 42, 10000);
    return cache;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace testutil
