#pragma once

#include <cstdint>
#include <string>

#include "purt/panel.hpp"

namespace purt {

/// Data-generating processes for calibration and synthetic panels.
enum class Dgp {
    random_walk,  // independent driftless random walks (joint unit root null)
    ar1,          // independent stationary AR(1) around zero
    factor        // random walks driven by one common factor plus noise
};

[[nodiscard]] Dgp dgp_from_string(const std::string& s);
[[nodiscard]] const char* to_string(Dgp d) noexcept;

struct DgpSpec {
    Dgp dgp = Dgp::random_walk;
    std::size_t n_units = 10;
    std::size_t n_times = 148;
    std::uint64_t seed = 42;
    double ar_root = 0.8;        // ar1 only
    double factor_share = 0.5;   // factor only: weight of the common shock
    MonthIndex start{2000, 1};
};

/// Simulated panel with units "U01", "U02", ... on a contiguous month axis.
[[nodiscard]] Panel gen_panel(const DgpSpec& spec);

/// Writes a synthetic long-format macro file (cpi and rate for units
/// "C01".."Cnn" plus the benchmark unit "EA") that exercises the full
/// raw-input pipeline.
void gen_raw_macro_csv(const std::string& path, std::size_t n_units, std::size_t n_times,
                       std::uint64_t seed);

}  // namespace purt
