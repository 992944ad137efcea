#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "purt/adf.hpp"

namespace purt::tables {

/// Right-tail standard normal critical values at 1%, 5%, 10%.
inline constexpr std::array<double, 3> kNormalRightTail = {2.3263, 1.6449, 1.2816};

/// Right-tail chi-squared(20) critical values at 1%, 5%, 10%.
inline constexpr std::array<double, 3> kChiSquared20RightTail = {37.566, 31.410, 28.412};

/// Left-tail critical values of the cross-sectionally augmented panel mean
/// t-statistic, constant case, panel dimensions close to N=10, T=150.
inline constexpr std::array<double, 3> kCipsConstantLeftTail = {-2.5669, -2.3310, -2.2062};

/// p-values are clamped into [kPClamp, 1 - kPClamp] before probits or logits.
inline constexpr double kPClamp = 1e-6;

/// Cache format version; files written by other versions refuse to load.
inline constexpr int kTableVersion = 1;

/// 199 probabilities: 0.005, 0.010, ..., 0.995.
[[nodiscard]] std::vector<double> probability_grid();

/// Empirical quantile table of a simulated null distribution. Plain tables
/// have one quantile row; the covariate-ADF surface has one row per rho^2
/// grid value in `aux`.
struct QuantileTable {
    std::string family;                        // "df_t", "hansen_cadf", "cips"
    std::map<std::string, std::string> params; // deterministic case, T, lag, ...
    std::vector<double> probs;
    std::vector<double> aux;                   // rho^2 grid; empty for plain tables
    std::vector<std::vector<double>> quants;   // quants[aux][prob]; one row if aux empty
    std::uint64_t seed = 0;
    std::uint64_t reps = 0;

    [[nodiscard]] std::string key() const;     // family + params, cache identity
};

struct IpsMoments {
    double mean_t = 0.0;
    double var_t = 1.0;
};

struct LlcAdjustments {
    double mu_star = 0.0;
    double sigma_star = 1.0;
};

/// Dickey-Fuller t-statistic quantiles: driftless random walks of length T,
/// fixed augmentation lag p, given deterministic case. reps >= 10000.
[[nodiscard]] QuantileTable simulate_df_quantiles(Deterministics det, int T, int p,
                                                  std::uint64_t reps, std::uint64_t seed,
                                                  unsigned threads = 0);

/// As simulate_df_quantiles, but with the augmentation lag chosen by AIC up
/// to max_lag inside every replication. Lag selection shifts the null
/// distribution of the t-statistic, so statistics from selected-lag fits
/// must be read against this table, not a fixed-lag one.
[[nodiscard]] QuantileTable simulate_df_quantiles_selected(Deterministics det, int T, int max_lag,
                                                           std::uint64_t reps, std::uint64_t seed,
                                                           unsigned threads = 0);

/// Mean and variance of the constant-case ADF t at (T, p) under the null.
[[nodiscard]] IpsMoments simulate_ips_moments(int T, int p, std::uint64_t reps,
                                              std::uint64_t seed, unsigned threads = 0);

/// Mean/std adjustments for the pooled no-deterministics panel t-statistic,
/// calibrated on single-unit null replications of length T so that the
/// adjusted statistic is standard normal under the null.
[[nodiscard]] LlcAdjustments simulate_llc_adjustments(int T, std::uint64_t reps,
                                                      std::uint64_t seed, int max_lag = 5,
                                                      unsigned threads = 0);

/// Quantiles of the covariate-ADF limit law
///   sqrt(rho2) * DF + sqrt(1 - rho2) * N(0,1)
/// on an 11-point rho^2 grid {0, 0.1, .., 1}, where DF is the discretized
/// Wiener functional of the given deterministic case (steps >= 1000). Common
/// random numbers across grid points keep quantiles monotone in rho^2.
[[nodiscard]] QuantileTable simulate_hansen_surface(Deterministics det, std::uint64_t reps,
                                                    std::uint64_t seed, int steps = 2000,
                                                    unsigned threads = 0);

/// Null quantiles of the mean cross-sectionally-augmented t over N units of
/// length T (constant case), for panels far from the embedded table's shape.
[[nodiscard]] QuantileTable simulate_cips_quantiles(int n_units, int T, std::uint64_t reps,
                                                    std::uint64_t seed, int max_lag = 5,
                                                    unsigned threads = 0);

/// Left-tail p-value by linear interpolation of the empirical CDF. Outside
/// the grid the CDF continues on the probit scale through the two outermost
/// grid points, so tail p-values keep shrinking at a Gaussian-like rate.
/// Clamped to [kPClamp, 1 - kPClamp]. The table must be plain (no aux axis).
[[nodiscard]] double pvalue_from_table(const QuantileTable& table, double stat);

/// Left-tail p-value from the covariate-ADF surface: p-values at the two
/// bracketing rho^2 grid points, blended linearly in rho^2.
[[nodiscard]] double pvalue_from_surface(const QuantileTable& surface, double stat, double rho2);

/// Writes a table as CSV with a metadata header (version, seed, reps,
/// checksum). The write is atomic: temp file then rename.
void store_table(const QuantileTable& table, const std::string& path);

/// Loads a stored table, verifying version and checksum. Round-trips are
/// bit-exact. Throws CacheError on any mismatch.
[[nodiscard]] QuantileTable load_table(const std::string& path);

/// Directory-backed, memoizing table cache. Simulation parameters (seed,
/// reps) are part of every table's identity; changing either produces new
/// cache entries instead of overwriting old ones. Thread-safe.
class TableCache {
public:
    TableCache(std::string dir, std::uint64_t seed, std::uint64_t reps, unsigned threads = 0);

    const QuantileTable& df_table(Deterministics det, int T, int p);
    const QuantileTable& df_table_selected(Deterministics det, int T, int max_lag);
    /// Stand-in for the asymptotic no-deterministics law (T = 1000, lag 0).
    const QuantileTable& df_asymptotic_none();
    const QuantileTable& hansen_surface(Deterministics det);
    IpsMoments ips_moments(int T, int p);
    LlcAdjustments llc_adjustments(int T, int max_lag = 5);

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t reps() const noexcept { return reps_; }
    [[nodiscard]] const std::string& dir() const noexcept { return dir_; }

    /// Number of reps used for the limit-law surface (heavier than the
    /// finite-T tables so the surface edges are tight).
    [[nodiscard]] std::uint64_t surface_reps() const noexcept;

    /// Number of reps used for the pooled-test adjustments; the rejection
    /// rate is sensitive to the scale adjustment, so its estimate gets a
    /// higher floor than the quantile tables.
    [[nodiscard]] std::uint64_t adjustment_reps() const noexcept;

private:
    const QuantileTable& table_for(const std::string& family,
                                   const std::map<std::string, std::string>& params,
                                   std::uint64_t reps,
                                   const std::function<QuantileTable(std::uint64_t)>& simulate);

    std::string dir_;
    std::uint64_t seed_;
    std::uint64_t reps_;
    unsigned threads_;
    std::mutex mutex_;
    std::map<std::string, std::unique_ptr<QuantileTable>> memo_;
};

}  // namespace purt::tables
