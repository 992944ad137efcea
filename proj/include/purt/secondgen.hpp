#pragma once

#include <Eigen/Core>

#include "purt/dist_tables.hpp"
#include "purt/panel.hpp"
#include "purt/test_result.hpp"

namespace purt {

/// Principal-component factor decomposition of a T x N data matrix.
struct FactorModel {
    Eigen::MatrixXd factors;     // T x k, orthonormal columns
    Eigen::MatrixXd loadings;    // N x k, scaled sqrt(N) eigenvectors
    Eigen::MatrixXd defactored;  // T x N, projection on the loadings' orthocomplement
    Eigen::VectorXd eigenvalues; // all N eigenvalues of X'X, descending
};

/// Extracts the k leading principal components of X (rows = time). Sign
/// convention: each loading column has its largest-magnitude entry positive.
[[nodiscard]] FactorModel extract_factors(const Eigen::MatrixXd& x, int k);

/// Eigenvalue-ratio estimate of the factor count: argmax of consecutive
/// eigenvalue ratios over 1..k_max.
[[nodiscard]] int select_factor_count(const Eigen::MatrixXd& x, int k_max);

/// Pooled factor-corrected unit root statistics. The pooled first-order
/// autoregression is fit without deterministic terms, its residuals are
/// decomposed into k principal-component factors, the data is projected on
/// the loadings' orthocomplement, and the bias-corrected pooled coefficient
/// is standardized two ways (t_a with variance ratios, t_b with the
/// projected data's scale). Both are left-tailed against N(0,1).
struct MoonPerronResult {
    TestResult t_a;
    TestResult t_b;
    double rho_pool = 0.0;       // bias-corrected pooled AR coefficient
    int k = 1;                   // number of factors used
    Eigen::VectorXd eigenvalues;
};

[[nodiscard]] MoonPerronResult moon_perron_test(const Panel& panel, int k = 1,
                                                const LrvSpec& lrv = {});

/// One unit's cross-sectionally augmented ADF regression: the cross-section
/// mean's lagged level and differences enter alongside the unit's own, with
/// the cross-average lag order tied to the own-lag order chosen by AIC.
[[nodiscard]] AdfFit cadf_unit(std::span<const double> y, std::span<const double> ybar,
                               const AdfSpec& spec = {});

/// Mean of the per-unit cross-sectionally augmented t-statistics, compared
/// against embedded left-tail critical values (or a simulated table for
/// panel shapes far from the embedded one). No p-value: the statistic's null
/// law is nonstandard and only critical values are tabulated.
[[nodiscard]] TestResult cips_test(const Panel& panel, const AdfSpec& spec = {},
                                   const tables::QuantileTable* simulated_cvs = nullptr);

/// Cross-sectionally demeaned, GLS-detrended panel p-value combinations:
///   Pm = -(1/sqrt(N)) sum (ln p_i + 1)        right tail
///   Z  = (1/sqrt(N))  sum probit(p_i)         left tail
///   L* = sum logit(p_i) / sqrt(pi^2 N / 3)    left tail
/// Per-unit ADF regressions have no intercept (the GLS step removed levels);
/// p-values are asymptotic, from the no-deterministics t table.
struct Choi2006Result {
    TestResult pm;
    TestResult z;
    TestResult lstar;
};

[[nodiscard]] Choi2006Result choi2006_tests(const Panel& panel, tables::TableCache& cache,
                                            int max_lag = 5, double c_bar = -7.0);

}  // namespace purt
