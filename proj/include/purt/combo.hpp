#pragma once

#include <array>
#include <vector>

#include "purt/dist_tables.hpp"
#include "purt/panel.hpp"
#include "purt/test_result.hpp"

namespace purt {

/// p-values clamped away from 0/1 and their probits. The clamp keeps every
/// probit finite; combination statistics are computed from these.
struct ProbitVector {
    std::vector<double> p;       // clamped to [1e-6, 1 - 1e-6]
    std::vector<double> probit;  // normal_quantile of the clamped p
};

[[nodiscard]] ProbitVector make_probits(const std::vector<double>& pvalues);

/// Inverse-normal combination Z = (1/sqrt(N)) sum probit(p_i), left-tailed
/// N(0,1). Valid when the underlying p-values are independent.
[[nodiscard]] TestResult inverse_normal_combination(const std::vector<double>& pvalues);

/// Moment estimator of the common probit correlation:
///   theta_hat  = 1 - (N-1)^{-1} sum (probit_i - probit_bar)^2
///   theta_star = max(-1/(N-1), theta_hat)
[[nodiscard]] double probit_correlation(const std::vector<double>& probits);
[[nodiscard]] double probit_correlation_floor(double theta_hat, std::size_t n);

/// Correlation-corrected inverse normal with known correlation theta:
///   Z = sum probit_i / sqrt(N (1 + (N-1) theta)), left-tailed N(0,1).
/// Requires 1 + (N-1) theta > 0.
[[nodiscard]] TestResult correlated_inverse_normal(const std::vector<double>& pvalues,
                                                   double theta);

/// Feasible correlation-corrected combination: plugs in theta_star plus the
/// small-sample inflation kappa sqrt(2/(N+1)) (1 - theta_star), kappa = 0.2.
/// Left-tailed N(0,1); robust to cross-sectionally dependent p-values.
[[nodiscard]] TestResult adjusted_inverse_normal(const std::vector<double>& pvalues,
                                                 double kappa = 0.2);

/// Step-up multiple-comparison decision on the joint null: reject at level a
/// iff any sorted p_(i) <= i a / N. accept[] follows the reporting convention
/// TRUE = joint null not rejected.
struct SimesDecision {
    std::array<bool, 3> accept{true, true, true};            // at 1%, 5%, 10%
    std::vector<double> sorted_p;
    std::array<std::vector<double>, 3> thresholds;            // i*a/N per level
};

[[nodiscard]] SimesDecision simes_test(const std::vector<double>& pvalues);

/// Cross-section dependence statistic: scaled sum of pairwise correlations of
/// per-unit ADF residuals (constant case, AIC lags), two-sided against N(0,1).
/// Residual pairs are aligned by month and correlated over their overlap.
[[nodiscard]] TestResult cross_section_dependence(const Panel& panel, const AdfSpec& spec = {});

/// Which per-unit p-value feeds the combination machinery.
enum class UnitPvalueKind {
    adf,             // plain constant-case ADF, simulated finite-T p-values
    cadf_mean_others,// covariate ADF, covariate = mean of the other units' differences
    cadf_first_pc    // covariate ADF, covariate = first PC of the differenced, standardized panel
};

[[nodiscard]] const char* to_string(UnitPvalueKind k) noexcept;

struct ComboSpec {
    AdfSpec adf;                  // per-unit ADF and the CD pre-test
    CadfSpec cadf;                // covariate-augmented fits
    double cd_threshold = 0.10;   // dependence pre-test p-value cut
};

/// Per-unit p-values of the requested kind. cadf_first_pc requires a balanced
/// panel (the shared covariate needs every series).
[[nodiscard]] std::vector<double> unit_pvalues(const Panel& panel, UnitPvalueKind kind,
                                               tables::TableCache& cache,
                                               const ComboSpec& spec = {});

/// Dependence-branched combination: runs the CD pre-test on plain ADF
/// residuals, then combines the per-unit p-values with the
/// correlation-adjusted statistic when CD's p-value falls below the
/// threshold and with the plain inverse normal otherwise. The branch taken
/// and the CD p-value are recorded in the result's diagnostics.
struct ComboFamilyResult {
    TestResult combined;
    std::vector<double> pvalues;      // per unit, clamped
    bool dependence_branch = false;   // true = correlation-adjusted combination
    double cd_stat = 0.0;
    double cd_pvalue = 1.0;
};

[[nodiscard]] ComboFamilyResult combination_test(const Panel& panel, UnitPvalueKind kind,
                                                 tables::TableCache& cache,
                                                 const ComboSpec& spec = {});

/// Same per-unit p-values pushed through the step-up decision instead.
struct SimesFamilyResult {
    SimesDecision decision;
    std::vector<double> pvalues;
};

[[nodiscard]] SimesFamilyResult simes_family_test(const Panel& panel, UnitPvalueKind kind,
                                                  tables::TableCache& cache,
                                                  const ComboSpec& spec = {});

}  // namespace purt
