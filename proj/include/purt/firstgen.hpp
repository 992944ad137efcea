#pragma once

#include "purt/dist_tables.hpp"
#include "purt/panel.hpp"
#include "purt/test_result.hpp"

namespace purt {

/// Fisher combination of per-unit ADF p-values: P = -2 sum ln(pi_i), compared
/// right-tailed against chi-squared(2N). Per-unit regressions are constant
/// case; p-values come from simulated t tables at each unit's (T, lag).
[[nodiscard]] TestResult mw_test(const Panel& panel, tables::TableCache& cache,
                                 const AdfSpec& spec = {});

/// Standardized Fisher statistic Z = sqrt(N) (P/(2N) - 1) ... expressed as
/// sqrt(N) (P/N - 2) / 2, compared right-tailed against N(0,1). Shares the
/// per-unit p-values with mw_test.
[[nodiscard]] TestResult choi_z_test(const Panel& panel, tables::TableCache& cache,
                                     const AdfSpec& spec = {});

/// Pooled panel unit root t-test with no deterministic terms: per-unit lag
/// orders by AIC, two auxiliary projections, standardization by per-unit
/// regression error and long-run variance ratios, pooled slope t, then the
/// simulated mean/std adjustments. Left tail against N(0,1). Requires a
/// balanced panel.
[[nodiscard]] TestResult llc_test(const Panel& panel, tables::TableCache& cache,
                                  const LrvSpec& lrv = {}, int max_lag = 5);

/// Group-mean t-bar test: average of per-unit constant-case ADF t-statistics,
/// standardized with simulated E(t) and Var(t) at each unit's (T, lag).
/// Left tail against N(0,1).
[[nodiscard]] TestResult ips_test(const Panel& panel, tables::TableCache& cache,
                                  const AdfSpec& spec = {});

}  // namespace purt
