#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "purt/adf.hpp"

namespace purt::detail {

/// One unit's standardized building blocks for the pooled no-deterministics
/// panel t-test: residuals of the difference and the lagged level on the lag
/// terms, scaled by the second-stage regression error, plus the ratio of the
/// difference's long-run to short-run standard deviation.
struct LlcUnit {
    Eigen::VectorXd e_tilde;  // standardized difference residuals
    Eigen::VectorXd v_tilde;  // standardized lagged-level residuals
    double s_ratio = 1.0;     // sigma_y / sigma_eps
    double sigma_eps = 1.0;
    int lag = 0;
    std::size_t n = 0;  // effective observations, T - lag - 1
};

[[nodiscard]] LlcUnit llc_unit_block(std::span<const double> y, int max_lag, const LrvSpec& lrv);

/// Pooled regression of the standardized pieces and the scale factor the
/// mean adjustment multiplies.
struct LlcPooled {
    double rho = 0.0;          // pooled slope
    double t_rho = 0.0;        // its t-ratio
    double se_rho = 0.0;
    double sigma_eps2 = 0.0;   // pooled second-stage error variance
    double correction = 0.0;   // N * T_bar * S_bar * se_rho / sigma_eps2
    double t_bar = 0.0;        // average effective sample size
    double s_bar = 0.0;        // average long-run/short-run ratio
};

[[nodiscard]] LlcPooled llc_pool(const std::vector<LlcUnit>& units);

}  // namespace purt::detail
