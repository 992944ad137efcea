#pragma once

#include <Eigen/Core>
#include <span>

#include "purt/panel.hpp"

namespace purt {

enum class Deterministics { none, constant };

[[nodiscard]] const char* to_string(Deterministics d) noexcept;

enum class LagRule { aic_selected, fixed };

struct AdfSpec {
    Deterministics det = Deterministics::constant;
    LagRule rule = LagRule::aic_selected;
    int max_lag = 5;   // aic_selected: candidate orders 0..max_lag
    int fixed_lag = 0; // fixed: this order exactly
};

/// Ordinary least squares fit. X must have full column rank; a rank-deficient
/// design throws SingularityError rather than falling back to a pseudo-inverse.
struct OlsFit {
    Eigen::VectorXd coef;
    Eigen::VectorXd stderr_;
    Eigen::VectorXd residuals;
    double rss = 0.0;
    double sigma2 = 0.0;  // rss / (n - k)
    std::size_t n = 0;
    std::size_t k = 0;
};

[[nodiscard]] OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// Augmented Dickey-Fuller regression
///   dy_t = [alpha] + rho * y_{t-1} + sum_{k=1..p} beta_k dy_{t-k} + e_t
/// t_stat is the t-ratio on rho. Under aic_selected, candidates p = 0..max_lag
/// are compared on the common sample (first max_lag+1 observations dropped for
/// every candidate) with AIC = n ln(RSS/n) + 2k, ties to the smaller p; the
/// returned fit is then re-estimated at the chosen order on its own maximal
/// sample, which is also how the simulated t tables are constructed.
struct AdfFit {
    double t_stat = 0.0;
    double rho = 0.0;     // coefficient on y_{t-1}
    double rho_se = 0.0;
    int lag = 0;
    std::size_t n_obs = 0;
    double rss = 0.0;
    double aic = 0.0;     // at the returned fit's own sample
    Deterministics det = Deterministics::constant;
    Eigen::VectorXd residuals;
};

[[nodiscard]] AdfFit adf_fit(std::span<const double> y, const AdfSpec& spec);

/// Local-to-unity GLS detrending of the constant case: quasi-difference at
/// alpha_bar = 1 + c_bar/T, regress on the quasi-differenced constant, and
/// remove the fitted level. c_bar = -T degenerates to plain demeaning.
[[nodiscard]] std::vector<double> gls_detrend(std::span<const double> y, double c_bar = -7.0);

/// Subtracts the cross-section mean at every month. Requires a balanced panel.
[[nodiscard]] Panel demean_cross_section(const Panel& panel);

/// Bartlett-kernel long-run variance settings. bandwidth < 0 selects the
/// automatic rule floor(4 (T/100)^{2/9}).
struct LrvSpec {
    int bandwidth = -1;
};

[[nodiscard]] int bartlett_bandwidth(std::size_t n) noexcept;

/// omega^2 = gamma_0 + 2 sum_{j=1..m} (1 - j/(m+1)) gamma_j on the demeaned
/// series. White noise gives sigma^2; an MA(1) with parameter b gives
/// sigma^2 (1+b)^2 as m grows.
[[nodiscard]] double long_run_variance(std::span<const double> u, const LrvSpec& spec = {});

/// One-sided Bartlett sum lambda = sum_{j=1..m} (1 - j/(m+1)) gamma_j.
[[nodiscard]] double one_sided_long_run_cov(std::span<const double> u, const LrvSpec& spec = {});

/// Bartlett long-run covariance of two equal-length series.
[[nodiscard]] double long_run_covariance(std::span<const double> u, std::span<const double> v,
                                         const LrvSpec& spec = {});

/// Covariate-augmented Dickey-Fuller regression
///   dy_t = [alpha] + rho y_{t-1} + sum_{k=1..p_y} a_k dy_{t-k}
///                 + sum_{j=1..p_x} b_j x_{t-j} + e_t
/// where x is a stationary covariate indexed so that x[s] is contemporaneous
/// with dy[s] (both at time s+1 of y). Orders (p_y in 0..max_lag_y,
/// p_x in 1..max_lag_x) are chosen jointly by AIC on the common sample, then
/// the fit is re-estimated on the chosen orders' maximal sample.
///
/// rho2 is the squared long-run correlation between the regression error and
/// the covariate-driven innovation v_t = fitted covariate part + residual,
/// estimated with the Bartlett kernel and clamped to [0, 1]. The p-value
/// surface for these t-stats is keyed to this same estimator.
struct CadfFit {
    double t_stat = 0.0;
    double rho = 0.0;
    double rho_se = 0.0;
    double rho2 = 1.0;
    int lag_y = 0;
    int lag_x = 1;
    std::size_t n_obs = 0;
    Deterministics det = Deterministics::constant;
    Eigen::VectorXd residuals;
};

struct CadfSpec {
    Deterministics det = Deterministics::constant;
    int max_lag_y = 5;
    int max_lag_x = 5;
    LrvSpec lrv;
};

[[nodiscard]] CadfFit cadf_fit(std::span<const double> y, std::span<const double> x,
                               const CadfSpec& spec);

}  // namespace purt
