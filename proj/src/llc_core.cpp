#include "purt/detail/llc_core.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "purt/errors.hpp"

namespace purt::detail {

namespace {

// Residual of target on the lag-difference columns over rows t = p+1..T-1.
// With p = 0 there is nothing to project out.
Eigen::VectorXd project_out_lags(std::span<const double> y, int p, bool lagged_level) {
    const auto T = static_cast<int>(y.size());
    const int n = T - 1 - p;
    Eigen::VectorXd target(n);
    for (int t = p + 1; t < T; ++t) {
        target(t - p - 1) = lagged_level ? y[t - 1] : y[t] - y[t - 1];
    }
    if (p == 0) return target;

    Eigen::MatrixXd lags(n, p);
    for (int t = p + 1; t < T; ++t) {
        for (int j = 1; j <= p; ++j) {
            lags(t - p - 1, j - 1) = y[t - j] - y[t - j - 1];
        }
    }
    // Plain least squares projection; the lag matrix is small and well
    // conditioned whenever the series is not degenerate.
    const Eigen::VectorXd beta =
        (lags.transpose() * lags).ldlt().solve(lags.transpose() * target);
    return target - lags * beta;
}

}  // namespace

LlcUnit llc_unit_block(std::span<const double> y, int max_lag, const LrvSpec& lrv) {
    AdfSpec spec;
    spec.det = Deterministics::none;
    spec.rule = LagRule::aic_selected;
    spec.max_lag = max_lag;
    const int p = adf_fit(y, spec).lag;

    LlcUnit unit;
    unit.lag = p;
    Eigen::VectorXd e = project_out_lags(y, p, false);
    Eigen::VectorXd v = project_out_lags(y, p, true);
    unit.n = static_cast<std::size_t>(e.size());

    // Second-stage slope of e on v scales both pieces to unit error variance.
    const double vv = v.squaredNorm();
    if (vv <= 0.0) throw DegenerateInputError("pooled-test unit block: level residual is zero");
    const double delta = e.dot(v) / vv;
    const Eigen::VectorXd resid = e - delta * v;
    const double sigma_eps2 = resid.squaredNorm() / static_cast<double>(unit.n);
    if (sigma_eps2 <= 0.0) throw DegenerateInputError("pooled-test unit block: zero error variance");
    unit.sigma_eps = std::sqrt(sigma_eps2);
    unit.e_tilde = e / unit.sigma_eps;
    unit.v_tilde = v / unit.sigma_eps;

    // Long-run deviation of the differences over the full sample.
    const auto T = y.size();
    std::vector<double> dy(T - 1);
    for (std::size_t t = 1; t < T; ++t) dy[t - 1] = y[t] - y[t - 1];
    const double w2 = long_run_variance(dy, lrv);
    if (w2 <= 0.0) throw DegenerateInputError("pooled-test unit block: long-run variance <= 0");
    unit.s_ratio = std::sqrt(w2) / unit.sigma_eps;
    return unit;
}

LlcPooled llc_pool(const std::vector<LlcUnit>& units) {
    if (units.empty()) throw DegenerateInputError("pooled test needs at least one unit");
    double sum_ev = 0.0, sum_vv = 0.0;
    std::size_t total = 0;
    for (const auto& u : units) {
        sum_ev += u.e_tilde.dot(u.v_tilde);
        sum_vv += u.v_tilde.squaredNorm();
        total += u.n;
    }
    if (sum_vv <= 0.0) throw DegenerateInputError("pooled test: zero pooled level variation");

    LlcPooled pooled;
    pooled.rho = sum_ev / sum_vv;
    double rss = 0.0;
    for (const auto& u : units) {
        rss += (u.e_tilde - pooled.rho * u.v_tilde).squaredNorm();
    }
    pooled.sigma_eps2 = rss / static_cast<double>(total);
    pooled.se_rho = std::sqrt(pooled.sigma_eps2 / sum_vv);
    pooled.t_rho = pooled.rho / pooled.se_rho;

    const auto N = static_cast<double>(units.size());
    pooled.t_bar = static_cast<double>(total) / N;
    double s_sum = 0.0;
    for (const auto& u : units) s_sum += u.s_ratio;
    pooled.s_bar = s_sum / N;

    pooled.correction =
        N * pooled.t_bar * pooled.s_bar * pooled.se_rho / pooled.sigma_eps2;
    return pooled;
}

}  // namespace purt::detail
