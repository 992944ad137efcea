#include "purt/adf.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "purt/errors.hpp"
#include "purt/stats.hpp"

namespace purt {

const char* to_string(Deterministics d) noexcept {
    return d == Deterministics::none ? "none" : "constant";
}

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const auto n = static_cast<std::size_t>(X.rows());
    const auto k = static_cast<std::size_t>(X.cols());
    if (y.size() != X.rows()) throw DataError("ols: X and y row counts differ");
    if (n <= k) {
        throw DegenerateInputError("ols: " + std::to_string(n) + " observations for " +
                                   std::to_string(k) + " regressors");
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < static_cast<Eigen::Index>(k)) {
        throw SingularityError("ols: regressor matrix is rank deficient (rank " +
                               std::to_string(qr.rank()) + " of " + std::to_string(k) + ")");
    }

    OlsFit fit;
    fit.n = n;
    fit.k = k;
    fit.coef = qr.solve(y);
    fit.residuals = y - X * fit.coef;
    fit.rss = fit.residuals.squaredNorm();
    fit.sigma2 = fit.rss / static_cast<double>(n - k);

    // (X'X)^{-1} from the pivoted factorization X P = Q R.
    const Eigen::MatrixXd R =
        qr.matrixR().topLeftCorner(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k))
            .triangularView<Eigen::Upper>();
    const Eigen::MatrixXd Rinv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(
            static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)));
    Eigen::MatrixXd cov = Rinv * Rinv.transpose();
    cov = qr.colsPermutation() * cov * qr.colsPermutation().transpose();

    fit.stderr_ = (fit.sigma2 * cov.diagonal().array()).sqrt();
    return fit;
}

namespace {

void check_series(std::span<const double> y, std::size_t t_needed) {
    if (y.size() < t_needed) {
        throw DegenerateInputError("series of length " + std::to_string(y.size()) +
                                   " is too short (need " + std::to_string(t_needed) + ")");
    }
    const double first = y[0];
    const bool constant =
        std::all_of(y.begin(), y.end(), [first](double v) { return v == first; });
    if (constant) throw DegenerateInputError("series has zero variance");
}

struct AdfDesign {
    Eigen::MatrixXd X;
    Eigen::VectorXd dy;
    std::size_t rho_col = 0;  // column of y_{t-1}
};

// Rows are t = t_start .. T-1 of  dy_t on [const] y_{t-1} dy_{t-1..p}.
AdfDesign adf_design(std::span<const double> y, Deterministics det, int p, int t_start) {
    const auto T = static_cast<int>(y.size());
    const int n = T - t_start;
    const int k = (det == Deterministics::constant ? 1 : 0) + 1 + p;
    if (n <= k + 1) {
        throw DegenerateInputError("ADF sample of " + std::to_string(n) +
                                   " rows cannot support " + std::to_string(k) + " regressors");
    }
    AdfDesign d;
    d.X.resize(n, k);
    d.dy.resize(n);
    int col = 0;
    if (det == Deterministics::constant) {
        d.X.col(col).setOnes();
        ++col;
    }
    d.rho_col = static_cast<std::size_t>(col);
    for (int t = t_start; t < T; ++t) {
        const int r = t - t_start;
        d.dy(r) = y[t] - y[t - 1];
        d.X(r, col) = y[t - 1];
        for (int j = 1; j <= p; ++j) {
            d.X(r, col + j) = y[t - j] - y[t - j - 1];
        }
    }
    return d;
}

double aic_of(const OlsFit& fit) {
    const auto n = static_cast<double>(fit.n);
    return n * std::log(fit.rss / n) + 2.0 * static_cast<double>(fit.k);
}

AdfFit finish_adf(std::span<const double> y, Deterministics det, int p) {
    const AdfDesign d = adf_design(y, det, p, p + 1);
    const OlsFit fit = ols(d.X, d.dy);
    AdfFit out;
    out.det = det;
    out.lag = p;
    out.n_obs = fit.n;
    out.rss = fit.rss;
    out.aic = aic_of(fit);
    out.rho = fit.coef(static_cast<Eigen::Index>(d.rho_col));
    out.rho_se = fit.stderr_(static_cast<Eigen::Index>(d.rho_col));
    out.t_stat = out.rho / out.rho_se;
    out.residuals = fit.residuals;
    return out;
}

}  // namespace

AdfFit adf_fit(std::span<const double> y, const AdfSpec& spec) {
    if (spec.max_lag < 0) throw ConfigError("max_lag must be >= 0");
    if (spec.rule == LagRule::fixed) {
        if (spec.fixed_lag < 0) throw ConfigError("fixed_lag must be >= 0");
        check_series(y, static_cast<std::size_t>(spec.fixed_lag) + 8);
        return finish_adf(y, spec.det, spec.fixed_lag);
    }

    check_series(y, static_cast<std::size_t>(spec.max_lag) + 10);

    // All candidates share the sample that the deepest lag allows, so their
    // AIC values are comparable; ties go to the smaller order.
    int best_p = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int p = 0; p <= spec.max_lag; ++p) {
        const AdfDesign d = adf_design(y, spec.det, p, spec.max_lag + 1);
        const OlsFit fit = ols(d.X, d.dy);
        const double aic = aic_of(fit);
        if (aic < best_aic) {
            best_aic = aic;
            best_p = p;
        }
    }
    return finish_adf(y, spec.det, best_p);
}

std::vector<double> gls_detrend(std::span<const double> y, double c_bar) {
    const auto T = y.size();
    if (T < 2) throw DegenerateInputError("gls_detrend needs at least 2 observations");
    const double alpha_bar = 1.0 + c_bar / static_cast<double>(T);

    // Quasi-differenced data and constant; the first row keeps full weight.
    double sd2 = 1.0;        // sum of d_t^2, d_1 = 1
    double sdz = y[0];       // sum of d_t z_t, z_1 = y_1
    const double d = 1.0 - alpha_bar;
    for (std::size_t t = 1; t < T; ++t) {
        const double z = y[t] - alpha_bar * y[t - 1];
        sd2 += d * d;
        sdz += d * z;
    }
    const double level = sdz / sd2;

    std::vector<double> out(y.begin(), y.end());
    for (auto& v : out) v -= level;
    return out;
}

Panel demean_cross_section(const Panel& panel) {
    require_balanced(panel);
    Panel out(panel.units(), panel.times());
    const auto N = panel.n_units();
    for (std::size_t t = 0; t < panel.n_times(); ++t) {
        double m = 0.0;
        for (std::size_t i = 0; i < N; ++i) m += *panel.at(i, t);
        m /= static_cast<double>(N);
        for (std::size_t i = 0; i < N; ++i) out.set(i, t, *panel.at(i, t) - m);
    }
    return out;
}

int bartlett_bandwidth(std::size_t n) noexcept {
    return static_cast<int>(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 9.0));
}

namespace {

int effective_bandwidth(std::size_t n, const LrvSpec& spec) {
    int m = spec.bandwidth >= 0 ? spec.bandwidth : bartlett_bandwidth(n);
    if (m > static_cast<int>(n) - 1) m = static_cast<int>(n) - 1;
    return m;
}

// gamma_j of the demeaned series, 1/n normalization.
double autocov(std::span<const double> u, double mu, int j) {
    double s = 0.0;
    for (std::size_t t = static_cast<std::size_t>(j); t < u.size(); ++t) {
        s += (u[t] - mu) * (u[t - static_cast<std::size_t>(j)] - mu);
    }
    return s / static_cast<double>(u.size());
}

}  // namespace

double long_run_variance(std::span<const double> u, const LrvSpec& spec) {
    if (u.size() < 2) throw DegenerateInputError("long_run_variance needs at least 2 points");
    const double mu = stats::mean(u);
    const int m = effective_bandwidth(u.size(), spec);
    double w2 = autocov(u, mu, 0);
    for (int j = 1; j <= m; ++j) {
        const double w = 1.0 - static_cast<double>(j) / static_cast<double>(m + 1);
        w2 += 2.0 * w * autocov(u, mu, j);
    }
    return w2;
}

double one_sided_long_run_cov(std::span<const double> u, const LrvSpec& spec) {
    if (u.size() < 2) throw DegenerateInputError("one_sided_long_run_cov needs >= 2 points");
    const double mu = stats::mean(u);
    const int m = effective_bandwidth(u.size(), spec);
    double lambda = 0.0;
    for (int j = 1; j <= m; ++j) {
        const double w = 1.0 - static_cast<double>(j) / static_cast<double>(m + 1);
        lambda += w * autocov(u, mu, j);
    }
    return lambda;
}

double long_run_covariance(std::span<const double> u, std::span<const double> v,
                           const LrvSpec& spec) {
    if (u.size() != v.size()) throw DataError("long_run_covariance: length mismatch");
    if (u.size() < 2) throw DegenerateInputError("long_run_covariance needs >= 2 points");
    const auto n = u.size();
    const double mu = stats::mean(u);
    const double mv = stats::mean(v);
    const int m = effective_bandwidth(n, spec);

    const auto cross = [&](int j) {  // E[u_t v_{t-j}], j may be negative
        double s = 0.0;
        if (j >= 0) {
            for (std::size_t t = static_cast<std::size_t>(j); t < n; ++t) {
                s += (u[t] - mu) * (v[t - static_cast<std::size_t>(j)] - mv);
            }
        } else {
            for (std::size_t t = static_cast<std::size_t>(-j); t < n; ++t) {
                s += (u[t - static_cast<std::size_t>(-j)] - mu) * (v[t] - mv);
            }
        }
        return s / static_cast<double>(n);
    };

    double w_uv = cross(0);
    for (int j = 1; j <= m; ++j) {
        const double w = 1.0 - static_cast<double>(j) / static_cast<double>(m + 1);
        w_uv += w * (cross(j) + cross(-j));
    }
    return w_uv;
}

namespace {

struct CadfDesign {
    Eigen::MatrixXd X;
    Eigen::VectorXd dy;
    std::size_t rho_col = 0;
    std::size_t x_col = 0;  // first covariate column
};

// Rows are t = t_start .. T-1 of
//   dy_t on [const] y_{t-1} dy_{t-1..py} x_{t-1..t-qx},
// where x[s] is contemporaneous with dy at time s+1.
CadfDesign cadf_design(std::span<const double> y, std::span<const double> x,
                       Deterministics det, int py, int qx, int t_start) {
    const auto T = static_cast<int>(y.size());
    const int n = T - t_start;
    const int k = (det == Deterministics::constant ? 1 : 0) + 1 + py + qx;
    if (n <= k + 1) {
        throw DegenerateInputError("covariate-ADF sample of " + std::to_string(n) +
                                   " rows cannot support " + std::to_string(k) + " regressors");
    }
    CadfDesign d;
    d.X.resize(n, k);
    d.dy.resize(n);
    int col = 0;
    if (det == Deterministics::constant) {
        d.X.col(col).setOnes();
        ++col;
    }
    d.rho_col = static_cast<std::size_t>(col);
    d.x_col = static_cast<std::size_t>(col + 1 + py);
    for (int t = t_start; t < T; ++t) {
        const int r = t - t_start;
        d.dy(r) = y[t] - y[t - 1];
        d.X(r, col) = y[t - 1];
        for (int j = 1; j <= py; ++j) {
            d.X(r, col + j) = y[t - j] - y[t - j - 1];
        }
        for (int j = 1; j <= qx; ++j) {
            // x at time t-j lives at index t-j-1.
            d.X(r, col + py + j) = x[static_cast<std::size_t>(t - j - 1)];
        }
    }
    return d;
}

}  // namespace

CadfFit cadf_fit(std::span<const double> y, std::span<const double> x, const CadfSpec& spec) {
    if (spec.max_lag_y < 0 || spec.max_lag_x < 1) {
        throw ConfigError("covariate-ADF needs max_lag_y >= 0 and max_lag_x >= 1");
    }
    if (x.size() != y.size() - 1) {
        throw DataError("covariate must have length T-1 and align with the differences");
    }
    check_series(y, static_cast<std::size_t>(std::max(spec.max_lag_y, spec.max_lag_x)) + 12);

    // Joint AIC over (own order, covariate order) on the common sample;
    // ties prefer the smaller own order, then the smaller covariate order.
    const int t_common = std::max(spec.max_lag_y, spec.max_lag_x) + 1;
    int best_py = 0, best_qx = 1;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int py = 0; py <= spec.max_lag_y; ++py) {
        for (int qx = 1; qx <= spec.max_lag_x; ++qx) {
            const CadfDesign d = cadf_design(y, x, spec.det, py, qx, t_common);
            const OlsFit fit = ols(d.X, d.dy);
            const double aic = aic_of(fit);
            if (aic < best_aic) {
                best_aic = aic;
                best_py = py;
                best_qx = qx;
            }
        }
    }

    const int t_start = std::max(best_py, best_qx) + 1;
    const CadfDesign d = cadf_design(y, x, spec.det, best_py, best_qx, t_start);
    const OlsFit fit = ols(d.X, d.dy);

    CadfFit out;
    out.det = spec.det;
    out.lag_y = best_py;
    out.lag_x = best_qx;
    out.n_obs = fit.n;
    out.rho = fit.coef(static_cast<Eigen::Index>(d.rho_col));
    out.rho_se = fit.stderr_(static_cast<Eigen::Index>(d.rho_col));
    out.t_stat = out.rho / out.rho_se;
    out.residuals = fit.residuals;

    // Long-run correlation between the regression error and the
    // covariate-driven innovation (fitted covariate part plus error).
    Eigen::VectorXd v = fit.residuals;
    for (int j = 0; j < best_qx; ++j) {
        v += fit.coef(static_cast<Eigen::Index>(d.x_col) + j) *
             d.X.col(static_cast<Eigen::Index>(d.x_col) + j);
    }
    const std::span<const double> e_span(fit.residuals.data(),
                                         static_cast<std::size_t>(fit.residuals.size()));
    const std::span<const double> v_span(v.data(), static_cast<std::size_t>(v.size()));
    const double w_e = long_run_variance(e_span, spec.lrv);
    const double w_v = long_run_variance(v_span, spec.lrv);
    const double w_ev = long_run_covariance(e_span, v_span, spec.lrv);
    const double denom = w_e * w_v;
    double rho2 = denom > 0.0 ? (w_ev * w_ev) / denom : 0.0;
    rho2 = std::min(1.0, std::max(0.0, rho2));
    out.rho2 = rho2;
    return out;
}

}  // namespace purt
