#include "purt/secondgen.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "purt/errors.hpp"
#include "purt/stats.hpp"

namespace purt {

namespace {

CriticalValues right_normal_cvs() {
    const auto& cv = tables::kNormalRightTail;
    return CriticalValues{cv[0], cv[1], cv[2]};
}

CriticalValues left_normal_cvs() {
    const auto& cv = tables::kNormalRightTail;
    return CriticalValues{-cv[0], -cv[1], -cv[2]};
}

void require_panel(const Panel& panel) {
    if (panel.n_units() < 2) {
        throw DegenerateInputError("panel tests need at least 2 units");
    }
    require_balanced(panel);
}

}  // namespace

FactorModel extract_factors(const Eigen::MatrixXd& x, int k) {
    const auto n = static_cast<int>(x.cols());
    if (k < 1 || k > n) throw ConfigError("factor count must lie in 1..N");
    if (x.rows() < 2) throw DegenerateInputError("factor extraction needs at least 2 rows");

    const Eigen::MatrixXd s = x.transpose() * x;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    if (eig.info() != Eigen::Success) throw SingularityError("eigendecomposition failed");

    FactorModel fm;
    fm.eigenvalues = eig.eigenvalues().reverse();
    Eigen::MatrixXd v(n, k);
    for (int j = 0; j < k; ++j) {
        v.col(j) = eig.eigenvectors().col(n - 1 - j);
    }

    // Eigenvectors are only defined up to sign; pin each column by making its
    // largest-magnitude entry positive so repeated runs agree bit for bit.
    for (int j = 0; j < k; ++j) {
        int arg = 0;
        v.col(j).cwiseAbs().maxCoeff(&arg);
        if (v(arg, j) < 0.0) v.col(j) = -v.col(j);
    }

    fm.factors.resize(x.rows(), k);
    for (int j = 0; j < k; ++j) {
        const double lambda = fm.eigenvalues(j);
        if (!(lambda > 0.0)) {
            throw DegenerateInputError("factor extraction hit a zero eigenvalue");
        }
        fm.factors.col(j) = x * v.col(j) / std::sqrt(lambda);
    }
    fm.loadings = std::sqrt(static_cast<double>(n)) * v;
    fm.defactored = x - (x * v) * v.transpose();
    return fm;
}

int select_factor_count(const Eigen::MatrixXd& x, int k_max) {
    const auto n = static_cast<int>(x.cols());
    if (k_max < 1 || k_max > n - 1) throw ConfigError("factor count bound must lie in 1..N-1");

    const Eigen::MatrixXd s = x.transpose() * x;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    if (eig.info() != Eigen::Success) throw SingularityError("eigendecomposition failed");
    const Eigen::VectorXd ev = eig.eigenvalues().reverse();

    int best = 1;
    double best_ratio = 0.0;
    const double floor = 1e-12 * std::max(ev(0), 1.0);
    for (int j = 1; j <= k_max; ++j) {
        if (ev(j) <= floor) return j;  // j components already exhaust the data
        const double ratio = ev(j - 1) / ev(j);
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best = j;
        }
    }
    return best;
}

MoonPerronResult moon_perron_test(const Panel& panel, int k, const LrvSpec& lrv) {
    require_panel(panel);
    const auto n = static_cast<int>(panel.n_units());
    const auto t_full = static_cast<int>(panel.n_times());
    if (t_full < 20) throw DegenerateInputError("pooled factor test needs at least 20 periods");
    if (k < 0 || k > n - 1) throw ConfigError("factor count must lie in 0..N-1");

    const Eigen::MatrixXd data = to_matrix(panel).transpose();  // T x N
    const int t_eff = t_full - 1;
    const Eigen::MatrixXd y = data.bottomRows(t_eff);
    const Eigen::MatrixXd ylag = data.topRows(t_eff);

    const double den_pool = ylag.squaredNorm();
    if (den_pool <= 0.0) throw DegenerateInputError("pooled autoregression degenerate");
    const double rho_hat = ylag.cwiseProduct(y).sum() / den_pool;
    const Eigen::MatrixXd resid = y - rho_hat * ylag;

    int k_used = k;
    if (k_used == 0) {
        k_used = select_factor_count(resid, std::min(n - 1, 6));
    }
    const FactorModel fm = extract_factors(resid, k_used);

    // Long-run pieces of the idiosyncratic part, averaged over units.
    double omega2 = 0.0, phi4 = 0.0, lambda = 0.0;
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd col = fm.defactored.col(i);
        const std::vector<double> e(col.data(), col.data() + col.size());
        const double w2 = long_run_variance(e, lrv);
        omega2 += w2;
        phi4 += w2 * w2;
        lambda += one_sided_long_run_cov(e, lrv);
    }
    omega2 /= n;
    phi4 /= n;
    lambda /= n;
    if (omega2 <= 0.0 || phi4 <= 0.0) {
        throw DegenerateInputError("idiosyncratic long-run variance degenerate");
    }

    const Eigen::MatrixXd vk = fm.loadings / std::sqrt(static_cast<double>(n));
    const Eigen::MatrixXd ylag_q = ylag - (ylag * vk) * vk.transpose();
    const double num_q = ylag_q.cwiseProduct(y).sum();
    const double den_q = ylag_q.cwiseProduct(ylag).sum();
    if (den_q <= 0.0) throw DegenerateInputError("projected autoregression degenerate");

    const double nt = static_cast<double>(n) * static_cast<double>(t_eff);
    const double rho_plus = (num_q - nt * lambda) / den_q;

    const double scale = static_cast<double>(t_eff) * std::sqrt(static_cast<double>(n));
    const double t_a = scale * (rho_plus - 1.0) / std::sqrt(2.0 * phi4 / (omega2 * omega2));
    const double t_b = scale * (rho_plus - 1.0) *
                       std::sqrt(den_q / (nt * static_cast<double>(t_eff)) * (omega2 / phi4));

    MoonPerronResult out;
    out.rho_pool = rho_plus;
    out.k = k_used;
    out.eigenvalues = fm.eigenvalues;

    auto finish = [&](TestResult& r, const char* name, double stat) {
        r.name = name;
        r.statistic = stat;
        r.p_value = stats::normal_cdf(stat);
        r.tail = Tail::left;
        r.critical_values = left_normal_cvs();
        r.reject = decide(stat, *r.critical_values, r.tail);
        r.diagnostics["rho_pool"] = rho_hat;
        r.diagnostics["rho_plus"] = rho_plus;
        r.diagnostics["k_factors"] = static_cast<double>(k_used);
        r.diagnostics["omega2_e"] = omega2;
        r.diagnostics["phi4_e"] = phi4;
        r.diagnostics["lambda_e"] = lambda;
    };
    finish(out.t_a, "mp_ta", t_a);
    finish(out.t_b, "mp_tb", t_b);
    return out;
}

namespace {

struct CadfDesignXS {
    Eigen::MatrixXd x;
    Eigen::VectorXd dyv;
    int target = 0;  // column index of the lagged own level
};

/// Rows t = t_start .. T-1 of the cross-sectionally augmented regression with
/// p own-difference lags (the cross-average difference enters at lags 0..p).
CadfDesignXS cadf_xs_design(std::span<const double> y, std::span<const double> ybar, int p,
                            int t_start, Deterministics det) {
    const auto t_size = static_cast<int>(y.size());
    const int rows = t_size - t_start;
    const int det_cols = det == Deterministics::constant ? 1 : 0;
    const int cols = det_cols + 3 + 2 * p;
    if (rows <= cols) {
        throw DegenerateInputError("augmented regression has more coefficients than rows");
    }

    CadfDesignXS d;
    d.x.resize(rows, cols);
    d.dyv.resize(rows);
    d.target = det_cols;
    for (int t = t_start; t < t_size; ++t) {
        const int r = t - t_start;
        int c = 0;
        if (det_cols) d.x(r, c++) = 1.0;
        d.x(r, c++) = y[t - 1];
        d.x(r, c++) = ybar[t - 1];
        d.x(r, c++) = ybar[t] - ybar[t - 1];
        for (int j = 1; j <= p; ++j) {
            d.x(r, c++) = y[t - j] - y[t - j - 1];
            d.x(r, c++) = ybar[t - j] - ybar[t - j - 1];
        }
        d.dyv(r) = y[t] - y[t - 1];
    }
    return d;
}

AdfFit cadf_xs_fit_at(std::span<const double> y, std::span<const double> ybar, int p,
                      int t_start, Deterministics det) {
    const CadfDesignXS d = cadf_xs_design(y, ybar, p, t_start, det);
    const OlsFit fit = ols(d.x, d.dyv);
    AdfFit out;
    out.rho = fit.coef(d.target);
    out.rho_se = fit.stderr_(d.target);
    out.t_stat = out.rho / out.rho_se;
    out.lag = p;
    out.n_obs = fit.n;
    out.rss = fit.rss;
    out.aic = static_cast<double>(fit.n) * std::log(fit.rss / fit.n) + 2.0 * fit.k;
    out.det = det;
    out.residuals = fit.residuals;
    return out;
}

}  // namespace

AdfFit cadf_unit(std::span<const double> y, std::span<const double> ybar, const AdfSpec& spec) {
    if (y.size() != ybar.size()) {
        throw DataError("series and cross-average must cover the same months");
    }
    const auto t_size = static_cast<int>(y.size());

    if (spec.rule == LagRule::fixed) {
        return cadf_xs_fit_at(y, ybar, spec.fixed_lag, spec.fixed_lag + 1, spec.det);
    }

    if (spec.max_lag < 0) throw ConfigError("max lag must be non-negative");
    const int needed = 3 * spec.max_lag + 10;
    if (t_size < needed) {
        throw DegenerateInputError("series too short for lag search up to " +
                                   std::to_string(spec.max_lag));
    }

    // Candidates share the sample implied by the largest lag, so their AIC
    // values are comparable; the winner is then refit on its own sample.
    int best_p = 0;
    double best_aic = 0.0;
    for (int p = 0; p <= spec.max_lag; ++p) {
        const double aic = cadf_xs_fit_at(y, ybar, p, spec.max_lag + 1, spec.det).aic;
        if (p == 0 || aic < best_aic) {
            best_aic = aic;
            best_p = p;
        }
    }
    return cadf_xs_fit_at(y, ybar, best_p, best_p + 1, spec.det);
}

namespace {

double table_quantile(const tables::QuantileTable& table, double prob) {
    const auto& probs = table.probs;
    const auto& q = table.quants.at(0);
    if (prob <= probs.front()) return q.front();
    if (prob >= probs.back()) return q.back();
    const auto it = std::lower_bound(probs.begin(), probs.end(), prob);
    const auto hi = static_cast<std::size_t>(it - probs.begin());
    if (probs[hi] == prob) return q[hi];
    const double frac = (prob - probs[hi - 1]) / (probs[hi] - probs[hi - 1]);
    return q[hi - 1] + frac * (q[hi] - q[hi - 1]);
}

}  // namespace

TestResult cips_test(const Panel& panel, const AdfSpec& spec,
                     const tables::QuantileTable* simulated_cvs) {
    require_panel(panel);
    const auto n = panel.n_units();
    const auto t_size = panel.n_times();

    std::vector<double> ybar(t_size, 0.0);
    std::vector<std::vector<double>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        rows[i] = panel.row(i);
        for (std::size_t t = 0; t < t_size; ++t) ybar[t] += rows[i][t];
    }
    for (auto& v : ybar) v /= static_cast<double>(n);

    TestResult r;
    r.name = "cips";
    double sum_t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const AdfFit fit = cadf_unit(rows[i], ybar, spec);
        sum_t += fit.t_stat;
        r.per_unit.push_back(UnitDiagnostic{panel.units()[i], fit.t_stat, fit.lag, std::nullopt});
    }
    r.statistic = sum_t / static_cast<double>(n);
    r.tail = Tail::left;

    if (simulated_cvs != nullptr) {
        r.critical_values = CriticalValues{table_quantile(*simulated_cvs, 0.01),
                                           table_quantile(*simulated_cvs, 0.05),
                                           table_quantile(*simulated_cvs, 0.10)};
        r.diagnostics["cv_source_simulated"] = 1.0;
    } else {
        if (spec.det != Deterministics::constant) {
            throw ConfigError("no embedded critical values outside the constant case");
        }
        const auto& cv = tables::kCipsConstantLeftTail;
        r.critical_values = CriticalValues{cv[0], cv[1], cv[2]};
        r.diagnostics["cv_source_simulated"] = 0.0;
    }
    r.reject = decide(r.statistic, *r.critical_values, r.tail);
    return r;
}

Choi2006Result choi2006_tests(const Panel& panel, tables::TableCache& cache, int max_lag,
                              double c_bar) {
    require_panel(panel);
    const auto n = panel.n_units();
    const auto t_size = static_cast<int>(panel.n_times());
    if (c_bar >= 0.0) throw ConfigError("the local-to-unity constant must be negative");

    const Panel demeaned = demean_cross_section(panel);

    AdfSpec spec;
    spec.det = Deterministics::none;
    spec.rule = LagRule::aic_selected;
    spec.max_lag = max_lag;

    const tables::QuantileTable& asym = cache.df_asymptotic_none();
    std::vector<UnitDiagnostic> units;
    units.reserve(n);
    double sum_lnp = 0.0, sum_probit = 0.0, sum_logit = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double> detrended = gls_detrend(demeaned.row(i), c_bar);
        const AdfFit fit = adf_fit(detrended, spec);
        const double p = tables::pvalue_from_table(asym, fit.t_stat);
        sum_lnp += std::log(p) + 1.0;
        sum_probit += stats::normal_quantile(p);
        sum_logit += std::log(p / (1.0 - p));
        units.push_back(UnitDiagnostic{panel.units()[i], fit.t_stat, fit.lag, p});
    }

    const double root_n = std::sqrt(static_cast<double>(n));
    const double alpha_bar = 1.0 + c_bar / static_cast<double>(t_size);

    Choi2006Result out;
    auto finish = [&](TestResult& r, const char* name, double stat, Tail tail) {
        r.name = name;
        r.statistic = stat;
        r.tail = tail;
        r.p_value = tail == Tail::left ? stats::normal_cdf(stat) : 1.0 - stats::normal_cdf(stat);
        r.critical_values = tail == Tail::left ? left_normal_cvs() : right_normal_cvs();
        r.reject = decide(stat, *r.critical_values, tail);
        r.per_unit = units;
        r.diagnostics["c_bar"] = c_bar;
        r.diagnostics["alpha_bar"] = alpha_bar;
    };
    finish(out.pm, "pm", -sum_lnp / root_n, Tail::right);
    finish(out.z, "z", sum_probit / root_n, Tail::left);
    const double pi = std::numbers::pi;
    finish(out.lstar, "lstar",
           sum_logit / std::sqrt(pi * pi * static_cast<double>(n) / 3.0), Tail::left);
    return out;
}

}  // namespace purt
