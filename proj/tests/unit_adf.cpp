#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "purt/adf.hpp"
#include "purt/errors.hpp"
#include "purt/rng.hpp"

using namespace purt;

namespace {

/// Normal-equations least squares, written independently of the library's
/// QR-based path: beta = (X'X)^{-1} X'y with explicit inversion.
struct NaiveOls {
    Eigen::VectorXd coef;
    Eigen::VectorXd se;
    double rss = 0.0;
};

NaiveOls naive_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();
    NaiveOls fit;
    fit.coef = xtx_inv * (x.transpose() * y);
    const Eigen::VectorXd resid = y - x * fit.coef;
    fit.rss = resid.squaredNorm();
    const double sigma2 = fit.rss / static_cast<double>(x.rows() - x.cols());
    fit.se = (sigma2 * xtx_inv.diagonal()).cwiseSqrt();
    return fit;
}

/// The same augmented regression adf_fit runs, assembled by hand for lag p on
/// rows t = p+1 .. T-1.
NaiveOls naive_adf(const std::vector<double>& y, int p, bool constant, int* target_col) {
    const int T = static_cast<int>(y.size());
    const int n = T - 1 - p;
    const int k = (constant ? 1 : 0) + 1 + p;
    Eigen::MatrixXd x(n, k);
    Eigen::VectorXd dy(n);
    for (int t = p + 1; t < T; ++t) {
        int c = 0;
        if (constant) x(t - p - 1, c++) = 1.0;
        x(t - p - 1, c++) = y[t - 1];
        for (int j = 1; j <= p; ++j) x(t - p - 1, c++) = y[t - j] - y[t - j - 1];
        dy(t - p - 1) = y[t] - y[t - 1];
    }
    *target_col = constant ? 1 : 0;
    return naive_ols(x, dy);
}

std::vector<double> fixture_series(int T, std::uint64_t seed) {
    rng::Stream stream(seed, 0);
    std::vector<double> y(static_cast<std::size_t>(T));
    double level = 0.0;
    for (auto& v : y) {
        level += stream.normal();
        v = level;
    }
    return y;
}

}  // namespace

TEST_CASE("ols matches the normal-equations oracle") {
    rng::Stream stream(5, 0);
    Eigen::MatrixXd x(12, 3);
    Eigen::VectorXd y(12);
    for (int r = 0; r < 12; ++r) {
        x(r, 0) = 1.0;
        x(r, 1) = stream.normal();
        x(r, 2) = stream.normal();
        y(r) = 2.0 + 0.5 * x(r, 1) - x(r, 2) + 0.1 * stream.normal();
    }
    const OlsFit fit = ols(x, y);
    const NaiveOls oracle = naive_ols(x, y);
    for (int j = 0; j < 3; ++j) {
        CHECK(fit.coef(j) == doctest::Approx(oracle.coef(j)).epsilon(1e-10));
        CHECK(fit.stderr_(j) == doctest::Approx(oracle.se(j)).epsilon(1e-10));
    }
    CHECK(fit.rss == doctest::Approx(oracle.rss).epsilon(1e-10));
    CHECK(fit.n == 12);
    CHECK(fit.k == 3);
}

TEST_CASE("ols rejects rank-deficient and undersized designs") {
    Eigen::MatrixXd x(6, 2);
    Eigen::VectorXd y(6);
    for (int r = 0; r < 6; ++r) {
        x(r, 0) = 1.0;
        x(r, 1) = 2.0;  // collinear with the constant
        y(r) = r;
    }
    CHECK_THROWS_AS((void)ols(x, y), SingularityError);

    Eigen::MatrixXd tall(2, 3);
    Eigen::VectorXd short_y(2);
    CHECK_THROWS_AS((void)ols(tall, short_y), DegenerateInputError);
}

TEST_CASE("adf t-statistics match a hand-built regression at fixed lags") {
    const std::vector<double> y = fixture_series(15, 99);
    for (const bool constant : {false, true}) {
        for (int p = 0; p <= 2; ++p) {
            AdfSpec spec;
            spec.det = constant ? Deterministics::constant : Deterministics::none;
            spec.rule = LagRule::fixed;
            spec.fixed_lag = p;
            const AdfFit fit = adf_fit(y, spec);

            int target = 0;
            const NaiveOls oracle = naive_adf(y, p, constant, &target);
            const double t_oracle = oracle.coef(target) / oracle.se(target);
            CHECK(fit.t_stat == doctest::Approx(t_oracle).epsilon(1e-10));
            CHECK(fit.rho == doctest::Approx(oracle.coef(target)).epsilon(1e-10));
            CHECK(fit.lag == p);
            CHECK(fit.n_obs == static_cast<std::size_t>(15 - 1 - p));
        }
    }
}

TEST_CASE("aic selection refits the winner on its own maximal sample") {
    const std::vector<double> y = fixture_series(80, 4);
    AdfSpec aic;
    aic.rule = LagRule::aic_selected;
    aic.max_lag = 5;
    const AdfFit selected = adf_fit(y, aic);
    REQUIRE(selected.lag >= 0);
    REQUIRE(selected.lag <= 5);

    AdfSpec fixed;
    fixed.rule = LagRule::fixed;
    fixed.fixed_lag = selected.lag;
    const AdfFit refit = adf_fit(y, fixed);
    CHECK(selected.t_stat == refit.t_stat);
    CHECK(selected.n_obs == refit.n_obs);
    CHECK(selected.rss == refit.rss);
}

TEST_CASE("aic picks up strong short-run dynamics") {
    // Differences follow a heavy AR(1), so at least one lag must enter;
    // a pure random walk's differences carry no structure, so lag 0 wins.
    rng::Stream stream(11, 0);
    std::vector<double> persistent(300), walk(300);
    double level = 0.0, dy = 0.0;
    for (std::size_t t = 0; t < persistent.size(); ++t) {
        dy = 0.8 * dy + stream.normal();
        level += dy;
        persistent[t] = level;
    }
    level = 0.0;
    for (auto& v : walk) {
        level += stream.normal();
        v = level;
    }

    AdfSpec spec;
    spec.rule = LagRule::aic_selected;
    CHECK(adf_fit(persistent, spec).lag >= 1);
    CHECK(adf_fit(walk, spec).lag == 0);
}

TEST_CASE("adf rejects series that are too short or flat") {
    AdfSpec spec;
    spec.rule = LagRule::aic_selected;
    spec.max_lag = 5;
    const std::vector<double> shorty(12, 1.0);
    CHECK_THROWS_AS((void)adf_fit(shorty, spec), DegenerateInputError);
    const std::vector<double> flat(40, 3.14);
    CHECK_THROWS_AS((void)adf_fit(flat, spec), DegenerateInputError);
}

TEST_CASE("gls detrending degenerates to demeaning at c_bar = -T") {
    const std::vector<double> y = fixture_series(60, 21);
    const auto detrended = gls_detrend(y, -60.0);
    double m = 0.0;
    for (const double v : y) m += v;
    m /= static_cast<double>(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) {
        CHECK(detrended[t] == doctest::Approx(y[t] - m).epsilon(1e-9));
    }

    // The default local-to-unity level differs from the sample mean.
    const auto local = gls_detrend(y, -7.0);
    CHECK(std::abs(local[0] - detrended[0]) > 1e-8);
    CHECK(local.size() == y.size());
}

TEST_CASE("cross-section demeaning zeroes every month's mean") {
    const Panel p = testutil::rw_panel(4, 30, 8);
    const Panel d = demean_cross_section(p);
    for (std::size_t t = 0; t < d.n_times(); ++t) {
        double sum = 0.0;
        for (std::size_t i = 0; i < d.n_units(); ++i) sum += *d.at(i, t);
        CHECK(sum == doctest::Approx(0.0).epsilon(1e-10));
    }
}

TEST_CASE("bartlett bandwidth follows the T^{2/9} rule") {
    CHECK(bartlett_bandwidth(100) == 4);
    CHECK(bartlett_bandwidth(148) == 4);  // 4 * 1.48^{2/9} = 4.36
    CHECK(bartlett_bandwidth(25) == 2);   // 4 * 0.25^{2/9} = 2.94
    CHECK(bartlett_bandwidth(500) == 5);  // 4 * 5^{2/9} = 5.72
}

TEST_CASE("long-run variance on a hand-computed three-point series") {
    // u = {1, 2, 4}: demeaned {-4/3, -1/3, 5/3}; gamma_0 = 14/9,
    // gamma_1 = ((-1/3)(-4/3) + (5/3)(-1/3)) / 3 = -1/27. At bandwidth 1 the
    // Bartlett weight is 1/2, so omega^2 = 14/9 - 1/27 and lambda = -1/54.
    const std::vector<double> u = {1.0, 2.0, 4.0};
    LrvSpec spec;
    spec.bandwidth = 1;
    CHECK(long_run_variance(u, spec) == doctest::Approx(14.0 / 9.0 - 1.0 / 27.0).epsilon(1e-14));
    CHECK(one_sided_long_run_cov(u, spec) == doctest::Approx(-1.0 / 54.0).epsilon(1e-14));

    LrvSpec zero;
    zero.bandwidth = 0;
    CHECK(long_run_variance(u, zero) == doctest::Approx(14.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("long-run variance tracks white noise and MA(1) spectra") {
    rng::Stream stream(3, 0);
    std::vector<double> eps(20000);
    for (auto& v : eps) v = stream.normal();

    CHECK(long_run_variance(eps) == doctest::Approx(1.0).epsilon(0.05));

    // MA(1) with unit coefficient: spectrum at zero is (1+1)^2 = 4, twice the
    // plain variance of 2. A moderate explicit bandwidth keeps the kernel bias
    // well below that gap while the estimator's own noise stays bounded.
    std::vector<double> ma(eps.size() - 1);
    for (std::size_t t = 0; t < ma.size(); ++t) ma[t] = eps[t + 1] + eps[t];
    LrvSpec wide;
    wide.bandwidth = 50;
    CHECK(long_run_variance(ma, wide) == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("long-run covariance is symmetric and matches the variance diagonal") {
    const std::vector<double> u = fixture_series(500, 31);
    std::vector<double> du(u.size() - 1), dv(u.size() - 1);
    for (std::size_t t = 0; t + 1 < u.size(); ++t) du[t] = u[t + 1] - u[t];
    rng::Stream stream(32, 0);
    for (auto& v : dv) v = stream.normal();

    CHECK(long_run_covariance(du, du) == doctest::Approx(long_run_variance(du)).epsilon(1e-12));
    CHECK(long_run_covariance(du, dv) == doctest::Approx(long_run_covariance(dv, du)).epsilon(1e-12));
}

TEST_CASE("covariate regression is scale invariant and orders are in range") {
    const std::vector<double> y = fixture_series(120, 77);
    rng::Stream stream(78, 0);
    std::vector<double> x(y.size() - 1);
    for (auto& v : x) v = stream.normal();

    CadfSpec spec;
    const CadfFit fit = cadf_fit(y, x, spec);
    CHECK(fit.lag_y >= 0);
    CHECK(fit.lag_y <= 5);
    CHECK(fit.lag_x >= 1);
    CHECK(fit.lag_x <= 5);
    CHECK(fit.rho2 >= 0.0);
    CHECK(fit.rho2 <= 1.0);

    std::vector<double> x_scaled = x;
    for (auto& v : x_scaled) v *= 37.5;
    const CadfFit scaled = cadf_fit(y, x_scaled, spec);
    CHECK(scaled.t_stat == doctest::Approx(fit.t_stat).epsilon(1e-9));
    CHECK(scaled.rho2 == doctest::Approx(fit.rho2).epsilon(1e-9));
    CHECK(scaled.lag_y == fit.lag_y);
    CHECK(scaled.lag_x == fit.lag_x);
}

TEST_CASE("rho2 separates useless from highly informative covariates") {
    // Long samples stabilize the HAC pieces. The informative covariate leads
    // the innovations: dy at time s+1 is x at time s plus a small shock, so
    // the first covariate lag soaks up almost all of the regression error.
    rng::Stream stream(55, 0);
    const int T = 2000;
    std::vector<double> x(T - 1), noise(T - 1), dy(T - 1);
    for (auto& v : x) v = stream.normal();
    for (auto& v : noise) v = stream.normal();
    dy[0] = 0.1 * stream.normal();
    for (std::size_t s = 1; s < dy.size(); ++s) dy[s] = x[s - 1] + 0.1 * stream.normal();

    std::vector<double> y(T);
    y[0] = 0.0;
    for (int t = 1; t < T; ++t) y[static_cast<std::size_t>(t)] = y[t - 1] + dy[t - 1];

    CadfSpec spec;
    const CadfFit useless = cadf_fit(y, noise, spec);
    const CadfFit leading = cadf_fit(y, x, spec);
    CHECK(useless.rho2 > 0.8);  // covariate explains nothing: ADF limit
    CHECK(leading.rho2 < 0.2);  // covariate explains everything: normal limit
}

TEST_CASE("covariate length must match the differenced sample") {
    const std::vector<double> y = fixture_series(60, 12);
    const std::vector<double> x(y.size(), 0.5);
    CadfSpec spec;
    CHECK_THROWS_AS((void)cadf_fit(y, x, spec), DataError);
}
