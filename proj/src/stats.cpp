#include "purt/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <stdexcept>

#include "purt/errors.hpp"

namespace purt::stats {

namespace {
const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);
}

double normal_cdf(double x) noexcept {
    return boost::math::cdf(kStdNormal, x);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p outside (0,1)");
    return boost::math::quantile(kStdNormal, p);
}

double chi_squared_cdf(double x, int dof) {
    if (dof < 1) throw std::domain_error("chi_squared_cdf: dof < 1");
    if (x <= 0.0) return 0.0;
    return boost::math::cdf(boost::math::chi_squared_distribution<double>(dof), x);
}

double chi_squared_quantile(double p, int dof) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("chi_squared_quantile: p outside (0,1)");
    if (dof < 1) throw std::domain_error("chi_squared_quantile: dof < 1");
    return boost::math::quantile(boost::math::chi_squared_distribution<double>(dof), p);
}

double mean(std::span<const double> x) {
    if (x.empty()) throw DegenerateInputError("mean of empty sample");
    double s = 0.0;
    for (const double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) throw DegenerateInputError("variance needs at least 2 observations");
    const double m = mean(x);
    double ss = 0.0;
    for (const double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

double sorted_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw DegenerateInputError("quantile of empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("sorted_quantile: p outside [0,1]");
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted[sorted.size() - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DegenerateInputError("correlation: length mismatch");
    if (x.size() < 2) throw DegenerateInputError("correlation needs at least 2 observations");
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw DegenerateInputError("correlation of a constant series");
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace purt::stats
