#include "purt/combo.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "purt/errors.hpp"
#include "purt/secondgen.hpp"
#include "purt/stats.hpp"

namespace purt {

namespace {

CriticalValues left_normal_cvs() {
    const auto& cv = tables::kNormalRightTail;
    return CriticalValues{-cv[0], -cv[1], -cv[2]};
}

void require_pvalues(const std::vector<double>& pvalues) {
    if (pvalues.size() < 2) {
        throw DegenerateInputError("combination needs at least 2 p-values");
    }
}

TestResult left_normal_result(const char* name, double stat) {
    TestResult r;
    r.name = name;
    r.statistic = stat;
    r.p_value = stats::normal_cdf(stat);
    r.tail = Tail::left;
    r.critical_values = left_normal_cvs();
    r.reject = decide(stat, *r.critical_values, r.tail);
    return r;
}

}  // namespace

ProbitVector make_probits(const std::vector<double>& pvalues) {
    ProbitVector out;
    out.p.reserve(pvalues.size());
    out.probit.reserve(pvalues.size());
    for (const double p : pvalues) {
        if (!(p >= 0.0 && p <= 1.0)) throw DataError("p-value outside [0, 1]");
        const double clamped = std::min(1.0 - tables::kPClamp, std::max(tables::kPClamp, p));
        out.p.push_back(clamped);
        out.probit.push_back(stats::normal_quantile(clamped));
    }
    return out;
}

TestResult inverse_normal_combination(const std::vector<double>& pvalues) {
    require_pvalues(pvalues);
    const ProbitVector pv = make_probits(pvalues);
    double sum = 0.0;
    for (const double q : pv.probit) sum += q;
    return left_normal_result("inverse_normal",
                              sum / std::sqrt(static_cast<double>(pvalues.size())));
}

double probit_correlation(const std::vector<double>& probits) {
    if (probits.size() < 2) throw DegenerateInputError("correlation needs at least 2 probits");
    const double m = stats::mean(probits);
    double ss = 0.0;
    for (const double q : probits) ss += (q - m) * (q - m);
    return 1.0 - ss / static_cast<double>(probits.size() - 1);
}

double probit_correlation_floor(double theta_hat, std::size_t n) {
    if (n < 2) throw DegenerateInputError("correlation floor needs at least 2 units");
    return std::max(-1.0 / static_cast<double>(n - 1), theta_hat);
}

TestResult correlated_inverse_normal(const std::vector<double>& pvalues, double theta) {
    require_pvalues(pvalues);
    const auto n = static_cast<double>(pvalues.size());
    const double denom2 = n * (1.0 + (n - 1.0) * theta);
    if (!(1.0 + (n - 1.0) * theta > 0.0)) {
        throw DegenerateInputError("probit correlation too negative to combine");
    }
    const ProbitVector pv = make_probits(pvalues);
    double sum = 0.0;
    for (const double q : pv.probit) sum += q;
    TestResult r = left_normal_result("correlated_inverse_normal", sum / std::sqrt(denom2));
    r.diagnostics["theta"] = theta;
    return r;
}

TestResult adjusted_inverse_normal(const std::vector<double>& pvalues, double kappa) {
    require_pvalues(pvalues);
    const auto n = static_cast<double>(pvalues.size());
    const ProbitVector pv = make_probits(pvalues);
    const double theta_hat = probit_correlation(pv.probit);
    const double theta_star = probit_correlation_floor(theta_hat, pvalues.size());
    const double theta_adj =
        theta_star + kappa * std::sqrt(2.0 / (n + 1.0)) * (1.0 - theta_star);

    TestResult r = correlated_inverse_normal(pvalues, theta_adj);
    r.name = "adjusted_inverse_normal";
    r.diagnostics["theta_hat"] = theta_hat;
    r.diagnostics["theta_star"] = theta_star;
    r.diagnostics["theta"] = theta_adj;
    r.diagnostics["kappa"] = kappa;
    return r;
}

SimesDecision simes_test(const std::vector<double>& pvalues) {
    if (pvalues.empty()) throw DegenerateInputError("step-up decision needs at least 1 p-value");
    SimesDecision d;
    d.sorted_p = pvalues;
    std::sort(d.sorted_p.begin(), d.sorted_p.end());
    const auto n = static_cast<double>(pvalues.size());
    const std::array<double, 3> levels = {0.01, 0.05, 0.10};
    for (std::size_t level = 0; level < 3; ++level) {
        bool reject = false;
        d.thresholds[level].reserve(d.sorted_p.size());
        for (std::size_t i = 0; i < d.sorted_p.size(); ++i) {
            const double bound = static_cast<double>(i + 1) * levels[level] / n;
            d.thresholds[level].push_back(bound);
            if (d.sorted_p[i] <= bound) reject = true;
        }
        d.accept[level] = !reject;
    }
    return d;
}

TestResult cross_section_dependence(const Panel& panel, const AdfSpec& spec) {
    if (panel.n_units() < 2) {
        throw DegenerateInputError("dependence statistic needs at least 2 units");
    }
    require_balanced(panel);
    const auto n = panel.n_units();
    const auto t_size = panel.n_times();

    TestResult r;
    r.name = "cd";

    // Residuals of unit i start at month (lag_i + 1); pairs are correlated
    // over the months both units cover.
    std::vector<std::vector<double>> resid(n);
    std::vector<int> start(n);
    for (std::size_t i = 0; i < n; ++i) {
        const AdfFit fit = adf_fit(panel.row(i), spec);
        resid[i].assign(fit.residuals.data(), fit.residuals.data() + fit.residuals.size());
        start[i] = static_cast<int>(t_size) - static_cast<int>(fit.residuals.size());
        r.per_unit.push_back(UnitDiagnostic{panel.units()[i], fit.t_stat, fit.lag, std::nullopt});
    }

    double sum = 0.0, sum_corr = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const int s = std::max(start[i], start[j]);
            const auto len = static_cast<std::size_t>(static_cast<int>(t_size) - s);
            if (len < 3) throw DegenerateInputError("residual overlap too short");
            const std::vector<double> a(resid[i].end() - static_cast<std::ptrdiff_t>(len),
                                        resid[i].end());
            const std::vector<double> b(resid[j].end() - static_cast<std::ptrdiff_t>(len),
                                        resid[j].end());
            const double rho = stats::correlation(a, b);
            sum += std::sqrt(static_cast<double>(len)) * rho;
            sum_corr += rho;
            ++pairs;
        }
    }

    const auto nd = static_cast<double>(n);
    r.statistic = std::sqrt(2.0 / (nd * (nd - 1.0))) * sum;
    r.p_value = 2.0 * (1.0 - stats::normal_cdf(std::abs(r.statistic)));
    // Two-sided: the decision applies to |statistic|, critical values are the
    // upper alpha/2 normal quantiles.
    r.tail = Tail::right;
    r.critical_values = CriticalValues{stats::normal_quantile(0.995),
                                       stats::normal_quantile(0.975),
                                       stats::normal_quantile(0.95)};
    r.reject = decide(std::abs(r.statistic), *r.critical_values, Tail::right);
    r.diagnostics["n_pairs"] = static_cast<double>(pairs);
    r.diagnostics["avg_pairwise_corr"] = sum_corr / static_cast<double>(pairs);
    r.diagnostics["two_sided"] = 1.0;
    return r;
}

const char* to_string(UnitPvalueKind k) noexcept {
    switch (k) {
        case UnitPvalueKind::adf: return "adf";
        case UnitPvalueKind::cadf_mean_others: return "cadf_mean_others";
        default: return "cadf_first_pc";
    }
}

namespace {

struct UnitFits {
    std::vector<UnitDiagnostic> diags;
    std::map<std::string, double> extra;  // per-unit correlation shares and the like
};

/// Differences of every unit, one column per unit, rows aligned with dy.
Eigen::MatrixXd difference_matrix(const std::vector<std::vector<double>>& rows) {
    const auto n = rows.size();
    const auto t_size = rows.front().size();
    Eigen::MatrixXd d(t_size - 1, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t s = 0; s + 1 < t_size; ++s) {
            d(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) =
                rows[i][s + 1] - rows[i][s];
        }
    }
    return d;
}

UnitFits unit_fits(const Panel& panel, UnitPvalueKind kind, tables::TableCache& cache,
                   const ComboSpec& spec) {
    if (panel.n_units() < 2) {
        throw DegenerateInputError("panel tests need at least 2 units");
    }
    require_balanced(panel);
    const auto n = panel.n_units();
    const auto t_size = panel.n_times();

    std::vector<std::vector<double>> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = panel.row(i);

    UnitFits out;
    out.diags.reserve(n);

    if (kind == UnitPvalueKind::adf) {
        // Table and fit share the lag rule; selection shifts the null law.
        const tables::QuantileTable& table =
            spec.adf.rule == LagRule::aic_selected
                ? cache.df_table_selected(spec.adf.det, static_cast<int>(t_size),
                                          spec.adf.max_lag)
                : cache.df_table(spec.adf.det, static_cast<int>(t_size), spec.adf.fixed_lag);
        for (std::size_t i = 0; i < n; ++i) {
            const AdfFit fit = adf_fit(rows[i], spec.adf);
            out.diags.push_back(
                UnitDiagnostic{panel.units()[i], fit.t_stat, fit.lag,
                               tables::pvalue_from_table(table, fit.t_stat)});
        }
        return out;
    }

    const Eigen::MatrixXd diffs = difference_matrix(rows);
    Eigen::VectorXd shared_pc;
    if (kind == UnitPvalueKind::cadf_first_pc) {
        // Standardize each column so no unit dominates the component.
        Eigen::MatrixXd std_diffs = diffs;
        for (Eigen::Index c = 0; c < std_diffs.cols(); ++c) {
            const double m = std_diffs.col(c).mean();
            std_diffs.col(c).array() -= m;
            const double sd = std::sqrt(std_diffs.col(c).squaredNorm() /
                                        static_cast<double>(std_diffs.rows() - 1));
            if (!(sd > 0.0)) throw DegenerateInputError("constant series cannot be standardized");
            std_diffs.col(c) /= sd;
        }
        shared_pc = extract_factors(std_diffs, 1).factors.col(0);
    }

    const tables::QuantileTable& surface = cache.hansen_surface(spec.cadf.det);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x(t_size - 1);
        if (kind == UnitPvalueKind::cadf_mean_others) {
            for (std::size_t s = 0; s + 1 < t_size; ++s) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (j != i) acc += diffs(static_cast<Eigen::Index>(s),
                                             static_cast<Eigen::Index>(j));
                }
                x[s] = acc / static_cast<double>(n - 1);
            }
        } else {
            for (std::size_t s = 0; s + 1 < t_size; ++s) {
                x[s] = shared_pc(static_cast<Eigen::Index>(s));
            }
        }
        const CadfFit fit = cadf_fit(rows[i], x, spec.cadf);
        const double p = tables::pvalue_from_surface(surface, fit.t_stat, fit.rho2);
        out.diags.push_back(UnitDiagnostic{panel.units()[i], fit.t_stat, fit.lag_y, p});
        out.extra["rho2_" + panel.units()[i]] = fit.rho2;
    }
    return out;
}

const char* combined_name(UnitPvalueKind kind) {
    switch (kind) {
        case UnitPvalueKind::adf: return "padf";
        case UnitPvalueKind::cadf_mean_others: return "pcadf";
        default: return "pcadf_pc";
    }
}

}  // namespace

std::vector<double> unit_pvalues(const Panel& panel, UnitPvalueKind kind,
                                 tables::TableCache& cache, const ComboSpec& spec) {
    const UnitFits fits = unit_fits(panel, kind, cache, spec);
    std::vector<double> p;
    p.reserve(fits.diags.size());
    for (const auto& d : fits.diags) p.push_back(*d.p_value);
    return p;
}

ComboFamilyResult combination_test(const Panel& panel, UnitPvalueKind kind,
                                   tables::TableCache& cache, const ComboSpec& spec) {
    const TestResult cd = cross_section_dependence(panel, spec.adf);
    const UnitFits fits = unit_fits(panel, kind, cache, spec);

    ComboFamilyResult out;
    out.pvalues.reserve(fits.diags.size());
    for (const auto& d : fits.diags) out.pvalues.push_back(*d.p_value);
    out.cd_stat = cd.statistic;
    out.cd_pvalue = *cd.p_value;
    out.dependence_branch = out.cd_pvalue < spec.cd_threshold;

    out.combined = out.dependence_branch ? adjusted_inverse_normal(out.pvalues)
                                         : inverse_normal_combination(out.pvalues);
    out.combined.name = combined_name(kind);
    out.combined.per_unit = fits.diags;
    for (const auto& [key, value] : fits.extra) out.combined.diagnostics[key] = value;
    out.combined.diagnostics["cd_stat"] = out.cd_stat;
    out.combined.diagnostics["cd_pvalue"] = out.cd_pvalue;
    out.combined.diagnostics["dependence_branch"] = out.dependence_branch ? 1.0 : 0.0;
    out.combined.diagnostics["cd_threshold"] = spec.cd_threshold;
    return out;
}

SimesFamilyResult simes_family_test(const Panel& panel, UnitPvalueKind kind,
                                    tables::TableCache& cache, const ComboSpec& spec) {
    SimesFamilyResult out;
    out.pvalues = unit_pvalues(panel, kind, cache, spec);
    out.decision = simes_test(out.pvalues);
    return out;
}

}  // namespace purt
