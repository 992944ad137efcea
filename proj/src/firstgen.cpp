#include "purt/firstgen.hpp"

#include <cmath>
#include <vector>

#include "purt/detail/llc_core.hpp"
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

/// Constant-case (by default) ADF fit per unit, with a p-value interpolated
/// from the simulated t table of the same fitting procedure. The table must
/// share the fit's lag rule: lag selection shifts the null distribution.
std::vector<UnitDiagnostic> per_unit_adf(const Panel& panel, tables::TableCache& cache,
                                         const AdfSpec& spec) {
    std::vector<UnitDiagnostic> out;
    out.reserve(panel.n_units());
    const int T = static_cast<int>(panel.n_times());
    const tables::QuantileTable& table =
        spec.rule == LagRule::aic_selected
            ? cache.df_table_selected(spec.det, T, spec.max_lag)
            : cache.df_table(spec.det, T, spec.fixed_lag);
    for (std::size_t i = 0; i < panel.n_units(); ++i) {
        const AdfFit fit = adf_fit(panel.row(i), spec);
        UnitDiagnostic d;
        d.unit = panel.units()[i];
        d.t_stat = fit.t_stat;
        d.lag = fit.lag;
        d.p_value = tables::pvalue_from_table(table, fit.t_stat);
        out.push_back(std::move(d));
    }
    return out;
}

double fisher_statistic(const std::vector<UnitDiagnostic>& units) {
    double p_sum = 0.0;
    for (const auto& u : units) p_sum += -2.0 * std::log(*u.p_value);
    return p_sum;
}

CriticalValues chi_squared_right_cvs(int dof) {
    if (dof == 20) {
        const auto& cv = tables::kChiSquared20RightTail;
        return CriticalValues{cv[0], cv[1], cv[2]};
    }
    return CriticalValues{stats::chi_squared_quantile(0.99, dof),
                          stats::chi_squared_quantile(0.95, dof),
                          stats::chi_squared_quantile(0.90, dof)};
}

}  // namespace

TestResult mw_test(const Panel& panel, tables::TableCache& cache, const AdfSpec& spec) {
    require_panel(panel);
    TestResult r;
    r.name = "mw";
    r.per_unit = per_unit_adf(panel, cache, spec);
    r.statistic = fisher_statistic(r.per_unit);
    const int dof = 2 * static_cast<int>(panel.n_units());
    r.p_value = 1.0 - stats::chi_squared_cdf(r.statistic, dof);
    r.tail = Tail::right;
    r.critical_values = chi_squared_right_cvs(dof);
    r.reject = decide(r.statistic, *r.critical_values, r.tail);
    r.diagnostics["dof"] = static_cast<double>(dof);
    return r;
}

TestResult choi_z_test(const Panel& panel, tables::TableCache& cache, const AdfSpec& spec) {
    require_panel(panel);
    TestResult r;
    r.name = "choi_z";
    r.per_unit = per_unit_adf(panel, cache, spec);
    const double n = static_cast<double>(panel.n_units());
    const double p_stat = fisher_statistic(r.per_unit);
    r.statistic = std::sqrt(n) * (p_stat / n - 2.0) / 2.0;
    r.p_value = 1.0 - stats::normal_cdf(r.statistic);
    r.tail = Tail::right;
    r.critical_values = right_normal_cvs();
    r.reject = decide(r.statistic, *r.critical_values, r.tail);
    r.diagnostics["fisher_p_stat"] = p_stat;
    return r;
}

TestResult llc_test(const Panel& panel, tables::TableCache& cache, const LrvSpec& lrv,
                    int max_lag) {
    require_panel(panel);
    const int T = static_cast<int>(panel.n_times());

    std::vector<detail::LlcUnit> units;
    units.reserve(panel.n_units());
    for (std::size_t i = 0; i < panel.n_units(); ++i) {
        units.push_back(detail::llc_unit_block(panel.row(i), max_lag, lrv));
    }
    const detail::LlcPooled pooled = detail::llc_pool(units);
    const tables::LlcAdjustments adj = cache.llc_adjustments(T, max_lag);

    TestResult r;
    r.name = "llc";
    r.statistic = (pooled.t_rho - pooled.correction * adj.mu_star) / adj.sigma_star;
    r.p_value = stats::normal_cdf(r.statistic);
    r.tail = Tail::left;
    r.critical_values = left_normal_cvs();
    r.reject = decide(r.statistic, *r.critical_values, r.tail);
    r.diagnostics["rho_pool"] = pooled.rho;
    r.diagnostics["t_rho"] = pooled.t_rho;
    r.diagnostics["correction"] = pooled.correction;
    r.diagnostics["mu_star"] = adj.mu_star;
    r.diagnostics["sigma_star"] = adj.sigma_star;
    r.diagnostics["s_bar"] = pooled.s_bar;
    r.diagnostics["avg_effective_T"] = pooled.t_bar;
    return r;
}

TestResult ips_test(const Panel& panel, tables::TableCache& cache, const AdfSpec& spec) {
    require_panel(panel);
    const int T = static_cast<int>(panel.n_times());

    TestResult r;
    r.name = "ips";
    r.per_unit = per_unit_adf(panel, cache, spec);

    double t_bar = 0.0, mean_e = 0.0, mean_v = 0.0;
    for (const auto& u : r.per_unit) {
        const tables::IpsMoments m = cache.ips_moments(T, u.lag);
        t_bar += u.t_stat;
        mean_e += m.mean_t;
        mean_v += m.var_t;
    }
    const double n = static_cast<double>(panel.n_units());
    t_bar /= n;
    mean_e /= n;
    mean_v /= n;

    r.statistic = std::sqrt(n) * (t_bar - mean_e) / std::sqrt(mean_v);
    r.p_value = stats::normal_cdf(r.statistic);
    r.tail = Tail::left;
    r.critical_values = left_normal_cvs();
    r.reject = decide(r.statistic, *r.critical_values, r.tail);
    r.diagnostics["t_bar"] = t_bar;
    r.diagnostics["mean_Et"] = mean_e;
    r.diagnostics["mean_Vt"] = mean_v;
    return r;
}

}  // namespace purt
