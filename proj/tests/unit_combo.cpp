#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "purt/combo.hpp"
#include "purt/errors.hpp"
#include "purt/rng.hpp"
#include "purt/stats.hpp"
#include "purt/synthetic.hpp"

using namespace purt;

namespace {

Panel dependent_panel(std::size_t n, std::size_t t, std::uint64_t seed) {
    DgpSpec spec;
    spec.dgp = Dgp::factor;
    spec.n_units = n;
    spec.n_times = t;
    spec.seed = seed;
    spec.factor_share = 0.7;
    return gen_panel(spec);
}

}  // namespace

TEST_CASE("probits clamp extreme p-values instead of diverging") {
    const ProbitVector v = make_probits({0.0, 1.0, 0.5});
    CHECK(v.p[0] == 1e-6);
    CHECK(v.p[1] == 1.0 - 1e-6);
    CHECK(v.p[2] == 0.5);
    CHECK(std::isfinite(v.probit[0]));
    CHECK(std::isfinite(v.probit[1]));
    CHECK(v.probit[2] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(v.probit[0] == doctest::Approx(-v.probit[1]).epsilon(1e-9));

    CHECK_THROWS_AS((void)make_probits({0.5, -0.1}), DataError);
    CHECK_THROWS_AS((void)make_probits({0.5, 1.2}), DataError);
    CHECK_THROWS_AS((void)inverse_normal_combination({}), DegenerateInputError);
    CHECK_THROWS_AS((void)inverse_normal_combination({0.5}), DegenerateInputError);
}

TEST_CASE("plain combination is the scaled probit sum") {
    const std::vector<double> p = {0.02, 0.3, 0.6, 0.11};
    const TestResult r = inverse_normal_combination(p);

    double sum = 0.0;
    for (const double pi : p) sum += stats::normal_quantile(pi);
    CHECK(r.statistic == doctest::Approx(sum / 2.0).epsilon(1e-12));
    CHECK(r.name == "inverse_normal");
    CHECK(r.tail == Tail::left);
    CHECK(r.critical_values->pct5 == -tables::kNormalRightTail[1]);
    REQUIRE(r.p_value.has_value());
    CHECK(*r.p_value == doctest::Approx(stats::normal_cdf(r.statistic)).epsilon(1e-12));
    CHECK(r.reject == decide(r.statistic, *r.critical_values, r.tail));

    // Indifferent evidence combines to exactly zero.
    const TestResult flat = inverse_normal_combination({0.5, 0.5, 0.5, 0.5});
    CHECK(flat.statistic == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("probit correlation is one for identical p-values and floored below") {
    const ProbitVector same = make_probits({0.3, 0.3, 0.3, 0.3, 0.3});
    CHECK(probit_correlation(same.probit) == doctest::Approx(1.0).epsilon(1e-12));

    // Wildly dispersed probits push the raw estimate negative; the floor
    // keeps the implied variance positive.
    const ProbitVector wide = make_probits({1e-6, 1.0 - 1e-6, 1e-6, 1.0 - 1e-6});
    const double theta_hat = probit_correlation(wide.probit);
    CHECK(theta_hat < 0.0);
    CHECK(probit_correlation_floor(theta_hat, 4) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
    CHECK(probit_correlation_floor(0.4, 4) == 0.4);

    CHECK_THROWS_AS((void)probit_correlation({0.5}), DegenerateInputError);
}

TEST_CASE("known-correlation combination matches its formula") {
    const std::vector<double> p = {0.04, 0.2, 0.5, 0.8, 0.01};
    const double theta = 0.3;
    const TestResult r = correlated_inverse_normal(p, theta);

    double sum = 0.0;
    for (const double pi : p) sum += stats::normal_quantile(pi);
    const double denom = std::sqrt(5.0 * (1.0 + 4.0 * theta));
    CHECK(r.statistic == doctest::Approx(sum / denom).epsilon(1e-12));
    CHECK(r.diagnostics.at("theta") == theta);

    // theta = 0 collapses to the independence combination.
    const TestResult indep = correlated_inverse_normal(p, 0.0);
    const TestResult plain = inverse_normal_combination(p);
    CHECK(indep.statistic == doctest::Approx(plain.statistic).epsilon(1e-14));

    // The implied variance must stay positive.
    CHECK_THROWS_AS((void)correlated_inverse_normal(p, -0.25), DegenerateInputError);
}

TEST_CASE("feasible combination plugs in the inflated correlation estimate") {
    const std::vector<double> p = {0.02, 0.4, 0.15, 0.7, 0.33, 0.08};
    const TestResult r = adjusted_inverse_normal(p);

    const ProbitVector v = make_probits(p);
    const double theta_hat = probit_correlation(v.probit);
    const double theta_star = probit_correlation_floor(theta_hat, 6);
    const double theta = theta_star + 0.2 * std::sqrt(2.0 / 7.0) * (1.0 - theta_star);
    double sum = 0.0;
    for (const double probit : v.probit) sum += probit;
    CHECK(r.statistic ==
          doctest::Approx(sum / std::sqrt(6.0 * (1.0 + 5.0 * theta))).epsilon(1e-12));
    CHECK(r.name == "adjusted_inverse_normal");
    CHECK(r.diagnostics.at("theta_hat") == doctest::Approx(theta_hat).epsilon(1e-12));
    CHECK(r.diagnostics.at("theta_star") == doctest::Approx(theta_star).epsilon(1e-12));
    CHECK(r.diagnostics.at("theta") == doctest::Approx(theta).epsilon(1e-12));
    CHECK(r.diagnostics.at("kappa") == 0.2);

    // Identical p-values: theta = 1 exactly, so the statistic reduces to a
    // single probit regardless of N.
    const TestResult same = adjusted_inverse_normal({0.2, 0.2, 0.2, 0.2});
    CHECK(same.diagnostics.at("theta") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(same.statistic == doctest::Approx(stats::normal_quantile(0.2)).epsilon(1e-9));
}

TEST_CASE("step-up decision follows the sorted thresholds") {
    // One strong p-value among ten: 0.002 <= 1 * 0.05 / 10 rejects at 5%,
    // and also at 1% (0.002 > 0.001 fails rank 1 but no other rank helps;
    // at 1% the thresholds are i/1000).
    std::vector<double> p = {0.002, 0.8, 0.9, 0.5, 0.6, 0.7, 0.95, 0.85, 0.75, 0.65};
    const SimesDecision d = simes_test(p);
    CHECK(!d.accept[1]);  // rejected at 5%
    CHECK(!d.accept[2]);  // rejected at 10%
    CHECK(d.accept[0]);   // 0.002 > 0.001 and later ranks are hopeless
    CHECK(std::is_sorted(d.sorted_p.begin(), d.sorted_p.end()));
    REQUIRE(d.thresholds[1].size() == 10);
    CHECK(d.thresholds[1][0] == doctest::Approx(0.005).epsilon(1e-15));
    CHECK(d.thresholds[1][9] == doctest::Approx(0.05).epsilon(1e-15));

    // Permutation invariance: the decision only sees the order statistics.
    std::vector<double> shuffled = p;
    std::rotate(shuffled.begin(), shuffled.begin() + 3, shuffled.end());
    CHECK(simes_test(shuffled).accept == d.accept);

    // Uniform ones never reject; a single unit follows p_1 <= a directly.
    const SimesDecision ones = simes_test(std::vector<double>(5, 1.0));
    CHECK(ones.accept == std::array<bool, 3>{true, true, true});
    const SimesDecision solo = simes_test({0.04});
    CHECK(solo.accept == std::array<bool, 3>{true, false, false});

    CHECK_THROWS_AS((void)simes_test({}), DegenerateInputError);
}

TEST_CASE("dependence statistic is near zero for independent panels") {
    const Panel indep = testutil::rw_panel(8, 120, 91);
    const TestResult r = cross_section_dependence(indep);

    CHECK(r.name == "cd");
    CHECK(std::abs(r.statistic) < 2.5);
    REQUIRE(r.p_value.has_value());
    // Two-sided p recomputes from the statistic.
    CHECK(*r.p_value ==
          doctest::Approx(2.0 * (1.0 - stats::normal_cdf(std::abs(r.statistic)))).epsilon(1e-12));
    CHECK(r.diagnostics.at("n_pairs") == 28.0);
    CHECK(r.diagnostics.at("two_sided") == 1.0);
    // The decision is on |stat| against right-tail normal critical values.
    CHECK(r.reject == decide(std::abs(r.statistic), *r.critical_values, Tail::right));
    REQUIRE(r.per_unit.size() == 8);
}

TEST_CASE("dependence statistic explodes under a common factor") {
    const Panel dep = dependent_panel(8, 120, 92);
    const TestResult r = cross_section_dependence(dep);
    CHECK(r.statistic > 5.0);
    CHECK(r.reject[0]);
    CHECK(r.diagnostics.at("avg_pairwise_corr") > 0.2);
}

TEST_CASE("unit p-value kinds all produce usable vectors") {
    auto& cache = testutil::shared_cache();
    const Panel p = testutil::rw_panel(6, 100, 93);
    for (const UnitPvalueKind kind :
         {UnitPvalueKind::adf, UnitPvalueKind::cadf_mean_others, UnitPvalueKind::cadf_first_pc}) {
        const std::vector<double> pv = unit_pvalues(p, kind, cache);
        REQUIRE(pv.size() == 6);
        for (const double v : pv) {
            CHECK(v >= 1e-6);
            CHECK(v <= 1.0 - 1e-6);
        }
    }
    CHECK(std::string(to_string(UnitPvalueKind::adf)) == "adf");
    CHECK(std::string(to_string(UnitPvalueKind::cadf_mean_others)) == "cadf_mean_others");
    CHECK(std::string(to_string(UnitPvalueKind::cadf_first_pc)) == "cadf_first_pc");
}

TEST_CASE("combination branches on the dependence pre-test") {
    auto& cache = testutil::shared_cache();
    const Panel p = testutil::rw_panel(6, 100, 94);

    // Threshold 0: the pre-test can never fire, so the plain combination runs.
    ComboSpec never;
    never.cd_threshold = 0.0;
    const ComboFamilyResult indep = combination_test(p, UnitPvalueKind::adf, cache, never);
    CHECK(!indep.dependence_branch);
    CHECK(indep.combined.diagnostics.at("dependence_branch") == 0.0);

    // Threshold 1: any interior CD p-value fires the adjusted branch.
    ComboSpec always;
    always.cd_threshold = 1.0;
    const ComboFamilyResult dep = combination_test(p, UnitPvalueKind::adf, cache, always);
    CHECK(dep.dependence_branch);
    CHECK(dep.cd_pvalue < 1.0);
    CHECK(dep.cd_pvalue > 0.0);

    // Same per-unit evidence on both branches; only the combination differs.
    REQUIRE(indep.pvalues.size() == 6);
    CHECK(indep.pvalues == dep.pvalues);
    CHECK(indep.combined.name == "padf");
    CHECK(dep.combined.name == "padf");
    CHECK(indep.combined.diagnostics.at("cd_pvalue") ==
          doctest::Approx(dep.cd_pvalue).epsilon(1e-12));

    // The branch statistics reproduce the standalone combinations.
    const TestResult plain = inverse_normal_combination(indep.pvalues);
    const TestResult adjusted = adjusted_inverse_normal(dep.pvalues);
    CHECK(indep.combined.statistic == doctest::Approx(plain.statistic).epsilon(1e-12));
    CHECK(dep.combined.statistic == doctest::Approx(adjusted.statistic).epsilon(1e-12));
}

TEST_CASE("combined result names follow the p-value kind") {
    auto& cache = testutil::shared_cache();
    const Panel p = testutil::rw_panel(5, 100, 95);
    CHECK(combination_test(p, UnitPvalueKind::cadf_mean_others, cache).combined.name == "pcadf");
    CHECK(combination_test(p, UnitPvalueKind::cadf_first_pc, cache).combined.name == "pcadf_pc");
}

TEST_CASE("step-up family reuses the same per-unit p-values") {
    auto& cache = testutil::shared_cache();
    const Panel p = testutil::rw_panel(6, 100, 96);
    const SimesFamilyResult fam = simes_family_test(p, UnitPvalueKind::adf, cache);
    const std::vector<double> direct = unit_pvalues(p, UnitPvalueKind::adf, cache);
    CHECK(fam.pvalues == direct);

    std::vector<double> sorted = direct;
    std::sort(sorted.begin(), sorted.end());
    CHECK(fam.decision.sorted_p == sorted);
}

TEST_CASE("combination machinery rejects stationary panels decisively") {
    auto& cache = testutil::shared_cache();
    const Panel stat = testutil::ar1_panel(6, 120, 97, 0.5);
    const ComboFamilyResult r = combination_test(stat, UnitPvalueKind::adf, cache);
    CHECK(r.combined.reject[1]);
    const SimesFamilyResult s = simes_family_test(stat, UnitPvalueKind::adf, cache);
    CHECK(!s.decision.accept[1]);
}
