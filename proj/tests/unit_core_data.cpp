#include <doctest.h>

#include <vector>

#include "helpers.hpp"
#include "purt/csv.hpp"
#include "purt/errors.hpp"
#include "purt/month_index.hpp"
#include "purt/panel.hpp"

using namespace purt;

TEST_CASE("month parsing is strict") {
    const MonthIndex m = MonthIndex::parse("2004-07");
    CHECK(m.year == 2004);
    CHECK(m.month == 7);
    CHECK(m.str() == "2004-07");

    CHECK_THROWS_AS((void)MonthIndex::parse("2004-07-01"), SchemaError);  // day component
    CHECK_THROWS_AS((void)MonthIndex::parse("2004-13"), SchemaError);
    CHECK_THROWS_AS((void)MonthIndex::parse("2004-00"), SchemaError);
    CHECK_THROWS_AS((void)MonthIndex::parse("2004/07"), SchemaError);
    CHECK_THROWS_AS((void)MonthIndex::parse("200407"), SchemaError);
    CHECK_THROWS_AS((void)MonthIndex::parse("2004-7"), SchemaError);
    CHECK_THROWS_AS((void)MonthIndex::parse(""), SchemaError);
}

TEST_CASE("panel cells, balance, and row extraction") {
    Panel p({"A", "B"}, {MonthIndex{2000, 1}, MonthIndex{2000, 2}, MonthIndex{2000, 3}});
    CHECK_FALSE(p.balanced());
    for (std::size_t t = 0; t < 3; ++t) {
        p.set(0, t, static_cast<double>(t));
        p.set(1, t, 10.0 + static_cast<double>(t));
    }
    CHECK(p.balanced());
    CHECK(p.row(1) == std::vector<double>{10.0, 11.0, 12.0});
    CHECK(p.unit_index("B") == 1);
    CHECK(p.has_unit("A"));
    CHECK_FALSE(p.has_unit("Z"));
    CHECK_THROWS_AS((void)p.unit_index("Z"), DataError);

    p.clear(1, 1);
    CHECK_FALSE(p.balanced());
    CHECK_THROWS_AS((void)p.row(1), UnbalancedError);
    CHECK_THROWS_AS((void)require_balanced(p), UnbalancedError);

    const Panel without = p.without_unit("B");
    CHECK(without.n_units() == 1);
    CHECK(without.units()[0] == "A");
    CHECK(without.balanced());
}

TEST_CASE("alignment takes the union of timestamps inside the window") {
    RawSeries a{"A", Variable::rate, {{MonthIndex{2000, 1}, 1.0}, {MonthIndex{2000, 3}, 3.0}}};
    RawSeries b{"B", Variable::rate, {{MonthIndex{2000, 2}, 2.0}, {MonthIndex{2000, 3}, 4.0}}};
    RawSeries noise{"A", Variable::cpi, {{MonthIndex{2000, 2}, 99.0}}};

    const Panel p = align_panel({a, noise, b}, Variable::rate);
    CHECK(p.n_units() == 2);
    CHECK(p.n_times() == 3);  // union {01, 02, 03}
    CHECK(p.units() == std::vector<std::string>{"A", "B"});
    CHECK_FALSE(p.balanced());
    CHECK(*p.at(0, 0) == 1.0);
    CHECK_FALSE(p.at(0, 1).has_value());
    CHECK(*p.at(1, 2) == 4.0);

    Window w;
    w.first = MonthIndex{2000, 3};
    const Panel clipped = align_panel({a, b}, Variable::rate, w);
    CHECK(clipped.n_times() == 1);
    CHECK(clipped.balanced());

    // A unit left with no observation in the window is an error.
    Window w2;
    w2.last = MonthIndex{2000, 1};
    CHECK_THROWS_AS((void)align_panel({a, b}, Variable::rate, w2), DataError);

    RawSeries dup{"A", Variable::rate, {{MonthIndex{2000, 4}, 9.0}}};
    CHECK_THROWS_AS((void)align_panel({a, dup}, Variable::rate), DataError);
}

TEST_CASE("matrix conversion requires balance and preserves layout") {
    const Panel p = testutil::make_panel({{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}});
    const Eigen::MatrixXd m = to_matrix(p);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m(1, 2) == 6.0);

    Panel gap = p;
    gap.clear(0, 1);
    CHECK_THROWS_AS((void)to_matrix(gap), UnbalancedError);
}

TEST_CASE("long-format csv loads with shuffled columns and missing markers") {
    testutil::TempDir dir;
    const std::string path = dir.file("input.csv");
    testutil::write_file(path,
                         "variable,value,country,date\r\n"
                         "cpi,100.5,AA,2000-01\r\n"
                         "cpi,,AA,2000-02\r\n"
                         "cpi,NA,AA,2000-03\r\n"
                         "cpi,101.5,AA,2000-04\r\n"
                         "rate,4.25,AA,2000-01\r\n");

    const auto series = load_csv(path);
    REQUIRE(series.size() == 2);
    const auto& cpi = series[0].variable == Variable::cpi ? series[0] : series[1];
    const auto& rate = series[0].variable == Variable::cpi ? series[1] : series[0];
    REQUIRE(cpi.obs.size() == 2);  // the two missing markers are skipped
    CHECK(cpi.obs[0].t.str() == "2000-01");
    CHECK(cpi.obs[1].t.str() == "2000-04");
    CHECK(cpi.obs[1].value == 101.5);
    CHECK(rate.obs.size() == 1);
}

TEST_CASE("long-format csv rejects malformed input with row numbers") {
    testutil::TempDir dir;
    const std::string path = dir.file("bad.csv");

    testutil::write_file(path, "date,country,variable,value,extra\n");
    CHECK_THROWS_AS((void)load_csv(path), SchemaError);

    testutil::write_file(path, "date,country,variable\n");
    CHECK_THROWS_AS((void)load_csv(path), SchemaError);

    testutil::write_file(path,
                         "date,country,variable,value\n"
                         "2000-01,AA,cpi,100\n"
                         "2000-01,AA,cpi,101\n");
    try {
        (void)load_csv(path);
        FAIL("duplicate rows must throw");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("rows 2 and 3") != std::string::npos);
    }

    testutil::write_file(path,
                         "date,country,variable,value\n"
                         "2000-01,AA,gdp,1.0\n");
    CHECK_THROWS_AS((void)load_csv(path), SchemaError);

    testutil::write_file(path,
                         "date,country,variable,value\n"
                         "2000-01,AA,cpi,12x\n");
    CHECK_THROWS_AS((void)load_csv(path), SchemaError);

    testutil::write_file(path,
                         "date,country,variable,value\n"
                         "2000-01-15,AA,cpi,100\n");
    CHECK_THROWS_AS((void)load_csv(path), SchemaError);
}

TEST_CASE("panel csv round-trips values exactly") {
    Panel p = testutil::make_panel(
        {{0.1, -2.7182818284590455, 3e-13}, {1e17, 5.0, -0.30000000000000004}});
    p.clear(1, 1);  // a hole must survive the round trip as a hole

    testutil::TempDir dir;
    const std::string path = dir.file("panel.csv");
    save_panel_csv(p, path);
    const Panel q = load_panel_csv(path);

    REQUIRE(q.n_units() == p.n_units());
    REQUIRE(q.n_times() == p.n_times());
    CHECK(q.units() == p.units());
    for (std::size_t i = 0; i < p.n_units(); ++i) {
        for (std::size_t t = 0; t < p.n_times(); ++t) {
            REQUIRE(q.at(i, t).has_value() == p.at(i, t).has_value());
            if (p.at(i, t)) CHECK(*q.at(i, t) == *p.at(i, t));  // bit-exact
        }
    }
}
