#include <gtest/gtest.h>

#include <cmath>

#include "tdiff/csv.hpp"
#include "tdiff/error.hpp"
#include "tdiff/model.hpp"
#include "tdiff/model_io.hpp"

using namespace tdiff;

namespace {

bool mentions(const ValidationError& e, const std::string& text) {
    for (const auto& p : e.problems())
        if (p.find(text) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST(Model, MinimalModelIsValid) {
    const auto m = make_model({0.0}, {1.0, -1.0}, {1.0, 1.0});
    EXPECT_TRUE(validate(m).empty());
    EXPECT_EQ(m.num_thresholds(), 1);
    EXPECT_EQ(m.num_regimes(), 2);
}

TEST(Model, RejectsUnsortedThresholds) {
    try {
        make_model({1.0, 0.0}, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_TRUE(mentions(e, "thresholds not strictly increasing"));
    }
}

TEST(Model, RejectsNonPositiveVolatility) {
    try {
        make_model({0.0}, {1.0, -1.0}, {1.0, 0.0});
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_TRUE(mentions(e, "volatility must be positive"));
    }
}

TEST(Model, ReportsEveryProblem) {
    ThresholdModel m;
    m.thresholds = Vector::Constant(2, 0.0);
    m.drifts = Vector::Constant(2, std::nan(""));
    m.vols = Vector::Constant(3, -1.0);
    const auto problems = validate(m);
    EXPECT_GE(problems.size(), 3u);
}

TEST(Model, RejectsEmptyThresholds) {
    EXPECT_THROW(make_model({}, {1.0}, {1.0}), ValidationError);
}

TEST(Model, RegimeIndexUsesClosedRightIntervals) {
    const auto m = make_model({0.0, 1.0}, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
    EXPECT_EQ(regime_index(m, 0.0), 0);
    EXPECT_EQ(regime_index(m, 0.5), 1);
    EXPECT_EQ(regime_index(m, 1.0), 1);
    EXPECT_EQ(regime_index(m, 2.0), 2);
    EXPECT_EQ(regime_index(m, std::nextafter(0.0, 1.0)), 1);
    EXPECT_EQ(regime_index(m, -1e300), 0);
    EXPECT_EQ(regime_index(m, INFINITY), 2);
    EXPECT_THROW(regime_index(m, std::nan("")), PreconditionError);
}

TEST(Model, RegimeIndexIsMonotone) {
    const auto m = make_model({-1.0, 0.0, 2.5}, {0, 0, 0, 0}, {1, 1, 1, 1});
    Eigen::Index prev = 0;
    for (double x = -3.0; x <= 4.0; x += 0.01) {
        const auto r = regime_index(m, x);
        EXPECT_GE(r, prev);
        prev = r;
    }
}

TEST(Model, CoefficientsAtPoints) {
    const auto m = make_model({0.0}, {1.0, -1.0}, {1.0, 2.0});
    EXPECT_EQ(drift_at(m, -3.0), 1.0);
    EXPECT_EQ(drift_at(m, 0.0), 1.0);
    EXPECT_EQ(vol_at(m, 0.1), 2.0);
}

TEST(Model, DriftRatiosAndWidths) {
    const auto m = make_model({0.0, 1.5}, {2.0, 0.0, -1.0}, {1.0, 2.0, 0.5});
    const Vector k = drift_ratios(m);
    EXPECT_DOUBLE_EQ(k(0), 2.0);
    EXPECT_DOUBLE_EQ(k(1), 0.0);
    EXPECT_DOUBLE_EQ(k(2), -4.0);
    const Vector w = regime_widths(m);
    EXPECT_TRUE(std::isinf(w(0)));
    EXPECT_DOUBLE_EQ(w(1), 1.5);
    EXPECT_TRUE(std::isinf(w(2)));
}

TEST(ModelIo, RoundTripIsExact) {
    const auto m = make_model({-0.1, 1.0 / 3.0, 2.0}, {0.1, 0.0, -1e-7, 2.0 / 7.0}, {0.3, 1.0, 2.5, 1e-3});
    const auto back = parse_model_json(model_to_json(m));
    EXPECT_EQ(back.thresholds, m.thresholds);
    EXPECT_EQ(back.drifts, m.drifts);
    EXPECT_EQ(back.vols, m.vols);
}

TEST(ModelIo, RejectsUnknownAndMissingFields) {
    EXPECT_THROW(parse_model_json(R"({"thresholds":[0],"drifts":[1,-1]})"), ValidationError);
    EXPECT_THROW(parse_model_json(R"({"thresholds":[0],"drifts":[1,-1],"vols":[1,1],"x":1})"), ValidationError);
    EXPECT_THROW(parse_model_json(R"({"thresholds":[0],"drifts":[1,"a"],"vols":[1,1]})"), ValidationError);
    EXPECT_THROW(parse_model_json("{not json"), ValidationError);
    EXPECT_THROW(parse_model_json("[1,2]"), ValidationError);
    EXPECT_NO_THROW(parse_model_json(R"({"thresholds":[0],"drifts":[1,-1],"vols":[1,1]})"));
}

TEST(Csv, SeventeenDigitsRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
        const auto s = format_number(v);
        EXPECT_EQ(std::stod(s), v) << s;
    }
    EXPECT_EQ(format_number(INFINITY), "inf");
    EXPECT_EQ(format_number(-INFINITY), "-inf");
}

TEST(Csv, GridIncludesBothEnds) {
    const auto g = parse_grid("-1:2:4");
    ASSERT_EQ(g.size(), 4u);
    EXPECT_EQ(g.front(), -1.0);
    EXPECT_EQ(g[1], 0.0);
    EXPECT_EQ(g.back(), 2.0);
}

TEST(Csv, GridRejectsDegenerateSpecs) {
    EXPECT_THROW(parse_grid("0:1:1"), PreconditionError);
    EXPECT_THROW(parse_grid("1:1:5"), PreconditionError);
    EXPECT_THROW(parse_grid("2:1:5"), PreconditionError);
    EXPECT_THROW(parse_grid("0:1:2.5"), PreconditionError);
    EXPECT_THROW(parse_grid("0:1"), PreconditionError);
    EXPECT_THROW(parse_grid("a:1:3"), PreconditionError);
}

TEST(Csv, ListParsing) {
    const auto v = parse_list("0,-1.5,2e-3");
    ASSERT_EQ(v.size(), 3u);
    EXPECT_EQ(v[1], -1.5);
    EXPECT_THROW(parse_list("1,,2"), PreconditionError);
}
