#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "loadshift/core/calendar.hpp"
#include "loadshift/core/frame.hpp"
#include "loadshift/core/transforms.hpp"
#include "loadshift/core/trend.hpp"
#include "loadshift/util/error.hpp"

using namespace loadshift;

namespace {

std::vector<Date> daily(Date start, std::size_t n) {
  std::vector<Date> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(start + std::chrono::days{static_cast<int>(i)});
  return out;
}

TimeSeriesFrame single(const std::vector<double>& v, Date start = make_date(2020, 1, 1)) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = v[i];
  return {daily(start, v.size()), {"x"}, m};
}

}  // namespace

TEST(Date, IsoRoundTripAndWeekday) {
  const Date d = parse_date("2020-02-03");
  EXPECT_EQ(format_date(d), "2020-02-03");
  EXPECT_EQ(weekday_index(d), 0u);  // Monday
  const auto wk = iso_week(d);
  EXPECT_EQ(wk.year, 2020);
  EXPECT_EQ(wk.week, 6u);
  EXPECT_EQ(iso_week(parse_date("2019-02-04")).week, 6u);
  EXPECT_EQ(iso_week(parse_date("2021-01-01")).year, 2020);
  EXPECT_EQ(iso_week(parse_date("2021-01-01")).week, 53u);
  EXPECT_FALSE(from_iso_week(2019, 53, 1).has_value());
  EXPECT_THROW(parse_date("2020-02-30"), Error);
  EXPECT_EQ(*try_parse_date("3/15/2020", "%m/%d/%Y"), make_date(2020, 3, 15));
  EXPECT_EQ(*try_parse_date("20200315", "%Y%m%d"), make_date(2020, 3, 15));
}

TEST(Calendar, FederalHolidaysObserved) {
  EXPECT_TRUE(is_us_federal_holiday(make_date(2020, 11, 26)));  // Thanksgiving
  EXPECT_TRUE(is_us_federal_holiday(make_date(2020, 7, 3)));    // July 4 fell on Saturday
  EXPECT_FALSE(is_us_federal_holiday(make_date(2020, 7, 4)));
  EXPECT_TRUE(is_us_federal_holiday(make_date(2021, 12, 31)));  // New Year 2022 observed
  EXPECT_TRUE(is_us_federal_holiday(make_date(2020, 5, 25)));   // Memorial day
  const auto info = make_calendar_info(make_date(2020, 3, 15), true);
  EXPECT_EQ(info.weekday, 6u);
  EXPECT_EQ(info.month, 3u);
  EXPECT_EQ(info.day, 15u);
}

TEST(Frame, RejectsBrokenInvariants) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 1);
  const Date d = make_date(2020, 1, 1);
  EXPECT_THROW(TimeSeriesFrame({d, d}, {"x"}, m), Error);
  EXPECT_THROW(TimeSeriesFrame(daily(d, 2), {"x", "x"}, Eigen::MatrixXd::Zero(2, 2)), Error);
  EXPECT_THROW(TimeSeriesFrame(daily(d, 3), {"x"}, m), Error);
}

TEST(Frame, CsvRoundTripKeepsMissingDistinctFromZero) {
  Eigen::MatrixXd m(3, 2);
  m << 0.0, 1.5, kMissing, -2.25, 0.1, 3e-17;
  const TimeSeriesFrame f(daily(make_date(2020, 1, 1), 3), {"a", "b"}, m);
  const auto text = write_frame_csv(f);
  EXPECT_EQ(text.substr(0, 9), "date,a,b\n");
  const auto back = read_frame_csv(text);
  EXPECT_TRUE(is_missing(back.values()(1, 0)));
  EXPECT_EQ(back.values()(0, 0), 0.0);
  EXPECT_EQ(back.values()(2, 1), 3e-17);
  EXPECT_EQ(write_frame_csv(back), text);
}

TEST(LogTransform, Examples) {
  auto f = log_transform(single({std::numbers::e}), {"x"}, false);
  EXPECT_DOUBLE_EQ(f.values()(0, 0), 1.0);

  f = log_transform(single({1.0, 10.0, -5.0}), {"x"}, true);
  ASSERT_EQ(f.rows(), 2u);
  EXPECT_EQ(f.values()(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(f.values()(1, 0), std::log(10.0));

  f = log_transform(single({1.0, 0.0, 2.0}), {"x"}, false);
  EXPECT_EQ(f.rows(), 3u);
  EXPECT_TRUE(is_missing(f.values()(1, 0)));

  EXPECT_THROW(log_transform(single({1.0}), {"nope"}, true), Error);
}

TEST(LogTransform, ExpInvertsAndDropNeverEmitsNonFinite) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> pos(1e-3, 1e3), any(-10.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(30), w(30);
    for (auto& x : v) x = pos(rng);
    for (auto& x : w) x = any(rng);
    const auto f = log_transform(single(v), {"x"}, false);
    for (std::size_t i = 0; i < v.size(); ++i) {
      EXPECT_NEAR(std::exp(f.values()(static_cast<Eigen::Index>(i), 0)), v[i], 1e-12 * v[i]);
    }
    const auto g = log_transform(single(w), {"x"}, true);
    EXPECT_TRUE(g.values().allFinite());
  }
}

TEST(Difference, Examples) {
  auto d = difference(single({1, 2, 4, 7}), 1);
  ASSERT_EQ(d.rows(), 3u);
  EXPECT_EQ(d.values()(0, 0), 1.0);
  EXPECT_EQ(d.values()(1, 0), 2.0);
  EXPECT_EQ(d.values()(2, 0), 3.0);
  EXPECT_EQ(d.dates().front(), make_date(2020, 1, 2));

  d = difference(single({1, 2, 4, 7}), 2);
  ASSERT_EQ(d.rows(), 2u);
  EXPECT_EQ(d.values()(0, 0), 1.0);
  EXPECT_EQ(d.values()(1, 0), 1.0);

  d = difference(single({5, 5, 5, 5}), 1);
  EXPECT_TRUE(d.values().isZero(0.0));

  try {
    difference(single({1, 2}), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientData);
  }
}

TEST(Difference, CumulativeSumReconstructs) {
  std::mt19937 rng(3);
  std::normal_distribution<double> noise;
  for (int order = 1; order <= 3; ++order) {
    Eigen::MatrixXd m(40, 2);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = noise(rng);
    const TimeSeriesFrame f(daily(make_date(2021, 5, 1), 40), {"a", "b"}, m);
    const auto d = difference(f, order);
    const auto back = undifference(d, f.select({"a", "b"}).slice(f.dates().front(), f.dates()[order - 1]));
    ASSERT_EQ(back.rows(), f.rows());
    EXPECT_LT((back.values() - f.values()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(back.dates(), f.dates());
  }
}

TEST(WeeklyMovingAverage, Examples) {
  auto f = weekly_moving_average(single(std::vector<double>(10, 4.5)), {"x"});
  EXPECT_TRUE((f.values().array() == 4.5).all());
  // Idempotent on constants.
  EXPECT_EQ(weekly_moving_average(f, {"x"}).values(), f.values());

  f = weekly_moving_average(single({7, 0, 0, 0, 0, 0, 0}), {"x"});
  EXPECT_DOUBLE_EQ(f.values()(6, 0), 1.0);
  EXPECT_DOUBLE_EQ(f.values()(0, 0), 7.0);  // shrinking prefix
  EXPECT_DOUBLE_EQ(f.values()(1, 0), 3.5);

  std::vector<double> lin;
  for (int t = 1; t <= 20; ++t) lin.push_back(t);
  f = weekly_moving_average(single(lin), {"x"});
  for (Eigen::Index i = 6; i < 20; ++i) EXPECT_NEAR(f.values()(i, 0), lin[static_cast<std::size_t>(i)] - 3, 1e-12);
  EXPECT_EQ(f.rows(), lin.size());
}

TEST(AlignDayOfWeek, PairsSameIsoWeekAndWeekday) {
  const auto cur = single(std::vector<double>(7, 1.0), make_date(2020, 2, 3));
  const auto ref = single(std::vector<double>(21, 2.0), make_date(2019, 1, 28));
  const auto a = align_day_of_week(cur, ref);
  ASSERT_EQ(a.current_dates.size(), 7u);
  EXPECT_EQ(a.reference_dates.front(), make_date(2019, 2, 4));
  for (std::size_t i = 0; i < a.current_dates.size(); ++i) {
    EXPECT_EQ(weekday_index(a.current_dates[i]), weekday_index(a.reference_dates[i]));
  }
  EXPECT_TRUE(a.unpaired.empty());
  EXPECT_EQ(a.reference(0, 0), 2.0);
}

TEST(AlignDayOfWeek, IdentityAndUnpaired) {
  const auto f = single({1, 2, 3, 4, 5}, make_date(2020, 6, 1));
  const auto same = align_day_of_week(f, f);
  EXPECT_EQ(same.current_dates, same.reference_dates);

  // Reference covers only Monday-Wednesday of the matching week.
  const auto cur = single(std::vector<double>(7, 1.0), make_date(2020, 2, 3));
  const auto ref = single({1, 2, 3}, make_date(2019, 2, 4));
  const auto a = align_day_of_week(cur, ref);
  EXPECT_EQ(a.current_dates.size(), 3u);
  EXPECT_EQ(a.unpaired.size(), 4u);
  EXPECT_EQ(a.unpaired.front(), make_date(2020, 2, 6));

  const auto far = single({1, 2}, make_date(2019, 8, 1));
  try {
    align_day_of_week(cur, far);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoAlignment);
  }
}

TEST(AlignDayOfWeek, WeekdayPreservedOnRandomWindows) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> off(0, 700), len(5, 60);
  for (int trial = 0; trial < 100; ++trial) {
    const Date start = make_date(2019, 1, 1) + std::chrono::days{off(rng)};
    const auto cur = single(std::vector<double>(static_cast<std::size_t>(len(rng)), 0.0), start);
    const auto ref = single(std::vector<double>(400, 0.0), start - std::chrono::days{380});
    try {
      const auto a = align_day_of_week(cur, ref);
      for (std::size_t i = 0; i < a.current_dates.size(); ++i) {
        EXPECT_EQ(weekday_index(a.current_dates[i]), weekday_index(a.reference_dates[i]));
        EXPECT_EQ(iso_week(a.current_dates[i]).week, iso_week(a.reference_dates[i]).week);
      }
      EXPECT_EQ(a.current_dates.size() + a.unpaired.size(), cur.rows());
    } catch (const Error&) {
    }
  }
}

namespace {

// Direct O(n^2) reading of the transition definition on a given trend.
std::pair<std::size_t, std::size_t> brute_force_transition(const Eigen::VectorXd& trend, double tol) {
  const double band = tol * (trend.maxCoeff() - trend.minCoeff());
  const auto n = static_cast<std::size_t>(trend.size());
  std::size_t begin = 0;
  for (std::size_t t = 1; t < n; ++t) {
    double s = 0;
    for (std::size_t k = 0; k < t; ++k) s += trend(static_cast<Eigen::Index>(k));
    if (std::abs(trend(static_cast<Eigen::Index>(t)) - s / static_cast<double>(t)) <= band) begin = t;
  }
  for (std::size_t t = begin; t + 1 < n; ++t) {
    double s = 0;
    for (std::size_t k = t + 1; k < n; ++k) s += trend(static_cast<Eigen::Index>(k));
    if (std::abs(trend(static_cast<Eigen::Index>(t)) - s / static_cast<double>(n - t - 1)) <= band) {
      return {begin, t};
    }
  }
  return {begin, n - 1};
}

}  // namespace

TEST(TrendTransition, ConstantSeriesIsDegenerate) {
  const auto f = single(std::vector<double>(30, 3.0));
  const auto r = trend_transition(f, "x", 7);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.transition.begin, f.dates().front());
  EXPECT_EQ(r.transition.end, f.dates().front());
}

TEST(TrendTransition, StepWithWeeklySeasonality) {
  std::vector<double> v(80);
  for (std::size_t t = 0; t < v.size(); ++t) {
    double level = 100.0;
    if (t >= 40) level = 50.0;
    else if (t > 30) level = 100.0 - 5.0 * static_cast<double>(t - 30);
    v[t] = level + 5.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 7.0);
  }
  const auto r = trend_transition(single(v), "x", 7);
  EXPECT_FALSE(r.degenerate);
  EXPECT_GE(r.begin_index, 28u);
  EXPECT_LE(r.begin_index, 32u);
  EXPECT_GE(r.end_index, 38u);
  EXPECT_LE(r.end_index, 42u);
  // The weekly component is removed from the steady stages.
  EXPECT_NEAR(r.trend(10), 100.0, 1e-9);
  EXPECT_NEAR(r.trend(60), 50.0, 1e-9);
}

TEST(TrendTransition, RampMatchesBruteForceDefinition) {
  std::vector<double> v(100);
  for (std::size_t t = 0; t < v.size(); ++t) v[t] = static_cast<double>(t);
  const auto r = trend_transition(single(v), "x", 7);
  const auto [b, e] = brute_force_transition(r.trend, 0.02);
  EXPECT_EQ(r.begin_index, b);
  EXPECT_EQ(r.end_index, e);
  EXPECT_LE(r.begin_index, r.end_index);
}

TEST(TrendTransition, BeginNotAfterEndOnRandomSeries) {
  std::mt19937 rng(17);
  std::normal_distribution<double> noise;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(60);
    double level = 0;
    for (auto& x : v) x = (level += noise(rng));
    const auto r = trend_transition(single(v), "x", 7);
    const auto [b, e] = brute_force_transition(r.trend, 0.02);
    EXPECT_EQ(r.begin_index, b);
    EXPECT_EQ(r.end_index, e);
    EXPECT_LE(r.transition.begin, r.transition.end);
  }
}

TEST(TrendTransition, ValleyModeAndErrors) {
  // Early dip to a valley, rebound, then the real decline.
  std::vector<double> v;
  for (int t = 0; t < 10; ++t) v.push_back(100 - 2.0 * t);  // down to 82
  for (int t = 0; t < 10; ++t) v.push_back(82 + 1.5 * t);   // rebound
  for (int t = 0; t < 20; ++t) v.push_back(97 - 2.5 * t);   // decline below the valley
  for (int t = 0; t < 10; ++t) v.push_back(47);
  const auto f = single(v);
  const auto r = trend_transition(f, "x", 3, TransitionMode::kBelowPreviousValley);
  // First trough of the smoothed trend sits around day 10; the decline passes it later.
  EXPECT_GT(r.begin_index, 20u);
  EXPECT_LT(r.begin_index, 30u);
  EXPECT_LE(r.begin_index, r.end_index);

  EXPECT_THROW(trend_transition(single({1, 2, 3}), "x", 7), Error);
}
