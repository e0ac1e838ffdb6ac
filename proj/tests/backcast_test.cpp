#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "loadshift/backcast/ensemble.hpp"
#include "loadshift/backcast/features.hpp"
#include "loadshift/backcast/mlp.hpp"
#include "loadshift/backcast/reduction.hpp"
#include "loadshift/core/frame.hpp"
#include "loadshift/util/error.hpp"
#include "support/synthetic.hpp"

using namespace loadshift;
using namespace loadshift::backcast;

namespace {

template <class F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

WeatherDay constant_day(double v) {
  WeatherDay d;
  d.fill(v);
  return d;
}

struct Dataset {
  FeatureTable table;
  Eigen::VectorXd y;
};

// Linear target on synthetic weather: 50 + 2 * mean temperature + 10 * weekend.
Dataset linear_dataset(Date begin, Date end) {
  const auto f = synthetic::make_load_fixture(begin, end, 21);
  Dataset d;
  d.table = build_feature_table(f.load.dates, f.weather, GdpSeries::constant(1.5));
  d.y.resize(static_cast<Eigen::Index>(f.load.dates.size()));
  const auto& t = f.weather.at("temperature");
  for (std::size_t i = 0; i < f.load.dates.size(); ++i) {
    const bool weekend = weekday_index(f.load.dates[i]) >= 5;
    d.y(static_cast<Eigen::Index>(i)) = 50 + 2 * t.values.row(static_cast<Eigen::Index>(i)).mean() + (weekend ? 10 : 0);
  }
  return d;
}

EnsembleConfig quick_config(int candidates, int epochs = 5) {
  EnsembleConfig c;
  c.candidates = candidates;
  c.width_min = 2;
  c.width_max = 4;
  c.train.epochs = epochs;
  return c;
}

}  // namespace

TEST(Quantile, Type7) {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  EXPECT_NEAR(empirical_quantile(v, 0.10), 10.9, 1e-12);
  EXPECT_EQ(empirical_quantile(v, 1.0), 100);
  EXPECT_EQ(empirical_quantile(v, 0.0), 1);
  EXPECT_EQ(empirical_quantile({5.0}, 0.9), 5.0);
}

TEST(Features, Examples) {
  const FeatureConfig cfg;
  const auto cal = make_calendar_info(make_date(2020, 7, 5), true);  // a Sunday
  WeatherDay ramp;
  for (int h = 0; h < 24; ++h) ramp[h] = h + 1;
  const auto f = build_features(cal, {constant_day(20), ramp, constant_day(3)}, 2.5, cfg);
  ASSERT_EQ(static_cast<std::size_t>(f.size()), cfg.dimension());
  EXPECT_EQ(f(6), 1.0);        // July
  EXPECT_EQ(f(12 + 6), 1.0);   // Sunday
  EXPECT_EQ(f.segment(12, 7).sum(), 1.0);
  EXPECT_EQ(f(19), 1.0);       // holiday
  EXPECT_NEAR(f(20), 5.0 / 31, 1e-15);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(f(21 + k), 20.0);
  EXPECT_EQ(f(21 + 4 + 3), 24.0);  // humidity q = 1.00
  EXPECT_EQ(f(21 + 4 + 1), 12.5);  // median of 1..24
  EXPECT_EQ(f(f.size() - 1), 2.5);

  auto sparse = constant_day(kMissing);
  for (int h = 0; h < 11; ++h) sparse[h] = 1;
  expect_code(ErrorCode::kInsufficientWeather,
              [&] { build_features(cal, {sparse, ramp, ramp}, 0, cfg); });
  FeatureConfig bad;
  bad.quantile_levels = {0.5, 0.25};
  expect_code(ErrorCode::kParameter, [&] { bad.validate(); });
}

TEST(Gdp, StepFunction) {
  GdpSeries g({{make_date(2020, 1, 1), 1.0}, {make_date(2020, 4, 1), -5.0}});
  EXPECT_EQ(g.at(make_date(2019, 6, 1)), 1.0);
  EXPECT_EQ(g.at(make_date(2020, 3, 31)), 1.0);
  EXPECT_EQ(g.at(make_date(2020, 4, 1)), -5.0);
  EXPECT_EQ(g.at(make_date(2021, 4, 1)), -5.0);
}

TEST(Mlp, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 5; ++trial) {
    BaseModel m(6, {5, 4, 3}, rng);
    // Off-zero biases: with zero biases a sample whose previous layer is all
    // inactive sits exactly on a ReLU kink.
    for (auto& l : m.layers())
      for (auto& b : l.b) b = 0.1 * z(rng);
    Eigen::MatrixXd X(6, 30);
    Eigen::RowVectorXd y(30);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = z(rng);
    for (auto& v : y) v = z(rng);
    BaseModel::Layers g;
    m.loss_and_gradient(X, y, &g);
    const double h = 1e-6;
    for (int l = 0; l < BaseModel::kLayers; ++l) {
      auto& W = m.layers()[l].W;
      for (Eigen::Index k = 0; k < W.size(); ++k) {
        const double keep = W.data()[k];
        W.data()[k] = keep + h;
        const double up = m.loss_and_gradient(X, y, nullptr);
        W.data()[k] = keep - h;
        const double down = m.loss_and_gradient(X, y, nullptr);
        W.data()[k] = keep;
        const double fd = (up - down) / (2 * h);
        const double an = g[l].W.data()[k];
        EXPECT_LE(std::abs(fd - an), 1e-4 * std::max(1.0, std::abs(an))) << "layer " << l;
      }
      auto& b = m.layers()[l].b;
      for (Eigen::Index k = 0; k < b.size(); ++k) {
        const double keep = b(k);
        b(k) = keep + h;
        const double up = m.loss_and_gradient(X, y, nullptr);
        b(k) = keep - h;
        const double down = m.loss_and_gradient(X, y, nullptr);
        b(k) = keep;
        EXPECT_LE(std::abs((up - down) / (2 * h) - g[l].b(k)), 1e-4 * std::max(1.0, std::abs(g[l].b(k))));
      }
    }
  }
}

TEST(Mlp, TrainingReducesLoss) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> z;
  Eigen::MatrixXd X(200, 3);
  Eigen::VectorXd y(200);
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 3; ++j) X(i, j) = z(rng);
    y(i) = 10 + X(i, 0) * X(i, 0) - 2 * X(i, 1);
  }
  BaseModel m(3, {16, 16, 8}, rng);
  m.fit(X, y, {});
  const double mse = (m.predict(X) - y).squaredNorm() / 200;
  EXPECT_LT(mse, 0.05 * (y.array() - y.mean()).square().mean());
}

TEST(Ensemble, SizeArithmetic) {
  EXPECT_EQ(ensemble_size(800, 0.25), 200);
  EXPECT_EQ(ensemble_size(4, 0.25), 1);
  EXPECT_EQ(ensemble_size(3, 0.25), 1);
  const auto d = linear_dataset(make_date(2018, 1, 1), make_date(2018, 12, 31));
  const auto e = train_ensemble(d.table, d.y, quick_config(4, 2));
  EXPECT_EQ(e.models.size(), 1u);
  EXPECT_EQ(e.metrics.size(), 4u);
  EXPECT_EQ(e.metrics[e.selected[0]], *std::min_element(e.metrics.begin(), e.metrics.end()));
}

TEST(Ensemble, Preconditions) {
  auto d = linear_dataset(make_date(2018, 1, 1), make_date(2018, 12, 31));
  FeatureTable short_table{std::vector<Date>(d.table.dates.begin(), d.table.dates.begin() + 300),
                           d.table.X.topRows(300)};
  expect_code(ErrorCode::kCoverage, [&] { train_ensemble(short_table, d.y.head(300), quick_config(2)); });
  d.y(10) = 0;
  expect_code(ErrorCode::kDomain, [&] { train_ensemble(d.table, d.y, quick_config(2)); });
}

TEST(Ensemble, LinearTargetMape) {
  const auto d = linear_dataset(make_date(2017, 1, 1), make_date(2019, 3, 31));
  const Eigen::Index n_train = 730;
  FeatureTable train{std::vector<Date>(d.table.dates.begin(), d.table.dates.begin() + n_train), d.table.X.topRows(n_train)};
  EnsembleConfig cfg;
  cfg.candidates = 8;
  cfg.keep_fraction = 0.5;
  const auto e = train_ensemble(train, d.y.head(n_train), cfg);
  const Eigen::Index n_test = d.y.size() - n_train;
  const auto p = predict(e, Eigen::MatrixXd(d.table.X.bottomRows(n_test)));
  double mape = 0;
  for (Eigen::Index i = 0; i < n_test; ++i) mape += std::abs(p[i].point / d.y(n_train + i) - 1);
  EXPECT_LT(100 * mape / n_test, 2.0);
}

TEST(Ensemble, DeterministicAcrossJobsAndPermutationInvariant) {
  const auto d = linear_dataset(make_date(2018, 1, 1), make_date(2018, 12, 31));
  auto cfg = quick_config(6, 20);
  cfg.keep_fraction = 0.5;
  cfg.seed = 99;
  const auto a = train_ensemble(d.table, d.y, cfg);
  cfg.jobs = 3;
  const auto b = train_ensemble(d.table, d.y, cfg);
  EXPECT_EQ(write_ensemble(a), write_ensemble(b));

  auto shuffled = a;
  std::reverse(shuffled.models.begin(), shuffled.models.end());
  for (Eigen::Index r = 0; r < 20; ++r) {
    const auto p = predict(a, Eigen::VectorXd(d.table.X.row(r).transpose()));
    const auto q = predict(shuffled, Eigen::VectorXd(d.table.X.row(r).transpose()));
    EXPECT_NEAR(p.point, q.point, 1e-12 * std::abs(p.point));
    EXPECT_EQ(p.quantiles, q.quantiles);
  }
}

TEST(Ensemble, ScalingHomogeneity) {
  const auto d = linear_dataset(make_date(2018, 1, 1), make_date(2018, 12, 31));
  auto cfg = quick_config(3, 30);
  const auto a = train_ensemble(d.table, d.y, cfg);
  const auto b = train_ensemble(d.table, Eigen::VectorXd(3.5 * d.y), cfg);
  const auto pa = predict(a, d.table.X);
  const auto pb = predict(b, d.table.X);
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_NEAR(pb[i].point, 3.5 * pa[i].point, 1e-8 * pb[i].point);
}

TEST(Predict, MeanQuantilesAndMismatch) {
  std::mt19937_64 rng(3);
  BackcastEnsemble e;
  e.features.weather_fields = {"temperature"};
  const int dim = static_cast<int>(e.features.dimension());
  // Members with zeroed weights output their output_mean.
  for (double v : {90.0, 110.0}) {
    BaseModel m(dim, {2, 2, 2}, rng);
    for (auto& l : m.layers()) l.W.setZero();
    m.output_mean() = v;
    e.models.push_back(m);
    e.selected.push_back(static_cast<int>(e.selected.size()));
  }
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
  auto p = predict(e, x);
  EXPECT_EQ(p.point, 100.0);
  for (std::size_t k = 1; k < 4; ++k) EXPECT_LE(p.quantiles[k - 1], p.quantiles[k]);

  auto single = e;
  single.models.resize(1);
  p = predict(single, x);
  EXPECT_EQ(p.point, 90.0);
  for (double q : p.quantiles) EXPECT_EQ(q, 90.0);
  expect_code(ErrorCode::kFeature, [&] { predict(e, Eigen::VectorXd(Eigen::VectorXd::Zero(dim + 1))); });
}

TEST(Predict, QuantilesMonotoneOnTrainedEnsemble) {
  const auto d = linear_dataset(make_date(2018, 1, 1), make_date(2018, 12, 31));
  auto cfg = quick_config(12, 10);
  cfg.keep_fraction = 0.5;
  const auto e = train_ensemble(d.table, d.y, cfg);
  for (const auto& p : predict(e, d.table.X)) {
    EXPECT_LE(p.quantiles[0], p.quantiles[1]);
    EXPECT_LE(p.quantiles[1], p.quantiles[2]);
    EXPECT_LE(p.quantiles[2], p.quantiles[3]);
  }
}

TEST(EnsembleIo, BitExactRoundTrip) {
  const auto d = linear_dataset(make_date(2018, 1, 1), make_date(2018, 12, 31));
  auto cfg = quick_config(4, 10);
  cfg.keep_fraction = 0.5;
  const auto e = train_ensemble(d.table, d.y, cfg);
  const auto text = write_ensemble(e);
  const auto back = read_ensemble(text);
  EXPECT_EQ(write_ensemble(back), text);
  const auto p = predict(e, d.table.X), q = predict(back, d.table.X);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i].point, q[i].point);
  EXPECT_EQ(back.metrics, e.metrics);
}

TEST(Reduction, Examples) {
  std::vector<double> actual(24, 100.0);
  EXPECT_EQ(reduction_rate(100.0, actual), 0.0);
  std::fill(actual.begin(), actual.end(), 90.0);
  EXPECT_NEAR(reduction_rate(100.0, actual), 10.0, 1e-12);
  expect_code(ErrorCode::kDomain, [&] { reduction_rate(0.0, actual); });
  actual[3] = kMissing;
  expect_code(ErrorCode::kPrecondition, [&] { reduction_rate(100.0, actual); });
}

TEST(ReductionProperty, MirroredDayCancels) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(50, 150);
  for (int trial = 0; trial < 200; ++trial) {
    const double b = u(rng);
    std::vector<double> a(24), mirrored(24);
    double mean = 0;
    for (auto& v : a) mean += (v = u(rng)) / 24;
    for (int h = 0; h < 24; ++h) mirrored[h] = 2 * b - a[h];
    EXPECT_NEAR(reduction_rate(b, a) + reduction_rate(b, mirrored), 0.0, 1e-9);
  }
}

TEST(MonthlySummary, MeansAndCoverage) {
  ReductionSeries s;
  for (int d = 1; d <= 30; ++d) {
    s.dates.push_back(make_date(2020, 4, d));
    s.point.push_back(10.0);
    s.bounds.push_back({10.0, 10.0, 10.0, 10.0});
    s.backcast.push_back(100);
    s.actual.push_back(90);
  }
  const auto m = monthly_summary(s, 2020, 4);
  EXPECT_EQ(m.mean, 10.0);
  EXPECT_EQ(m.lower, 10.0);
  EXPECT_EQ(m.upper, 10.0);
  EXPECT_EQ(m.days, 30);

  ReductionSeries two;
  two.dates = {make_date(2020, 4, 1), make_date(2020, 4, 2)};
  two.point = {8, 12};
  two.bounds = {{6, 7, 9, 10}, {10, 11, 13, 14}};
  two.backcast = {1, 1};
  two.actual = {1, 1};
  expect_code(ErrorCode::kCoverage, [&] { monthly_summary(two, 2020, 4); });
  const auto t = monthly_summary(two, 2020, 4, 1);
  EXPECT_EQ(t.mean, 10.0);
  EXPECT_EQ(t.lower, 8.0);
  EXPECT_EQ(t.upper, 12.0);
  const auto csv = write_monthly_summary_csv({t});
  EXPECT_NE(csv.find("Average in April,2020,10.00,8.00,12.00,\"[8.00, 12.00]\",2"), std::string::npos);
  EXPECT_EQ(write_reduction_csv(read_reduction_csv(write_reduction_csv(two))), write_reduction_csv(two));
}
