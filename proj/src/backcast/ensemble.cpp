#include "loadshift/backcast/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <mutex>
#include <thread>

#include "loadshift/util/error.hpp"
#include "loadshift/util/format.hpp"

namespace loadshift::backcast {

int ensemble_size(int candidates, double keep_fraction) {
  return std::max(1, static_cast<int>(std::floor(candidates * keep_fraction)));
}

namespace {

struct Candidate {
  BaseModel model;
  double metric = 0.0;
};

Candidate train_candidate(const FeatureTable& data, const Eigen::VectorXd& y, const std::vector<unsigned>& months,
                          const EnsembleConfig& cfg, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<int> width(cfg.width_min, cfg.width_max);
  const std::array<int, 3> widths{width(rng), width(rng), width(rng)};

  const auto n = static_cast<int>(y.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const int n_train = std::clamp(static_cast<int>(std::floor(cfg.split * n)), 2, n);
  std::vector<int> train(order.begin(), order.begin() + n_train);
  std::vector<int> hold(order.begin() + n_train, order.end());
  std::sort(train.begin(), train.end());
  std::sort(hold.begin(), hold.end());

  Candidate c{BaseModel(static_cast<int>(data.X.cols()), widths, rng), 0.0};
  c.model.fit(data.X(train, Eigen::placeholders::all), y(train), cfg.train);

  if (!hold.empty()) {
    const Eigen::VectorXd pred = c.model.predict(data.X(hold, Eigen::placeholders::all));
    std::array<double, 12> sum{};
    std::array<int, 12> count{};
    for (std::size_t k = 0; k < hold.size(); ++k) {
      const unsigned m = months[static_cast<std::size_t>(hold[k])] - 1;
      sum[m] += std::abs(pred(static_cast<Eigen::Index>(k)) - y(hold[k]));
      ++count[m];
    }
    double sq = 0.0;
    for (int m = 0; m < 12; ++m)
      if (count[m]) sq += std::pow(sum[m] / count[m], 2);
    c.metric = std::sqrt(sq);
  }
  return c;
}

}  // namespace

BackcastEnsemble train_ensemble(const FeatureTable& data, const Eigen::VectorXd& targets, const EnsembleConfig& cfg,
                                const FeatureConfig& features) {
  if (cfg.candidates < 1) throw Error(ErrorCode::kParameter, "candidates must be >= 1");
  if (!(cfg.keep_fraction > 0.0 && cfg.keep_fraction <= 1.0)) throw Error(ErrorCode::kParameter, "keep fraction must be in (0, 1]");
  if (!(cfg.split > 0.0 && cfg.split <= 1.0)) throw Error(ErrorCode::kParameter, "split must be in (0, 1]");
  if (cfg.width_min < 1 || cfg.width_max < cfg.width_min) throw Error(ErrorCode::kParameter, "bad width range");
  if (data.X.rows() != targets.size() || data.dates.size() != static_cast<std::size_t>(targets.size())) {
    throw Error(ErrorCode::kSize, "features and targets differ in length");
  }
  if (static_cast<std::size_t>(data.X.cols()) != features.dimension()) {
    throw Error(ErrorCode::kFeature, "feature table does not match the feature configuration");
  }
  std::vector<unsigned> months;
  std::set<unsigned> distinct;
  for (const Date d : data.dates) {
    months.push_back(month_of(d));
    distinct.insert(month_of(d));
  }
  if (targets.size() < 365 || distinct.size() < 12) {
    throw Error(ErrorCode::kCoverage, "training needs at least 365 days covering all 12 months");
  }
  for (Eigen::Index i = 0; i < targets.size(); ++i) {
    if (!(targets(i) > 0.0)) throw Error(ErrorCode::kDomain, "training targets must be positive");
  }

  std::vector<Candidate> out(static_cast<std::size_t>(cfg.candidates));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < cfg.candidates; i = next++) {
      try {
        out[static_cast<std::size_t>(i)] = train_candidate(data, targets, months, cfg, i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int jobs = std::clamp(cfg.jobs, 1, cfg.candidates);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  BackcastEnsemble e;
  e.features = features;
  e.seed = cfg.seed;
  e.candidates = cfg.candidates;
  std::vector<int> rank(static_cast<std::size_t>(cfg.candidates));
  std::iota(rank.begin(), rank.end(), 0);
  for (const auto& c : out) e.metrics.push_back(c.metric);
  std::stable_sort(rank.begin(), rank.end(), [&](int a, int b) {
    return e.metrics[static_cast<std::size_t>(a)] < e.metrics[static_cast<std::size_t>(b)];
  });
  const int keep = ensemble_size(cfg.candidates, cfg.keep_fraction);
  for (int k = 0; k < keep; ++k) {
    e.selected.push_back(rank[static_cast<std::size_t>(k)]);
    e.models.push_back(std::move(out[static_cast<std::size_t>(rank[static_cast<std::size_t>(k)])].model));
  }
  return e;
}

namespace {

Prediction summarize(std::vector<double> members) {
  Prediction p;
  p.point = std::accumulate(members.begin(), members.end(), 0.0) / static_cast<double>(members.size());
  for (std::size_t k = 0; k < kPredictionQuantiles.size(); ++k) {
    p.quantiles[k] = empirical_quantile(members, kPredictionQuantiles[k]);
  }
  return p;
}

}  // namespace

std::vector<Prediction> predict(const BackcastEnsemble& e, const Eigen::MatrixXd& features) {
  if (e.models.empty()) throw Error(ErrorCode::kParameter, "empty ensemble");
  if (static_cast<std::size_t>(features.cols()) != e.features.dimension()) {
    throw Error(ErrorCode::kFeature, "feature dimension " + std::to_string(features.cols()) + " does not match " +
                                         std::to_string(e.features.dimension()));
  }
  Eigen::MatrixXd all(features.rows(), static_cast<Eigen::Index>(e.models.size()));
  for (std::size_t m = 0; m < e.models.size(); ++m) all.col(static_cast<Eigen::Index>(m)) = e.models[m].predict(features);
  std::vector<Prediction> out;
  for (Eigen::Index r = 0; r < all.rows(); ++r) {
    std::vector<double> members(static_cast<std::size_t>(all.cols()));
    for (Eigen::Index m = 0; m < all.cols(); ++m) members[static_cast<std::size_t>(m)] = all(r, m);
    out.push_back(summarize(std::move(members)));
  }
  return out;
}

Prediction predict(const BackcastEnsemble& e, const Eigen::VectorXd& feature) {
  return predict(e, Eigen::MatrixXd(feature.transpose())).front();
}

namespace {

void put_vector(std::ostringstream& os, std::string_view key, const Eigen::Ref<const Eigen::VectorXd>& v) {
  os << key;
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ' ' << format_double(v(i));
  os << '\n';
}

class Reader {
 public:
  explicit Reader(std::string_view text) : lines_(split(text, '\n')) {}
  std::vector<std::string> line(std::string_view key) {
    while (pos_ < lines_.size() && trim(lines_[pos_]).empty()) ++pos_;
    if (pos_ == lines_.size()) throw Error(ErrorCode::kSchema, "ensemble file ended early");
    auto f = split(trim(lines_[pos_++]), ' ');
    if (f.empty() || f[0] != key) throw Error(ErrorCode::kSchema, "ensemble file: expected '" + std::string(key) + "'");
    f.erase(f.begin());
    return f;
  }
  Eigen::VectorXd vector(std::string_view key, Eigen::Index size) {
    const auto f = line(key);
    if (static_cast<Eigen::Index>(f.size()) != size) throw Error(ErrorCode::kSchema, "ensemble file: bad length");
    Eigen::VectorXd v(size);
    for (Eigen::Index i = 0; i < size; ++i) v(i) = parse_double(f[static_cast<std::size_t>(i)]);
    return v;
  }

 private:
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string write_ensemble(const BackcastEnsemble& e) {
  std::ostringstream os;
  os << "backcast-ensemble 1\n";
  os << "seed " << e.seed << "\ncandidates " << e.candidates << '\n';
  os << "quantiles";
  for (double q : e.features.quantile_levels) os << ' ' << format_double(q);
  os << "\nweather";
  for (const auto& f : e.features.weather_fields) os << ' ' << f;
  os << '\n';
  put_vector(os, "metrics", Eigen::Map<const Eigen::VectorXd>(e.metrics.data(), static_cast<Eigen::Index>(e.metrics.size())));
  os << "members " << e.models.size() << '\n';
  for (std::size_t m = 0; m < e.models.size(); ++m) {
    const auto& model = e.models[m];
    const auto w = model.widths();
    os << "model " << e.selected[m] << "\nwidths " << model.input_dim() << ' ' << w[0] << ' ' << w[1] << ' ' << w[2]
       << '\n';
    put_vector(os, "in_mean", model.input_mean());
    put_vector(os, "in_scale", model.input_scale());
    os << "out " << format_double(model.output_mean()) << ' ' << format_double(model.output_scale()) << '\n';
    for (const auto& layer : model.layers()) {
      for (Eigen::Index r = 0; r < layer.W.rows(); ++r) put_vector(os, "w", layer.W.row(r).transpose());
      put_vector(os, "b", layer.b);
    }
  }
  return os.str();
}

BackcastEnsemble read_ensemble(std::string_view text) {
  Reader in(text);
  if (in.line("backcast-ensemble") != std::vector<std::string>{"1"}) {
    throw Error(ErrorCode::kSchema, "unsupported ensemble file version");
  }
  BackcastEnsemble e;
  e.seed = std::stoull(in.line("seed").at(0));
  e.candidates = parse_int(in.line("candidates").at(0));
  e.features.quantile_levels.clear();
  for (const auto& q : in.line("quantiles")) e.features.quantile_levels.push_back(parse_double(q));
  e.features.weather_fields = in.line("weather");
  e.features.validate();
  for (const auto& m : in.line("metrics")) e.metrics.push_back(parse_double(m));
  const int members = parse_int(in.line("members").at(0));
  if (members < 1) throw Error(ErrorCode::kSchema, "ensemble has no members");
  for (int m = 0; m < members; ++m) {
    e.selected.push_back(parse_int(in.line("model").at(0)));
    const auto w = in.line("widths");
    if (w.size() != 4) throw Error(ErrorCode::kSchema, "ensemble file: bad widths");
    const int dim = parse_int(w[0]);
    std::mt19937_64 unused;
    BaseModel model(dim, {parse_int(w[1]), parse_int(w[2]), parse_int(w[3])}, unused);
    model.input_mean() = in.vector("in_mean", dim);
    model.input_scale() = in.vector("in_scale", dim);
    const auto out = in.line("out");
    if (out.size() != 2) throw Error(ErrorCode::kSchema, "ensemble file: bad output scaling");
    model.output_mean() = parse_double(out[0]);
    model.output_scale() = parse_double(out[1]);
    for (auto& layer : model.layers()) {
      for (Eigen::Index r = 0; r < layer.W.rows(); ++r) layer.W.row(r) = in.vector("w", layer.W.cols()).transpose();
      layer.b = in.vector("b", layer.b.size());
    }
    if (static_cast<std::size_t>(dim) != e.features.dimension()) {
      throw Error(ErrorCode::kSchema, "model input size does not match the feature configuration");
    }
    e.models.push_back(std::move(model));
  }
  return e;
}

}  // namespace loadshift::backcast
