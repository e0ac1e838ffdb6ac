#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "loadshift/backcast/features.hpp"
#include "loadshift/backcast/mlp.hpp"

namespace loadshift::backcast {

struct EnsembleConfig {
  int candidates = 800;
  double keep_fraction = 0.25;
  double split = 0.85;
  int width_min = 8;
  int width_max = 64;
  std::uint64_t seed = 0;
  TrainOptions train;
  int jobs = 1;
};

struct BackcastEnsemble {
  FeatureConfig features;
  std::vector<BaseModel> models;
  std::uint64_t seed = 0;
  int candidates = 0;
  std::vector<double> metrics;   // every candidate, by candidate index
  std::vector<int> selected;     // candidate index of each member
};

// floor(candidates * keep_fraction), at least 1.
int ensemble_size(int candidates, double keep_fraction);

/// Trains `candidates` base models, each on its own random `split` share of
/// the rows with hidden widths drawn from [width_min, width_max]. A model's
/// metric is the Euclidean norm over the 12 calendar months of its mean
/// absolute error on the held-out rows (0 for months without held-out rows).
/// The lowest-metric models are kept, ties by candidate index. Candidate i
/// draws from its own generator seeded by (seed, i), so the result does not
/// depend on `jobs`.
BackcastEnsemble train_ensemble(const FeatureTable& data, const Eigen::VectorXd& targets, const EnsembleConfig& config,
                                const FeatureConfig& features = {});

inline constexpr std::array<double, 4> kPredictionQuantiles{0.10, 0.25, 0.75, 0.90};

struct Prediction {
  double point = 0.0;  // member mean
  std::array<double, 4> quantiles{};  // at kPredictionQuantiles
};

Prediction predict(const BackcastEnsemble& ensemble, const Eigen::VectorXd& feature);
std::vector<Prediction> predict(const BackcastEnsemble& ensemble, const Eigen::MatrixXd& features);

// Versioned text file; weights are written shortest-round-trip, so reading
// it back reproduces every double bit for bit.
std::string write_ensemble(const BackcastEnsemble& ensemble);
BackcastEnsemble read_ensemble(std::string_view text);

}  // namespace loadshift::backcast
