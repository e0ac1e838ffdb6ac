#pragma once

#include <Eigen/Dense>

#include <array>
#include <random>

namespace loadshift::backcast {

struct DenseLayer {
  Eigen::MatrixXd W;  // out x in
  Eigen::VectorXd b;
};

struct TrainOptions {
  int epochs = 200;
  double learning_rate = 0.02;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Four dense layers, ReLU after the first three, scalar output. Inputs and
/// the target are z-scored with statistics of the rows the model was fit on.
class BaseModel {
 public:
  static constexpr int kLayers = 4;
  using Layers = std::array<DenseLayer, kLayers>;

  BaseModel() = default;
  // He-initialized weights, identity normalization.
  BaseModel(int input_dim, const std::array<int, 3>& widths, std::mt19937_64& rng);

  int input_dim() const { return static_cast<int>(layers_[0].W.cols()); }
  std::array<int, 3> widths() const;

  // Rows of X are samples in raw units.
  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;
  double predict_one(const Eigen::VectorXd& x) const;

  /// Sets normalization from (X, y), then runs full-batch Adam on the mean
  /// squared error of the normalized target.
  void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const TrainOptions& options);

  /// Mean squared error and its gradient for normalized inputs (columns are
  /// samples) and normalized targets.
  double loss_and_gradient(const Eigen::MatrixXd& Xn, const Eigen::RowVectorXd& yn, Layers* gradient) const;

  Layers& layers() { return layers_; }
  const Layers& layers() const { return layers_; }
  Eigen::VectorXd& input_mean() { return in_mean_; }
  Eigen::VectorXd& input_scale() { return in_scale_; }
  const Eigen::VectorXd& input_mean() const { return in_mean_; }
  const Eigen::VectorXd& input_scale() const { return in_scale_; }
  double& output_mean() { return out_mean_; }
  double& output_scale() { return out_scale_; }
  double output_mean() const { return out_mean_; }
  double output_scale() const { return out_scale_; }

  Eigen::MatrixXd normalize(const Eigen::MatrixXd& X) const;  // -> columns are samples

 private:
  Layers layers_;
  Eigen::VectorXd in_mean_;
  Eigen::VectorXd in_scale_;
  double out_mean_ = 0.0;
  double out_scale_ = 1.0;
};

}  // namespace loadshift::backcast
