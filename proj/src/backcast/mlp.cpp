#include "loadshift/backcast/mlp.hpp"

#include <cmath>

#include "loadshift/util/error.hpp"

namespace loadshift::backcast {

BaseModel::BaseModel(int input_dim, const std::array<int, 3>& widths, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  int in = input_dim;
  for (int l = 0; l < kLayers; ++l) {
    const int out = l < 3 ? widths[static_cast<std::size_t>(l)] : 1;
    if (out < 1 || in < 1) throw Error(ErrorCode::kParameter, "layer widths must be positive");
    const double s = std::sqrt(2.0 / in);
    auto& layer = layers_[static_cast<std::size_t>(l)];
    layer.W.resize(out, in);
    for (Eigen::Index i = 0; i < layer.W.size(); ++i) layer.W.data()[i] = s * z(rng);
    layer.b = Eigen::VectorXd::Zero(out);
    in = out;
  }
  in_mean_ = Eigen::VectorXd::Zero(input_dim);
  in_scale_ = Eigen::VectorXd::Ones(input_dim);
}

std::array<int, 3> BaseModel::widths() const {
  return {static_cast<int>(layers_[0].W.rows()), static_cast<int>(layers_[1].W.rows()),
          static_cast<int>(layers_[2].W.rows())};
}

Eigen::MatrixXd BaseModel::normalize(const Eigen::MatrixXd& X) const {
  if (X.cols() != input_dim()) throw Error(ErrorCode::kFeature, "feature dimension does not match the model");
  return ((X.transpose().colwise() - in_mean_).array().colwise() / in_scale_.array()).matrix();
}

Eigen::VectorXd BaseModel::predict(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd h = normalize(X);
  for (int l = 0; l < kLayers; ++l) {
    const auto& layer = layers_[static_cast<std::size_t>(l)];
    Eigen::MatrixXd z = layer.W * h;
    z.colwise() += layer.b;
    h = l < 3 ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
  }
  return (h.row(0).transpose().array() * out_scale_ + out_mean_).matrix();
}

double BaseModel::predict_one(const Eigen::VectorXd& x) const { return predict(x.transpose())(0); }

double BaseModel::loss_and_gradient(const Eigen::MatrixXd& Xn, const Eigen::RowVectorXd& yn, Layers* grad) const {
  const double m = static_cast<double>(Xn.cols());
  std::array<Eigen::MatrixXd, kLayers + 1> a;  // activations; a[0] = input
  a[0] = Xn;
  for (int l = 0; l < kLayers; ++l) {
    const auto& layer = layers_[static_cast<std::size_t>(l)];
    Eigen::MatrixXd z = layer.W * a[static_cast<std::size_t>(l)];
    z.colwise() += layer.b;
    a[static_cast<std::size_t>(l + 1)] = l < 3 ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
  }
  const Eigen::RowVectorXd diff = a[kLayers].row(0) - yn;
  const double loss = diff.squaredNorm() / m;
  if (!grad) return loss;

  Eigen::MatrixXd delta = (2.0 / m) * diff;  // dL/dz of the output layer
  for (int l = kLayers - 1; l >= 0; --l) {
    auto& g = (*grad)[static_cast<std::size_t>(l)];
    const auto& in = a[static_cast<std::size_t>(l)];
    g.W.noalias() = delta * in.transpose();
    g.b = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = layers_[static_cast<std::size_t>(l)].W.transpose() * delta;
      // ReLU derivative from the stored activation (a > 0 <=> z > 0).
      delta = (in.array() > 0.0).select(back, 0.0);
    }
  }
  return loss;
}

void BaseModel::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const TrainOptions& opt) {
  if (X.rows() != y.size() || X.rows() < 2) throw Error(ErrorCode::kInsufficientData, "too few training rows");
  if (X.cols() != input_dim()) throw Error(ErrorCode::kFeature, "feature dimension does not match the model");
  in_mean_ = X.colwise().mean().transpose();
  in_scale_ = ((X.rowwise() - in_mean_.transpose()).array().square().colwise().mean().sqrt()).transpose();
  for (Eigen::Index j = 0; j < in_scale_.size(); ++j)
    if (!(in_scale_(j) > 1e-12)) in_scale_(j) = 1.0;
  out_mean_ = y.mean();
  out_scale_ = std::sqrt((y.array() - out_mean_).square().mean());
  if (!(out_scale_ > 1e-12)) out_scale_ = 1.0;

  const Eigen::MatrixXd Xn = normalize(X);
  const Eigen::RowVectorXd yn = ((y.array() - out_mean_) / out_scale_).matrix().transpose();

  Layers grad, m1, m2;
  for (int l = 0; l < kLayers; ++l) {
    const auto& layer = layers_[static_cast<std::size_t>(l)];
    for (auto* s : {&m1, &m2}) {
      (*s)[static_cast<std::size_t>(l)].W = Eigen::MatrixXd::Zero(layer.W.rows(), layer.W.cols());
      (*s)[static_cast<std::size_t>(l)].b = Eigen::VectorXd::Zero(layer.b.size());
    }
  }
  double b1t = 1.0, b2t = 1.0;
  for (int epoch = 0; epoch < opt.epochs; ++epoch) {
    loss_and_gradient(Xn, yn, &grad);
    b1t *= opt.beta1;
    b2t *= opt.beta2;
    const double step = opt.learning_rate * std::sqrt(1.0 - b2t) / (1.0 - b1t);
    for (std::size_t l = 0; l < kLayers; ++l) {
      auto update = [&](auto& w, auto& g, auto& mm, auto& vv) {
        mm = opt.beta1 * mm + (1.0 - opt.beta1) * g;
        vv = opt.beta2 * vv + (1.0 - opt.beta2) * g.cwiseAbs2();
        w.array() -= step * mm.array() / (vv.array().sqrt() + opt.epsilon);
      };
      update(layers_[l].W, grad[l].W, m1[l].W, m2[l].W);
      update(layers_[l].b, grad[l].b, m1[l].b, m2[l].b);
    }
  }
  for (const auto& layer : layers_) {
    if (!layer.W.allFinite() || !layer.b.allFinite()) throw Error(ErrorCode::kDivergence, "training diverged");
  }
}

}  // namespace loadshift::backcast
