#include "mngu/nn/mlp.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "mngu/errors.hpp"

namespace mngu {

namespace {

void check_layer_sizes(const std::vector<Index>& sizes) {
  if (sizes.size() < 2)
    throw ConfigError("layer_sizes needs an input and an output size");
  for (Index s : sizes)
    if (s <= 0) throw ConfigError("layer_sizes entries must be positive");
}

}  // namespace

MultiLayerPerceptron::MultiLayerPerceptron(std::vector<Index> layer_sizes,
                                           Rng& rng)
    : sizes_(std::move(layer_sizes)) {
  check_layer_sizes(sizes_);
  const auto layers = sizes_.size() - 1;
  weights_.reserve(layers);
  biases_.reserve(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    const Index fan_in = sizes_[l];
    const Index fan_out = sizes_[l + 1];
    const Scalar bound = Scalar(1) / std::sqrt(static_cast<Scalar>(fan_in));
    MatrixX w(fan_out, fan_in);
    for (Index r = 0; r < fan_out; ++r)
      for (Index c = 0; c < fan_in; ++c) w(r, c) = rng.uniform(-bound, bound);
    weights_.push_back(std::move(w));
    biases_.push_back(VectorX::Zero(fan_out));
    weight_grads_.push_back(MatrixX::Zero(fan_out, fan_in));
    bias_grads_.push_back(VectorX::Zero(fan_out));
  }
}

MultiLayerPerceptron MultiLayerPerceptron::zeros(std::vector<Index> layer_sizes) {
  check_layer_sizes(layer_sizes);
  MultiLayerPerceptron net;
  net.sizes_ = std::move(layer_sizes);
  for (std::size_t l = 0; l + 1 < net.sizes_.size(); ++l) {
    net.weights_.push_back(MatrixX::Zero(net.sizes_[l + 1], net.sizes_[l]));
    net.biases_.push_back(VectorX::Zero(net.sizes_[l + 1]));
    net.weight_grads_.push_back(MatrixX::Zero(net.sizes_[l + 1], net.sizes_[l]));
    net.bias_grads_.push_back(VectorX::Zero(net.sizes_[l + 1]));
  }
  return net;
}

MatrixX MultiLayerPerceptron::value(const MatrixX& input) const {
  if (input.rows() != input_size())
    throw ConfigError("forward input has " + std::to_string(input.rows()) +
                      " rows, network expects " + std::to_string(input_size()));
  MatrixX a = input;
  for (Index l = 0; l < layer_count(); ++l) {
    MatrixX z = (weights_[l] * a).colwise() + biases_[l];
    if (l + 1 < layer_count())
      a = z.cwiseMax(Scalar(0));
    else
      a = std::move(z);
  }
  return a;
}

VectorX MultiLayerPerceptron::value(const VectorX& input) const {
  return value(MatrixX(input)).col(0);
}

MatrixX MultiLayerPerceptron::forward(const MatrixX& input,
                                      ForwardTrace& trace) const {
  if (input.rows() != input_size())
    throw ConfigError("forward input has " + std::to_string(input.rows()) +
                      " rows, network expects " + std::to_string(input_size()));
  trace.input = input;
  trace.post.assign(static_cast<std::size_t>(layer_count()), MatrixX());
  const MatrixX* a = &trace.input;
  for (Index l = 0; l < layer_count(); ++l) {
    MatrixX z = (weights_[l] * (*a)).colwise() + biases_[l];
    if (l + 1 < layer_count())
      trace.post[l] = z.cwiseMax(Scalar(0));
    else
      trace.post[l] = std::move(z);
    a = &trace.post[l];
  }
  trace.fresh = true;
  return trace.post.back();
}

MatrixX MultiLayerPerceptron::forward(const MatrixX& input) {
  return forward(input, trace_);
}

VectorX MultiLayerPerceptron::forward(const VectorX& input) {
  return forward(MatrixX(input), trace_).col(0);
}

MatrixX MultiLayerPerceptron::backward(const ForwardTrace& trace,
                                       const MatrixX& output_grad,
                                       std::vector<MatrixX>& wg,
                                       std::vector<VectorX>& bg) const {
  if (!trace.fresh)
    throw UsageError("backward() without a recorded forward pass");
  MatrixX g = output_grad;
  for (Index l = layer_count() - 1; l >= 0; --l) {
    const MatrixX& below = l == 0 ? trace.input : trace.post[l - 1];
    wg[l].noalias() += g * below.transpose();
    bg[l] += g.rowwise().sum();
    if (l > 0) {
      MatrixX gprev = weights_[l].transpose() * g;
      g = gprev.cwiseProduct(
          (trace.post[l - 1].array() > Scalar(0)).cast<Scalar>().matrix());
    } else {
      g = weights_[l].transpose() * g;
    }
  }
  return g;
}

MatrixX MultiLayerPerceptron::backward(const MatrixX& output_grad) {
  zero_grads();
  return backward(trace_, output_grad, weight_grads_, bias_grads_);
}

VectorX MultiLayerPerceptron::backward(const VectorX& output_grad) {
  return backward(MatrixX(output_grad)).col(0);
}

void MultiLayerPerceptron::zero_grads() {
  for (auto& g : weight_grads_) g.setZero();
  for (auto& g : bias_grads_) g.setZero();
}

Scalar MultiLayerPerceptron::grad_squared_norm() const {
  Scalar total = 0;
  for (const auto& g : weight_grads_) total += g.squaredNorm();
  for (const auto& g : bias_grads_) total += g.squaredNorm();
  return total;
}

void MultiLayerPerceptron::scale_grads(Scalar factor) {
  for (auto& g : weight_grads_) g *= factor;
  for (auto& g : bias_grads_) g *= factor;
}

Scalar clip_gradients(std::initializer_list<MultiLayerPerceptron*> nets,
                      Scalar max_norm) {
  Scalar total = 0;
  for (const auto* net : nets) total += net->grad_squared_norm();
  const Scalar norm = std::sqrt(total);
  if (norm > max_norm) {
    const Scalar factor = max_norm / norm;
    for (auto* net : nets) net->scale_grads(factor);
  }
  return norm;
}

}  // namespace mngu
