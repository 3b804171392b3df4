#pragma once

#include <vector>

#include "mngu/rng.hpp"
#include "mngu/types.hpp"

namespace mngu {

// Activations recorded by a forward pass, one column per sample.
// post[l] is the post-activation output of weight layer l; post.back() is the
// network output.
struct ForwardTrace {
  MatrixX input;
  std::vector<MatrixX> post;
  bool fresh = false;
};

// Fully-connected network with ReLU hidden layers and a linear output layer.
// Value-semantic: copying gives an independent network with its own gradient
// buffers and activation cache.
class MultiLayerPerceptron {
 public:
  MultiLayerPerceptron() = default;

  // Weights uniform in +/- 1/sqrt(fan_in), biases zero. Draws from `rng` in
  // layer order, row-major within each weight matrix.
  MultiLayerPerceptron(std::vector<Index> layer_sizes, Rng& rng);

  static MultiLayerPerceptron zeros(std::vector<Index> layer_sizes);

  const std::vector<Index>& layer_sizes() const { return sizes_; }
  Index input_size() const { return sizes_.front(); }
  Index output_size() const { return sizes_.back(); }
  Index layer_count() const { return static_cast<Index>(weights_.size()); }

  MatrixX& weights(Index layer) { return weights_[layer]; }
  const MatrixX& weights(Index layer) const { return weights_[layer]; }
  VectorX& biases(Index layer) { return biases_[layer]; }
  const VectorX& biases(Index layer) const { return biases_[layer]; }
  MatrixX& weight_grads(Index layer) { return weight_grads_[layer]; }
  const MatrixX& weight_grads(Index layer) const { return weight_grads_[layer]; }
  VectorX& bias_grads(Index layer) { return bias_grads_[layer]; }
  const VectorX& bias_grads(Index layer) const { return bias_grads_[layer]; }
  std::vector<MatrixX>& weight_grad_set() { return weight_grads_; }
  std::vector<VectorX>& bias_grad_set() { return bias_grads_; }

  // Forward pass without recording activations.
  MatrixX value(const MatrixX& input) const;
  VectorX value(const VectorX& input) const;

  // Forward pass recording activations into the internal cache (one-arg form)
  // or into an explicit trace. Throws ConfigError on a row-count mismatch.
  MatrixX forward(const MatrixX& input);
  VectorX forward(const VectorX& input);
  MatrixX forward(const MatrixX& input, ForwardTrace& trace) const;

  // Backprop from dL/doutput using the internal cache. Overwrites the internal
  // gradient buffers and returns dL/dinput. Throws UsageError when no forward
  // pass has been recorded.
  MatrixX backward(const MatrixX& output_grad);
  VectorX backward(const VectorX& output_grad);

  // Backprop through an explicit trace, accumulating into `wg`/`bg` (which the
  // caller zeroes). Returns dL/dinput.
  MatrixX backward(const ForwardTrace& trace, const MatrixX& output_grad,
                   std::vector<MatrixX>& wg, std::vector<VectorX>& bg) const;

  void zero_grads();
  Scalar grad_squared_norm() const;
  void scale_grads(Scalar factor);

 private:
  std::vector<Index> sizes_;
  std::vector<MatrixX> weights_;
  std::vector<VectorX> biases_;
  std::vector<MatrixX> weight_grads_;
  std::vector<VectorX> bias_grads_;
  ForwardTrace trace_;
};

// Scales every gradient in the listed networks by max_norm/global_norm when
// their joint L2 norm exceeds max_norm. Returns the pre-clip global norm.
Scalar clip_gradients(std::initializer_list<MultiLayerPerceptron*> nets,
                      Scalar max_norm);

inline Scalar clip_gradients(MultiLayerPerceptron& net, Scalar max_norm) {
  return clip_gradients({&net}, max_norm);
}

}  // namespace mngu
