#pragma once

#include <vector>

#include "mngu/nn/mlp.hpp"
#include "mngu/types.hpp"

namespace mngu {

struct AdamConfig {
  Scalar learning_rate = 1e-3;
  Scalar beta1 = 0.9;
  Scalar beta2 = 0.999;
  Scalar epsilon = 1e-8;
};

// Bias-corrected Adam moments for one network. Accumulators start at zero and
// the step counter increases by one per step() call.
class AdamState {
 public:
  AdamState() = default;
  explicit AdamState(const MultiLayerPerceptron& net, AdamConfig config = {});

  // Applies the network's gradient buffers to its parameters. Throws
  // DivergenceError naming the layer when a gradient component is non-finite.
  void step(MultiLayerPerceptron& net);

  long step_count() const { return step_count_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::vector<MatrixX> m_weights_, v_weights_;
  std::vector<VectorX> m_biases_, v_biases_;
  long step_count_ = 0;
};

// One Adam update on `net` from its current gradient buffers.
inline void adam_step(MultiLayerPerceptron& net, AdamState& state) {
  state.step(net);
}

}  // namespace mngu
