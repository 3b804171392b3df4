#pragma once

#include <vector>

#include "mngu/nn/adam.hpp"
#include "mngu/nn/mlp.hpp"
#include "mngu/rng.hpp"
#include "mngu/types.hpp"

namespace mngu {

// Observation encoder trained with an inverse dynamics objective: a head
// predicts the action taken between two consecutive observations from their
// embeddings, and the classification error drives both networks.
class EmbeddingNetwork {
 public:
  EmbeddingNetwork(Index obs_size, Index embedding_dim, Index hidden_size,
                   int action_count, const AdamConfig& optim,
                   Scalar max_grad_norm, Rng& rng);

  VectorX embed(const VectorX& obs) const;
  MatrixX embed(const MatrixX& obs) const;

  // Returns the mean cross-entropy loss of the batch before the update.
  Scalar inverse_dynamics_update(const MatrixX& obs, const MatrixX& next_obs,
                                 const std::vector<int>& actions);

  Index embedding_dim() const { return encoder_.output_size(); }
  Index obs_size() const { return encoder_.input_size(); }
  int action_count() const { return static_cast<int>(head_.output_size()); }

  const MultiLayerPerceptron& encoder() const { return encoder_; }
  const MultiLayerPerceptron& head() const { return head_; }
  MultiLayerPerceptron& encoder() { return encoder_; }
  MultiLayerPerceptron& head() { return head_; }

 private:
  MultiLayerPerceptron encoder_;
  MultiLayerPerceptron head_;
  AdamState encoder_opt_;
  AdamState head_opt_;
  Scalar max_grad_norm_;
  ForwardTrace obs_trace_;
  ForwardTrace next_trace_;
  ForwardTrace head_trace_;
};

}  // namespace mngu
