#include "mngu/novelty/embedding.hpp"

#include <cmath>

#include "mngu/errors.hpp"
#include "mngu/nn/losses.hpp"

namespace mngu {

EmbeddingNetwork::EmbeddingNetwork(Index obs_size, Index embedding_dim,
                                   Index hidden_size, int action_count,
                                   const AdamConfig& optim,
                                   Scalar max_grad_norm, Rng& rng)
    : encoder_({obs_size, hidden_size, embedding_dim}, rng),
      head_({2 * embedding_dim, hidden_size, action_count}, rng),
      encoder_opt_(encoder_, optim),
      head_opt_(head_, optim),
      max_grad_norm_(max_grad_norm) {}

VectorX EmbeddingNetwork::embed(const VectorX& obs) const {
  return encoder_.value(obs);
}

MatrixX EmbeddingNetwork::embed(const MatrixX& obs) const {
  return encoder_.value(obs);
}

Scalar EmbeddingNetwork::inverse_dynamics_update(
    const MatrixX& obs, const MatrixX& next_obs,
    const std::vector<int>& actions) {
  const Index batch = obs.cols();
  if (batch == 0) throw UsageError("inverse dynamics update on an empty batch");
  if (next_obs.cols() != batch ||
      static_cast<Index>(actions.size()) != batch) {
    throw UsageError("inverse dynamics batch sizes disagree");
  }

  const MatrixX e_now = encoder_.forward(obs, obs_trace_);
  const MatrixX e_next = encoder_.forward(next_obs, next_trace_);

  const Index dim = encoder_.output_size();
  MatrixX pair(2 * dim, batch);
  pair.topRows(dim) = e_now;
  pair.bottomRows(dim) = e_next;

  const MatrixX logits = head_.forward(pair, head_trace_);
  const BatchLossGrad ce = cross_entropy_from_logits(logits, actions);
  if (!std::isfinite(ce.loss))
    throw DivergenceError("inverse dynamics loss is not finite");

  encoder_.zero_grads();
  head_.zero_grads();
  const MatrixX pair_grad = head_.backward(head_trace_, ce.grad,
                                           head_.weight_grad_set(),
                                           head_.bias_grad_set());
  encoder_.backward(obs_trace_, pair_grad.topRows(dim),
                    encoder_.weight_grad_set(), encoder_.bias_grad_set());
  encoder_.backward(next_trace_, pair_grad.bottomRows(dim),
                    encoder_.weight_grad_set(), encoder_.bias_grad_set());

  clip_gradients({&encoder_, &head_}, max_grad_norm_);
  encoder_opt_.step(encoder_);
  head_opt_.step(head_);
  return ce.loss;
}

}  // namespace mngu
