#include "mngu/agents/dqn.hpp"

#include <algorithm>

#include "mngu/errors.hpp"
#include "mngu/nn/losses.hpp"

namespace mngu {

Scalar epsilon_at(const EpsilonSchedule& schedule, std::uint64_t step,
                  std::uint64_t total_timesteps) {
  const Scalar span = schedule.fraction * static_cast<Scalar>(total_timesteps);
  if (span <= 0) return schedule.end;
  const Scalar progress =
      std::min<Scalar>(1.0, static_cast<Scalar>(step) / span);
  return schedule.start + (schedule.end - schedule.start) * progress;
}

namespace {

std::vector<Index> full_sizes(const DqnAgentConfig& config) {
  if (config.obs_size <= 0) throw ConfigError("agent obs_size must be positive");
  if (config.action_count <= 0)
    throw ConfigError("agent action_count must be positive");
  std::vector<Index> sizes;
  sizes.push_back(config.obs_size);
  sizes.insert(sizes.end(), config.hidden_layers.begin(),
               config.hidden_layers.end());
  sizes.push_back(config.action_count);
  return sizes;
}

Index argmax_column(const MatrixX& values, Index col) {
  Index best = 0;
  for (Index r = 1; r < values.rows(); ++r)
    if (values(r, col) > values(best, col)) best = r;
  return best;
}

}  // namespace

DqnAgent::DqnAgent(int agent_id, const DqnAgentConfig& config, Rng& init_rng)
    : agent_id_(agent_id),
      gamma_(config.gamma),
      max_grad_norm_(config.max_grad_norm),
      beta_(config.beta),
      online_(full_sizes(config), init_rng),
      target_(online_),
      optimizer_(online_, AdamConfig{config.learning_rate}) {}

int DqnAgent::select_action(const VectorX& obs, Scalar epsilon,
                            Rng& rng) const {
  const Scalar u = rng.uniform();
  if (u < epsilon)
    return rng.uniform_int(static_cast<int>(online_.output_size()));
  return greedy_action(obs);
}

int DqnAgent::greedy_action(const VectorX& obs) const {
  const VectorX q = online_.value(obs);
  Index best = 0;
  for (Index r = 1; r < q.size(); ++r)
    if (q[r] > q[best]) best = r;
  return static_cast<int>(best);
}

Scalar DqnAgent::td_update(const std::vector<Transition>& batch) {
  if (batch.empty()) throw UsageError("td_update on an empty batch");
  const Index b = static_cast<Index>(batch.size());
  const Index obs_size = online_.input_size();

  MatrixX obs(obs_size, b);
  MatrixX next_obs(obs_size, b);
  for (Index i = 0; i < b; ++i) {
    obs.col(i) = batch[i].obs;
    next_obs.col(i) = batch[i].next_obs;
  }

  const MatrixX q_next = target_.value(next_obs);
  VectorX targets(b);
  for (Index i = 0; i < b; ++i) {
    const Scalar best_next = q_next(argmax_column(q_next, i), i);
    const Scalar carry = batch[i].done ? Scalar(0) : gamma_ * best_next;
    targets[i] = batch[i].reward + carry;
  }

  const MatrixX q = online_.forward(obs);
  VectorX taken(b);
  for (Index i = 0; i < b; ++i) taken[i] = q(batch[i].action, i);

  const LossGrad huber = huber_q_loss(taken, targets);

  MatrixX output_grad = MatrixX::Zero(q.rows(), b);
  for (Index i = 0; i < b; ++i)
    output_grad(batch[i].action, i) = huber.grad[i];

  online_.backward(output_grad);
  clip_gradients(online_, max_grad_norm_);
  optimizer_.step(online_);
  ++gradient_steps_;
  return huber.loss;
}

void DqnAgent::sync_target() {
  target_ = online_;
  ++target_syncs_;
}

}  // namespace mngu
