#pragma once

#include <vector>

#include "mngu/nn/adam.hpp"
#include "mngu/nn/mlp.hpp"
#include "mngu/replay/buffer.hpp"
#include "mngu/rng.hpp"
#include "mngu/types.hpp"

namespace mngu {

// Linear annealing from `start` to `end` over the first
// `fraction * total_timesteps` environment steps, constant afterwards.
struct EpsilonSchedule {
  Scalar start = 1.0;
  Scalar end = 0.1;
  Scalar fraction = 0.1;
};

Scalar epsilon_at(const EpsilonSchedule& schedule, std::uint64_t step,
                  std::uint64_t total_timesteps);

struct DqnAgentConfig {
  Index obs_size = 0;
  int action_count = 5;
  std::vector<Index> hidden_layers = {64, 64};
  Scalar gamma = 0.99;
  Scalar learning_rate = 1e-3;
  Scalar max_grad_norm = 10.0;
  Scalar beta = 0.1;
};

// One Q-learner. Action selection and optimization are decoupled from the
// environment loop so agents can share or keep private replay storage.
class DqnAgent {
 public:
  DqnAgent(int agent_id, const DqnAgentConfig& config, Rng& init_rng);

  // Draws one uniform for the explore/exploit decision and, only on explore,
  // one more for the action, so the stream advances identically across
  // variants that share a policy RNG.
  int select_action(const VectorX& obs, Scalar epsilon, Rng& rng) const;

  int greedy_action(const VectorX& obs) const;

  // One gradient step on the Huber TD error of the batch. Returns the loss
  // before the update.
  Scalar td_update(const std::vector<Transition>& batch);

  void sync_target();

  int agent_id() const { return agent_id_; }
  Scalar beta() const { return beta_; }
  Scalar gamma() const { return gamma_; }
  std::uint64_t gradient_steps() const { return gradient_steps_; }
  std::uint64_t target_syncs() const { return target_syncs_; }

  const MultiLayerPerceptron& online() const { return online_; }
  MultiLayerPerceptron& online() { return online_; }
  const MultiLayerPerceptron& target() const { return target_; }

 private:
  int agent_id_;
  Scalar gamma_;
  Scalar max_grad_norm_;
  Scalar beta_;
  MultiLayerPerceptron online_;
  MultiLayerPerceptron target_;
  AdamState optimizer_;
  std::uint64_t gradient_steps_ = 0;
  std::uint64_t target_syncs_ = 0;
};

}  // namespace mngu
