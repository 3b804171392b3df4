#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mngu/rng.hpp"
#include "mngu/types.hpp"

namespace mngu {

struct EntitySpec {
  Scalar radius;
  Scalar mass;
  Scalar accel;
  Scalar max_speed;  // <= 0 means unbounded
  bool movable;
  bool collidable;
};

struct WorldState {
  std::vector<Vector2> positions;
  std::vector<Vector2> velocities;
  int step_count = 0;
};

struct StepOutcome {
  std::vector<VectorX> observations;  // one per pursuer
  std::vector<Scalar> rewards;        // one per pursuer, identical values
  bool done = false;
  int tag_count = 0;
  std::vector<int> actions;  // applied this step: pursuers then evader
};

struct TagEnvConfig {
  int n_pursuers = 3;
  int n_obstacles = 2;
  int max_cycles = 25;
  Scalar dt = 0.1;
  Scalar damping = 0.25;
  Scalar contact_stiffness = 100.0;
  Scalar contact_margin = 1e-3;
  Scalar tag_reward = 10.0;
  Scalar pursuer_radius = 0.075;
  Scalar pursuer_accel = 3.0;
  Scalar pursuer_max_speed = 1.0;
  Scalar evader_radius = 0.05;
  Scalar evader_accel = 4.0;
  Scalar evader_max_speed = 1.3;
  Scalar obstacle_radius = 0.2;
  Scalar entity_mass = 1.0;
  Scalar arena_half_extent = 1.0;     // agent spawn box and evader keep-in box
  Scalar obstacle_spawn_extent = 0.9;
};

// Unit force direction for a discrete action:
// 0 none, 1 -x, 2 +x, 3 -y, 4 +y.
Vector2 action_direction(int action);

// Pursuit-evasion arena: n_pursuers chasing one scripted evader among static
// obstacles. Entity order is pursuers [0, P), evader P, obstacles [P+1, ...).
// All randomness comes from the internal stream, so a (seed, action sequence)
// pair replays to a bit-identical trajectory.
class TagEnv {
 public:
  static constexpr int kActionCount = 5;

  TagEnv(TagEnvConfig config, std::uint64_t seed);

  // Samples a fresh layout: agents uniform in the arena box, obstacles in the
  // obstacle box, velocities zero. The seeded overload reseeds the stream
  // first, so equal seeds give equal layouts. Returns per-pursuer
  // observations.
  std::vector<VectorX> reset();
  std::vector<VectorX> reset(std::uint64_t seed);

  // Advances one step: the evader action comes from evader_policy().
  StepOutcome step(const std::vector<int>& pursuer_actions);

  // Advances one step with explicit actions for pursuers and evader.
  StepOutcome step_all(const std::vector<int>& agent_actions);

  // [own vel (2), own pos (2), obstacle offsets (2 each), other pursuer
  // offsets (2 each), evader offset (2), evader vel (2)].
  VectorX observe(int pursuer_index) const;

  // Deterministic flee heuristic: move away from the nearest pursuer along
  // the best axis-aligned direction that keeps the evader inside the arena.
  int evader_policy() const;

  const WorldState& state() const { return state_; }
  void set_state(const WorldState& state);
  const std::vector<EntitySpec>& entity_specs() const { return specs_; }
  const TagEnvConfig& config() const { return cfg_; }
  int entity_count() const { return cfg_.n_pursuers + 1 + cfg_.n_obstacles; }
  int evader_index() const { return cfg_.n_pursuers; }
  Index observation_size() const;
  bool done() const { return state_.step_count >= cfg_.max_cycles; }

 private:
  std::vector<VectorX> all_observations() const;

  TagEnvConfig cfg_;
  std::vector<EntitySpec> specs_;
  WorldState state_;
  Rng rng_;
};

// Trajectory dump rows: one line per entity per step, columns
// step,entity,x,y,vx,vy,action,reward. Obstacles report action 0, reward 0.
void write_trajectory_header(std::ostream& out);
void write_trajectory_rows(std::ostream& out, int step_index, const TagEnv& env,
                           const StepOutcome& outcome);

}  // namespace mngu
