#include "mngu/env/tag_env.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "mngu/errors.hpp"
#include "mngu/format.hpp"

namespace mngu {

namespace {

Scalar softplus(Scalar x) {
  // max(x, 0) + log1p(exp(-|x|)), stable for large |x|
  return std::max(x, Scalar(0)) + std::log1p(std::exp(-std::abs(x)));
}

}  // namespace

Vector2 action_direction(int action) {
  switch (action) {
    case 0: return Vector2(0, 0);
    case 1: return Vector2(-1, 0);
    case 2: return Vector2(1, 0);
    case 3: return Vector2(0, -1);
    case 4: return Vector2(0, 1);
    default:
      throw UsageError("action " + std::to_string(action) +
                       " outside {0..4}");
  }
}

TagEnv::TagEnv(TagEnvConfig config, std::uint64_t seed)
    : cfg_(config), rng_(seed) {
  if (cfg_.n_pursuers < 1) throw ConfigError("n_pursuers must be at least 1");
  if (cfg_.n_obstacles < 0) throw ConfigError("n_obstacles must not be negative");
  if (cfg_.max_cycles < 1) throw ConfigError("max_cycles must be at least 1");
  for (int i = 0; i < cfg_.n_pursuers; ++i)
    specs_.push_back({cfg_.pursuer_radius, cfg_.entity_mass, cfg_.pursuer_accel,
                      cfg_.pursuer_max_speed, true, true});
  specs_.push_back({cfg_.evader_radius, cfg_.entity_mass, cfg_.evader_accel,
                    cfg_.evader_max_speed, true, true});
  for (int i = 0; i < cfg_.n_obstacles; ++i)
    specs_.push_back({cfg_.obstacle_radius, cfg_.entity_mass, Scalar(0),
                      Scalar(0), false, true});
  reset();
}

std::vector<VectorX> TagEnv::reset(std::uint64_t seed) {
  rng_ = Rng(seed);
  return reset();
}

std::vector<VectorX> TagEnv::reset() {
  const int n = entity_count();
  state_.positions.assign(n, Vector2::Zero());
  state_.velocities.assign(n, Vector2::Zero());
  state_.step_count = 0;
  const Scalar a = cfg_.arena_half_extent;
  const Scalar o = cfg_.obstacle_spawn_extent;
  for (int i = 0; i < n; ++i) {
    const Scalar extent = i <= evader_index() ? a : o;
    state_.positions[i].x() = rng_.uniform(-extent, extent);
    state_.positions[i].y() = rng_.uniform(-extent, extent);
  }
  return all_observations();
}

void TagEnv::set_state(const WorldState& state) {
  if (static_cast<int>(state.positions.size()) != entity_count() ||
      static_cast<int>(state.velocities.size()) != entity_count())
    throw UsageError("world state entity count mismatch");
  state_ = state;
}

StepOutcome TagEnv::step(const std::vector<int>& pursuer_actions) {
  if (static_cast<int>(pursuer_actions.size()) != cfg_.n_pursuers)
    throw UsageError("expected one action per pursuer");
  std::vector<int> actions = pursuer_actions;
  actions.push_back(evader_policy());
  return step_all(actions);
}

StepOutcome TagEnv::step_all(const std::vector<int>& agent_actions) {
  const int n_agents = cfg_.n_pursuers + 1;
  if (static_cast<int>(agent_actions.size()) != n_agents)
    throw UsageError("expected one action per pursuer plus the evader");
  if (done()) throw UsageError("step() on a finished episode; call reset()");
  const int n = entity_count();

  std::vector<Vector2> force(n, Vector2::Zero());
  for (int i = 0; i < n_agents; ++i)
    force[i] = action_direction(agent_actions[i]) * specs_[i].accel;

  // Soft contact forces between collidable pairs, pushing the pair apart.
  for (int i = 0; i < n; ++i) {
    if (!specs_[i].collidable) continue;
    for (int j = i + 1; j < n; ++j) {
      if (!specs_[j].collidable) continue;
      const Vector2 delta = state_.positions[i] - state_.positions[j];
      const Scalar dist = delta.norm();
      if (dist == Scalar(0)) continue;  // no direction to push along
      const Scalar min_dist = specs_[i].radius + specs_[j].radius;
      const Scalar penetration =
          cfg_.contact_margin * softplus(-(dist - min_dist) / cfg_.contact_margin);
      const Vector2 f = cfg_.contact_stiffness * penetration / dist * delta;
      if (specs_[i].movable) force[i] += f;
      if (specs_[j].movable) force[j] -= f;
    }
  }

  for (int i = 0; i < n; ++i) {
    if (!specs_[i].movable) continue;
    state_.velocities[i] =
        state_.velocities[i] * (Scalar(1) - cfg_.damping) +
        force[i] / specs_[i].mass * cfg_.dt;
    if (specs_[i].max_speed > Scalar(0)) {
      const Scalar speed = state_.velocities[i].norm();
      if (speed > specs_[i].max_speed)
        state_.velocities[i] *= specs_[i].max_speed / speed;
    }
    state_.positions[i] += state_.velocities[i] * cfg_.dt;
  }
  ++state_.step_count;

  // Tags are scored on post-update positions.
  int tags = 0;
  for (int i = 0; i < cfg_.n_pursuers; ++i) {
    const Scalar dist =
        (state_.positions[i] - state_.positions[evader_index()]).norm();
    if (dist < specs_[i].radius + specs_[evader_index()].radius) ++tags;
  }

  StepOutcome outcome;
  outcome.tag_count = tags;
  const Scalar reward = cfg_.tag_reward * static_cast<Scalar>(tags);
  outcome.rewards.assign(static_cast<std::size_t>(cfg_.n_pursuers), reward);
  outcome.done = done();
  outcome.actions = agent_actions;
  outcome.observations = all_observations();
  return outcome;
}

VectorX TagEnv::observe(int pursuer_index) const {
  if (pursuer_index < 0 || pursuer_index >= cfg_.n_pursuers)
    throw UsageError("observe() index out of range");
  const Vector2& own_pos = state_.positions[pursuer_index];
  VectorX obs(observation_size());
  Index at = 0;
  obs.segment<2>(at) = state_.velocities[pursuer_index];
  at += 2;
  obs.segment<2>(at) = own_pos;
  at += 2;
  for (int i = 0; i < cfg_.n_obstacles; ++i) {
    obs.segment<2>(at) = state_.positions[evader_index() + 1 + i] - own_pos;
    at += 2;
  }
  for (int i = 0; i < cfg_.n_pursuers; ++i) {
    if (i == pursuer_index) continue;
    obs.segment<2>(at) = state_.positions[i] - own_pos;
    at += 2;
  }
  obs.segment<2>(at) = state_.positions[evader_index()] - own_pos;
  at += 2;
  obs.segment<2>(at) = state_.velocities[evader_index()];
  return obs;
}

Index TagEnv::observation_size() const {
  return 4 + 2 * cfg_.n_obstacles + 2 * (cfg_.n_pursuers - 1) + 4;
}

int TagEnv::evader_policy() const {
  const Vector2& own = state_.positions[evader_index()];

  int nearest = 0;
  Scalar nearest_dist = std::numeric_limits<Scalar>::infinity();
  for (int i = 0; i < cfg_.n_pursuers; ++i) {
    const Scalar d = (state_.positions[i] - own).norm();
    if (d < nearest_dist) {  // ties keep the lower pursuer index
      nearest_dist = d;
      nearest = i;
    }
  }
  const Vector2 flee = own - state_.positions[nearest];

  const EntitySpec& spec = specs_[evader_index()];
  const Scalar bound = cfg_.arena_half_extent;
  int best = -1, best_any = -1;
  Scalar best_score = -std::numeric_limits<Scalar>::infinity();
  Scalar best_any_score = -std::numeric_limits<Scalar>::infinity();
  for (int action = 1; action < kActionCount; ++action) {
    const Vector2 dir = action_direction(action);
    const Scalar score = dir.dot(flee);
    // Predict the move from the update law, ignoring contact forces.
    Vector2 v = state_.velocities[evader_index()] * (Scalar(1) - cfg_.damping) +
                dir * spec.accel / spec.mass * cfg_.dt;
    const Scalar speed = v.norm();
    if (spec.max_speed > Scalar(0) && speed > spec.max_speed)
      v *= spec.max_speed / speed;
    const Vector2 next = own + v * cfg_.dt;
    const bool in_bounds =
        std::abs(next.x()) <= bound && std::abs(next.y()) <= bound;
    if (in_bounds && score > best_score) {
      best_score = score;
      best = action;
    }
    if (score > best_any_score) {
      best_any_score = score;
      best_any = action;
    }
  }
  return best >= 0 ? best : best_any;
}

std::vector<VectorX> TagEnv::all_observations() const {
  std::vector<VectorX> obs;
  obs.reserve(static_cast<std::size_t>(cfg_.n_pursuers));
  for (int i = 0; i < cfg_.n_pursuers; ++i) obs.push_back(observe(i));
  return obs;
}

void write_trajectory_header(std::ostream& out) {
  out << "step,entity,x,y,vx,vy,action,reward\n";
}

void write_trajectory_rows(std::ostream& out, int step_index, const TagEnv& env,
                           const StepOutcome& outcome) {
  const WorldState& s = env.state();
  for (int e = 0; e < env.entity_count(); ++e) {
    const int action =
        e < static_cast<int>(outcome.actions.size()) ? outcome.actions[e] : 0;
    const Scalar reward =
        e < env.config().n_pursuers ? outcome.rewards[e] : Scalar(0);
    out << step_index << ',' << e << ',' << format_scalar(s.positions[e].x())
        << ',' << format_scalar(s.positions[e].y()) << ','
        << format_scalar(s.velocities[e].x()) << ','
        << format_scalar(s.velocities[e].y()) << ',' << action << ','
        << format_scalar(reward) << '\n';
  }
}

}  // namespace mngu
