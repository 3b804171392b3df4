#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

// Reference implementation of one physics step, written directly from the
// documented update law on plain doubles. Deliberately independent of the
// environment module: no Eigen, no shared helpers.
namespace oracle {

struct RefEntity {
  double radius;
  double mass;
  double accel;
  double max_speed;  // <= 0 unbounded
  bool movable;
  bool collidable;
};

struct RefWorld {
  std::vector<std::array<double, 2>> pos;
  std::vector<std::array<double, 2>> vel;
};

struct RefParams {
  double dt = 0.1;
  double damping = 0.25;
  double stiffness = 100.0;
  double margin = 1e-3;
};

// Advances `world` by one step. `actions` covers the leading agent entities
// (0 none, 1 -x, 2 +x, 3 -y, 4 +y); remaining entities get no action force.
inline void ref_step(const std::vector<RefEntity>& entities, RefWorld& world,
                     const std::vector<int>& actions, const RefParams& p) {
  const std::size_t n = entities.size();
  std::vector<std::array<double, 2>> force(n, {0.0, 0.0});

  for (std::size_t i = 0; i < actions.size(); ++i) {
    double fx = 0, fy = 0;
    switch (actions[i]) {
      case 1: fx = -1; break;
      case 2: fx = 1; break;
      case 3: fy = -1; break;
      case 4: fy = 1; break;
      default: break;
    }
    force[i][0] += fx * entities[i].accel;
    force[i][1] += fy * entities[i].accel;
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!entities[i].collidable) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!entities[j].collidable) continue;
      const double dx = world.pos[i][0] - world.pos[j][0];
      const double dy = world.pos[i][1] - world.pos[j][1];
      const double dist = std::sqrt(dx * dx + dy * dy);
      if (dist == 0) continue;
      const double min_dist = entities[i].radius + entities[j].radius;
      const double arg = -(dist - min_dist) / p.margin;
      const double softplus =
          std::max(arg, 0.0) + std::log1p(std::exp(-std::abs(arg)));
      const double penetration = p.margin * softplus;
      const double scale = p.stiffness * penetration / dist;
      if (entities[i].movable) {
        force[i][0] += scale * dx;
        force[i][1] += scale * dy;
      }
      if (entities[j].movable) {
        force[j][0] -= scale * dx;
        force[j][1] -= scale * dy;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!entities[i].movable) continue;
    double vx = world.vel[i][0] * (1.0 - p.damping) +
                force[i][0] / entities[i].mass * p.dt;
    double vy = world.vel[i][1] * (1.0 - p.damping) +
                force[i][1] / entities[i].mass * p.dt;
    if (entities[i].max_speed > 0) {
      const double speed = std::sqrt(vx * vx + vy * vy);
      if (speed > entities[i].max_speed) {
        vx *= entities[i].max_speed / speed;
        vy *= entities[i].max_speed / speed;
      }
    }
    world.vel[i][0] = vx;
    world.vel[i][1] = vy;
    world.pos[i][0] += vx * p.dt;
    world.pos[i][1] += vy * p.dt;
  }
}

}  // namespace oracle
