#pragma once

#include <cstddef>
#include <vector>

#include "mngu/rng.hpp"
#include "mngu/types.hpp"

namespace mngu {

struct Transition {
  int agent_id = 0;
  VectorX obs;
  int action = 0;
  Scalar reward = 0;
  VectorX next_obs;
  bool done = false;
};

// Fixed-capacity ring buffer. Once full, each push overwrites the oldest
// transition. Indexing and iteration are in insertion order, oldest first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition transition);
  std::size_t size() const { return std::min(inserted_, capacity_); }
  std::size_t capacity() const { return capacity_; }
  std::size_t inserted() const { return inserted_; }

  const Transition& operator[](std::size_t i) const;

  // Uniform sampling with replacement. Throws UsageError when fewer than
  // batch_size transitions are stored.
  std::vector<Transition> sample(std::size_t batch_size, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t inserted_ = 0;
  std::vector<Transition> data_;
};

}  // namespace mngu
