#include "mngu/replay/buffer.hpp"

#include <utility>

#include "mngu/errors.hpp"

namespace mngu {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("replay capacity must be positive");
  data_.reserve(std::min<std::size_t>(capacity, 4096));
}

void ReplayBuffer::push(Transition transition) {
  if (inserted_ < capacity_) {
    data_.push_back(std::move(transition));
  } else {
    data_[inserted_ % capacity_] = std::move(transition);
  }
  ++inserted_;
}

const Transition& ReplayBuffer::operator[](std::size_t i) const {
  if (i >= size()) throw UsageError("replay index out of range");
  if (inserted_ <= capacity_) return data_[i];
  return data_[(inserted_ + i) % capacity_];
}

std::vector<Transition> ReplayBuffer::sample(std::size_t batch_size,
                                             Rng& rng) const {
  if (size() < batch_size)
    throw UsageError("replay buffer holds fewer transitions than batch size");
  std::vector<Transition> batch;
  batch.reserve(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) {
    const std::size_t j =
        static_cast<std::size_t>(rng.uniform_int(static_cast<int>(size())));
    batch.push_back(data_[inserted_ <= capacity_ ? j : (inserted_ + j) % capacity_]);
  }
  return batch;
}

}  // namespace mngu
