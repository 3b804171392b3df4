#include "mngu/novelty/episodic.hpp"

#include <algorithm>
#include <cmath>

#include "mngu/errors.hpp"

namespace mngu {

namespace {

// Scalar-loop distance so results are reproducible coefficient by coefficient.
Scalar euclidean(const VectorX& a, const VectorX& b) {
  Scalar sq = 0;
  for (Index i = 0; i < a.size(); ++i) {
    const Scalar d = a[i] - b[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

Scalar dot(const VectorX& a, const VectorX& b) {
  Scalar s = 0;
  for (Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

EpisodicMemory::EpisodicMemory(int agent_id, std::size_t capacity)
    : agent_id_(agent_id), capacity_(capacity) {
  if (capacity == 0) throw ConfigError("episodic memory capacity must be positive");
}

void EpisodicMemory::record_visit(const VectorX& embedding) {
  if (store_.size() == capacity_) store_.pop_front();
  store_.push_back(embedding);
}

void EpisodicMemory::clear() { store_.clear(); }

Scalar episodic_novelty(const EpisodicMemory& memory, const VectorX& query,
                        int k_nn, Scalar empty_value) {
  if (k_nn < 1) throw UsageError("k_nn must be at least 1");
  if (memory.size() == 0) return empty_value;
  std::vector<Scalar> dists;
  dists.reserve(memory.size());
  for (std::size_t i = 0; i < memory.size(); ++i)
    dists.push_back(euclidean(query, memory.entry(i)));
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_nn),
                                              dists.size());
  std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
  std::sort(dists.begin(), dists.begin() + k);
  Scalar sum = 0;
  for (std::size_t i = 0; i < k; ++i) sum += dists[i];
  return sum / static_cast<Scalar>(k);
}

SharedNoveltyRegistry::SharedNoveltyRegistry(Scalar similarity_threshold,
                                             int visit_threshold)
    : tau_(similarity_threshold), visit_threshold_(visit_threshold) {
  if (similarity_threshold <= 0 || similarity_threshold > 1)
    throw ConfigError("similarity threshold must be in (0, 1]");
  if (visit_threshold < 1) throw ConfigError("visit threshold must be at least 1");
}

const SharedNoveltyRegistry::Entry* SharedNoveltyRegistry::best_match(
    const VectorX& unit, Scalar* similarity) const {
  const Entry* best = nullptr;
  Scalar best_sim = -2;
  for (const Entry& entry : entries_) {
    const Scalar sim = dot(unit, entry.representative);
    if (sim > best_sim) {
      best_sim = sim;
      best = &entry;
    }
  }
  if (similarity) *similarity = best_sim;
  return best;
}

NoveltyVerdict SharedNoveltyRegistry::observe(int agent_id,
                                              const VectorX& embedding) {
  const Scalar norm = std::sqrt(dot(embedding, embedding));
  if (norm == Scalar(0)) return NoveltyVerdict::novel;
  const VectorX unit = embedding / norm;

  Scalar sim = -2;
  const Entry* match = best_match(unit, &sim);
  if (match != nullptr && sim >= tau_) {
    // Count distinct prior visitors; this visit only affects later queries.
    auto* entry = const_cast<Entry*>(match);
    const bool known =
        static_cast<int>(entry->visitors.size()) >= visit_threshold_;
    entry->visitors.insert(agent_id);
    return known ? NoveltyVerdict::non_novel : NoveltyVerdict::novel;
  }
  entries_.push_back({unit, {agent_id}});
  return NoveltyVerdict::novel;
}

int SharedNoveltyRegistry::visitor_count(const VectorX& embedding) const {
  const Scalar norm = std::sqrt(dot(embedding, embedding));
  if (norm == Scalar(0) || entries_.empty()) return 0;
  Scalar sim = -2;
  const Entry* match = best_match(embedding / norm, &sim);
  if (match == nullptr || sim < tau_) return 0;
  return static_cast<int>(match->visitors.size());
}

void SharedNoveltyRegistry::clear() { entries_.clear(); }

void reset_episode(EpisodicMemory& memory, SharedNoveltyRegistry* registry) {
  memory.clear();
  if (registry) registry->clear();
}

}  // namespace mngu
