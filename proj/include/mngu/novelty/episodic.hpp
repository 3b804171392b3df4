#pragma once

#include <deque>
#include <set>
#include <vector>

#include "mngu/types.hpp"

namespace mngu {

// Per-agent within-episode store of embeddings. FIFO eviction at capacity;
// cleared at every episode boundary.
class EpisodicMemory {
 public:
  EpisodicMemory(int agent_id, std::size_t capacity);

  void record_visit(const VectorX& embedding);
  void clear();

  int agent_id() const { return agent_id_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return store_.size(); }
  const VectorX& entry(std::size_t i) const { return store_[i]; }  // 0 oldest

 private:
  int agent_id_;
  std::size_t capacity_;
  std::deque<VectorX> store_;
};

// Mean Euclidean distance from `query` to its min(k_nn, size) nearest stored
// embeddings; `empty_value` when the memory is empty. The query itself is not
// in the memory yet (record_visit inserts it afterwards).
Scalar episodic_novelty(const EpisodicMemory& memory, const VectorX& query,
                        int k_nn, Scalar empty_value = 1.0);

enum class NoveltyVerdict { novel, non_novel };

// Episode-scoped registry of unit-normalized representative embeddings and
// the distinct agents that visited each. An embedding is non-novel once
// visit_threshold different agents registered a cosine-similar one.
class SharedNoveltyRegistry {
 public:
  SharedNoveltyRegistry(Scalar similarity_threshold, int visit_threshold);

  // Matches `embedding` against the registry by cosine similarity. On a match
  // the verdict is settled from the visitor count before this visit is added;
  // otherwise a new entry is created. Zero embeddings are novel and are not
  // registered.
  NoveltyVerdict observe(int agent_id, const VectorX& embedding);

  void clear();

  std::size_t size() const { return entries_.size(); }
  Scalar similarity_threshold() const { return tau_; }
  int visit_threshold() const { return visit_threshold_; }
  // Distinct visitors of the entry matching `embedding`, 0 when none matches.
  int visitor_count(const VectorX& embedding) const;

 private:
  struct Entry {
    VectorX representative;  // unit L2 norm
    std::set<int> visitors;
  };

  const Entry* best_match(const VectorX& unit, Scalar* similarity) const;

  Scalar tau_;
  int visit_threshold_;
  std::vector<Entry> entries_;
};

// Total reward of one agent-step: extrinsic + beta * intrinsic.
inline Scalar combine_reward(Scalar extrinsic, Scalar intrinsic, Scalar beta) {
  return extrinsic + beta * intrinsic;
}

// Episode boundary: drop all stored embeddings and registry entries.
void reset_episode(EpisodicMemory& memory, SharedNoveltyRegistry* registry);

}  // namespace mngu
