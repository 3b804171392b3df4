#include <doctest.h>

#include <cmath>
#include <vector>

#include "mngu/errors.hpp"
#include "mngu/nn/losses.hpp"
#include "mngu/novelty/embedding.hpp"
#include "mngu/novelty/episodic.hpp"
#include "mngu/rng.hpp"
#include "oracles/knn_brute.hpp"

using namespace mngu;

namespace {

VectorX vec2(Scalar x, Scalar y) {
  VectorX v(2);
  v << x, y;
  return v;
}

}  // namespace

TEST_CASE("novelty of an empty memory is the empty value") {
  EpisodicMemory mem(0, 16);
  CHECK(episodic_novelty(mem, vec2(1, 2), 10) == 1.0);
  CHECK(episodic_novelty(mem, vec2(1, 2), 10, 7.5) == 7.5);
}

TEST_CASE("novelty hand examples") {
  EpisodicMemory mem(0, 16);
  mem.record_visit(vec2(1, 2));
  CHECK(episodic_novelty(mem, vec2(1, 2), 1) == 0.0);
  mem.clear();
  mem.record_visit(vec2(0, 0));
  mem.record_visit(vec2(3, 4));
  // Distances 0 and 5, mean 2.5.
  CHECK(episodic_novelty(mem, vec2(0, 0), 2) == 2.5);
  // k larger than the store falls back to all entries.
  CHECK(episodic_novelty(mem, vec2(0, 0), 10) == 2.5);
  CHECK(episodic_novelty(mem, vec2(0, 0), 1) == 0.0);
  CHECK_THROWS_AS(episodic_novelty(mem, vec2(0, 0), 0), UsageError);
}

TEST_CASE("novelty matches the brute-force reference bit for bit") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 1 + rng.uniform_int(8);
    const int count = rng.uniform_int(65);
    const int k = 1 + rng.uniform_int(12);
    EpisodicMemory mem(0, 128);
    std::vector<VectorX> plain;
    for (int i = 0; i < count; ++i) {
      VectorX e(dim);
      for (int j = 0; j < dim; ++j) e[j] = rng.uniform(-2.0, 2.0);
      mem.record_visit(e);
      plain.push_back(e);
    }
    VectorX q(dim);
    for (int j = 0; j < dim; ++j) q[j] = rng.uniform(-2.0, 2.0);
    const Scalar got = episodic_novelty(mem, q, k, 1.0);
    const Scalar want = oracle::brute_force_novelty(plain, q, k, 1.0);
    CHECK(got == want);
    CHECK(got >= 0.0);
  }
}

TEST_CASE("a new visit never raises novelty once k entries exist") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 1 + rng.uniform_int(4);
    const int k = 1 + rng.uniform_int(4);
    EpisodicMemory mem(0, 64);
    for (int i = 0; i < k + rng.uniform_int(8); ++i) {
      VectorX e(dim);
      for (int j = 0; j < dim; ++j) e[j] = rng.uniform(-1.0, 1.0);
      mem.record_visit(e);
    }
    VectorX q(dim), extra(dim);
    for (int j = 0; j < dim; ++j) q[j] = rng.uniform(-1.0, 1.0);
    for (int j = 0; j < dim; ++j) extra[j] = rng.uniform(-1.0, 1.0);
    const Scalar before = episodic_novelty(mem, q, k);
    mem.record_visit(extra);
    CHECK(episodic_novelty(mem, q, k) <= before);
  }
}

TEST_CASE("memory evicts oldest first at capacity") {
  EpisodicMemory mem(3, 2);
  CHECK(mem.agent_id() == 3);
  mem.record_visit(vec2(1, 0));
  mem.record_visit(vec2(2, 0));
  mem.record_visit(vec2(3, 0));
  REQUIRE(mem.size() == 2);
  CHECK(mem.entry(0) == vec2(2, 0));
  CHECK(mem.entry(1) == vec2(3, 0));
  CHECK_THROWS_AS(EpisodicMemory(0, 0), ConfigError);
}

TEST_CASE("reset_episode clears memory and registry") {
  EpisodicMemory mem(0, 8);
  SharedNoveltyRegistry reg(0.99, 1);
  mem.record_visit(vec2(1, 1));
  reg.observe(0, vec2(1, 1));
  reset_episode(mem, &reg);
  CHECK(mem.size() == 0);
  CHECK(reg.size() == 0);
  CHECK(episodic_novelty(mem, vec2(1, 1), 10) == 1.0);
  reset_episode(mem, nullptr);  // registry is optional
  reset_episode(mem, &reg);     // and clearing twice is harmless
  CHECK(mem.size() == 0);
}

TEST_CASE("registry gate with visit threshold 1") {
  SharedNoveltyRegistry reg(0.99, 1);
  const VectorX e = vec2(0.6, 0.8);
  CHECK(reg.observe(0, e) == NoveltyVerdict::novel);
  CHECK(reg.observe(1, e) == NoveltyVerdict::non_novel);
  CHECK(reg.observe(0, e) == NoveltyVerdict::non_novel);
  CHECK(reg.size() == 1);
  CHECK(reg.visitor_count(e) == 2);
  // Scaling does not change direction, so it still matches.
  CHECK(reg.observe(2, 3.0 * e) == NoveltyVerdict::non_novel);
  // An orthogonal embedding opens a fresh entry.
  CHECK(reg.observe(2, vec2(-0.8, 0.6)) == NoveltyVerdict::novel);
  CHECK(reg.size() == 2);
}

TEST_CASE("registry gate with visit threshold 2") {
  SharedNoveltyRegistry reg(0.99, 2);
  const VectorX e = vec2(1, 0);
  CHECK(reg.observe(0, e) == NoveltyVerdict::novel);
  CHECK(reg.observe(1, e) == NoveltyVerdict::novel);
  CHECK(reg.observe(2, e) == NoveltyVerdict::non_novel);
  CHECK(reg.observe(0, e) == NoveltyVerdict::non_novel);
  CHECK(reg.visitor_count(e) == 3);
}

TEST_CASE("one agent alone never closes a threshold-2 gate") {
  SharedNoveltyRegistry reg(0.99, 2);
  const VectorX e = vec2(0.3, -0.4);
  for (int i = 0; i < 50; ++i)
    CHECK(reg.observe(4, e) == NoveltyVerdict::novel);
  CHECK(reg.visitor_count(e) == 1);
}

TEST_CASE("zero embeddings stay novel and unregistered") {
  SharedNoveltyRegistry reg(0.99, 1);
  CHECK(reg.observe(0, vec2(0, 0)) == NoveltyVerdict::novel);
  CHECK(reg.observe(1, vec2(0, 0)) == NoveltyVerdict::novel);
  CHECK(reg.size() == 0);
  CHECK(reg.visitor_count(vec2(0, 0)) == 0);
}

TEST_CASE("registry constructor validates its thresholds") {
  CHECK_THROWS_AS(SharedNoveltyRegistry(0.0, 1), ConfigError);
  CHECK_THROWS_AS(SharedNoveltyRegistry(1.5, 1), ConfigError);
  CHECK_THROWS_AS(SharedNoveltyRegistry(0.99, 0), ConfigError);
}

TEST_CASE("combine_reward arithmetic") {
  CHECK(combine_reward(1.0, 0.5, 0.1) == 1.0 + 0.1 * 0.5);
  CHECK(combine_reward(1.0, 0.5, 0.1) == doctest::Approx(1.05));
  CHECK(combine_reward(10.0, 0.3, 0.4) == doctest::Approx(10.12));
  CHECK(combine_reward(0.3, 123.456, 0.0) == 0.3);
  CHECK(combine_reward(-2.5, 1.0, 0.0) == -2.5);
}

TEST_CASE("embedding network is deterministic in its seed") {
  Rng a(11), b(11), c(12);
  EmbeddingNetwork na(16, 32, 64, 5, AdamConfig{}, 10.0, a);
  EmbeddingNetwork nb(16, 32, 64, 5, AdamConfig{}, 10.0, b);
  EmbeddingNetwork nc(16, 32, 64, 5, AdamConfig{}, 10.0, c);
  VectorX obs(16);
  Rng data(1);
  for (int i = 0; i < 16; ++i) obs[i] = data.uniform(-1.0, 1.0);
  CHECK(na.embed(obs) == nb.embed(obs));
  CHECK(na.embed(obs) != nc.embed(obs));
  CHECK(na.embed(obs).size() == 32);
  CHECK(na.embedding_dim() == 32);
  CHECK(na.action_count() == 5);
}

TEST_CASE("embed is the encoder forward pass") {
  Rng rng(2);
  EmbeddingNetwork net(4, 3, 8, 5, AdamConfig{}, 10.0, rng);
  VectorX obs(4);
  obs << 0.5, -0.25, 1.0, 0.0;
  CHECK(net.embed(obs) == net.encoder().value(obs));
  for (Index l = 0; l < net.encoder().layer_count(); ++l)
    net.encoder().weights(l).setZero();
  CHECK(net.embed(obs).isZero(0));
}

TEST_CASE("inverse dynamics reports the cross-entropy of its own logits") {
  Rng rng(8);
  EmbeddingNetwork net(4, 3, 8, 5, AdamConfig{}, 10.0, rng);
  const int batch = 6;
  MatrixX obs(4, batch), next(4, batch);
  std::vector<int> actions;
  Rng data(3);
  for (int c = 0; c < batch; ++c) {
    for (int r = 0; r < 4; ++r) {
      obs(r, c) = data.uniform(-1.0, 1.0);
      next(r, c) = data.uniform(-1.0, 1.0);
    }
    actions.push_back(data.uniform_int(5));
  }
  const MatrixX phi_t = net.embed(obs);
  const MatrixX phi_t1 = net.embed(next);
  MatrixX pair(6, batch);
  pair.topRows(3) = phi_t;
  pair.bottomRows(3) = phi_t1;
  const MatrixX logits = net.head().value(pair);
  const Scalar expected = cross_entropy_from_logits(logits, actions).loss;
  const Scalar reported = net.inverse_dynamics_update(obs, next, actions);
  CHECK(reported == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("inverse dynamics learns a separable toy problem") {
  Rng rng(21);
  EmbeddingNetwork net(2, 4, 16, 5, AdamConfig{.learning_rate = 3e-3}, 10.0,
                       rng);
  // Eight fixed transitions where the action is readable from the offset.
  MatrixX obs(2, 8), next(2, 8);
  std::vector<int> actions;
  Rng data(4);
  for (int c = 0; c < 8; ++c) {
    const int a = c % 4 + 1;
    obs(0, c) = data.uniform(-0.5, 0.5);
    obs(1, c) = data.uniform(-0.5, 0.5);
    next(0, c) = obs(0, c) + (a == 1 ? -1.0 : a == 2 ? 1.0 : 0.0);
    next(1, c) = obs(1, c) + (a == 3 ? -1.0 : a == 4 ? 1.0 : 0.0);
    actions.push_back(a);
  }
  const Scalar first = net.inverse_dynamics_update(obs, next, actions);
  Scalar last = first;
  for (int i = 0; i < 200; ++i)
    last = net.inverse_dynamics_update(obs, next, actions);
  CHECK(last < 0.5 * first);
  CHECK(last < 0.2);
}

TEST_CASE("inverse dynamics rejects malformed batches") {
  Rng rng(1);
  EmbeddingNetwork net(2, 3, 4, 5, AdamConfig{}, 10.0, rng);
  MatrixX obs(2, 0), next(2, 0);
  CHECK_THROWS_AS(net.inverse_dynamics_update(obs, next, {}), UsageError);
  MatrixX a(2, 2), b(2, 3);
  a.setZero();
  b.setZero();
  CHECK_THROWS_AS(net.inverse_dynamics_update(a, b, {0, 0}), UsageError);
  CHECK_THROWS_AS(net.inverse_dynamics_update(a, a, {0}), UsageError);
}
