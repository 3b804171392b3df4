#include <doctest.h>

#include <vector>

#include "mngu/errors.hpp"
#include "mngu/replay/buffer.hpp"

using namespace mngu;

namespace {

Transition tagged(int agent_id, Scalar reward) {
  VectorX obs = VectorX::Constant(2, reward);
  return Transition{agent_id, obs, 1, reward, obs, false};
}

}  // namespace

TEST_CASE("buffer fills in insertion order") {
  ReplayBuffer buf(8);
  CHECK(buf.capacity() == 8);
  CHECK(buf.size() == 0);
  for (int i = 0; i < 5; ++i) buf.push(tagged(0, i));
  CHECK(buf.size() == 5);
  CHECK(buf.inserted() == 5);
  for (int i = 0; i < 5; ++i) CHECK(buf[i].reward == i);
  CHECK_THROWS_AS(buf[5], UsageError);
  CHECK_THROWS_AS(ReplayBuffer(0), ConfigError);
}

TEST_CASE("overwrite drops the oldest entries") {
  ReplayBuffer buf(3);
  for (int i = 0; i < 4; ++i) buf.push(tagged(0, i));
  REQUIRE(buf.size() == 3);
  CHECK(buf.inserted() == 4);
  CHECK(buf[0].reward == 1);
  CHECK(buf[1].reward == 2);
  CHECK(buf[2].reward == 3);
  for (int i = 4; i < 9; ++i) buf.push(tagged(0, i));
  CHECK(buf[0].reward == 6);
  CHECK(buf[2].reward == 8);
}

TEST_CASE("a pooled buffer keeps every agent's transitions") {
  ReplayBuffer buf(64);
  for (int step = 0; step < 7; ++step)
    for (int agent = 0; agent < 3; ++agent)
      buf.push(tagged(agent, step + 0.1 * agent));
  CHECK(buf.size() == 21);
  std::vector<int> per_agent(3, 0);
  for (std::size_t i = 0; i < buf.size(); ++i) ++per_agent[buf[i].agent_id];
  for (int agent = 0; agent < 3; ++agent) CHECK(per_agent[agent] == 7);
  // Interleaved pushes keep global insertion order.
  CHECK(buf[0].agent_id == 0);
  CHECK(buf[1].agent_id == 1);
  CHECK(buf[2].agent_id == 2);
}

TEST_CASE("sampling is with replacement") {
  ReplayBuffer buf(16);
  for (int i = 0; i < 10; ++i) buf.push(tagged(0, i));
  Rng rng(3);
  const auto batch = buf.sample(10, rng);
  REQUIRE(batch.size() == 10);
  // Without replacement a full-size batch would be a permutation.
  std::vector<int> seen(10, 0);
  for (const Transition& t : batch) ++seen[static_cast<int>(t.reward)];
  bool repeated = false;
  for (int count : seen) repeated = repeated || count > 1;
  CHECK(repeated);

  ReplayBuffer one(4);
  one.push(tagged(0, 42.0));
  CHECK(one.sample(1, rng)[0].reward == 42.0);
}

TEST_CASE("sampling needs at least batch_size entries") {
  ReplayBuffer buf(16);
  Rng rng(1);
  CHECK_THROWS_AS(buf.sample(1, rng), UsageError);
  buf.push(tagged(0, 0));
  buf.push(tagged(0, 1));
  CHECK_THROWS_AS(buf.sample(3, rng), UsageError);
  CHECK(buf.sample(2, rng).size() == 2);
}

TEST_CASE("sampling is uniform over the stored entries") {
  ReplayBuffer buf(100);
  for (int i = 0; i < 100; ++i) buf.push(tagged(0, i));
  Rng rng(2024);
  std::vector<int> counts(100, 0);
  const int draws = 100000;
  for (int i = 0; i < draws / 100; ++i)
    for (const Transition& t : buf.sample(100, rng))
      ++counts[static_cast<int>(t.reward)];
  Scalar chi2 = 0;
  for (int i = 0; i < 100; ++i) {
    const Scalar diff = counts[i] - 1000.0;
    chi2 += diff * diff / 1000.0;
  }
  // 99 degrees of freedom: mean 99, sd about 14. Flag only gross skew.
  CHECK(chi2 > 55.0);
  CHECK(chi2 < 145.0);
}

TEST_CASE("equal seeds sample equal batches") {
  ReplayBuffer buf(32);
  for (int i = 0; i < 20; ++i) buf.push(tagged(i % 3, i));
  Rng a(7), b(7), c(8);
  const auto batch_a = buf.sample(10, a);
  const auto batch_b = buf.sample(10, b);
  const auto batch_c = buf.sample(10, c);
  bool differs = false;
  for (int i = 0; i < 10; ++i) {
    CHECK(batch_a[i].reward == batch_b[i].reward);
    differs = differs || batch_a[i].reward != batch_c[i].reward;
  }
  CHECK(differs);
}
