#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mngu/replay/buffer.hpp"
#include "mngu/runner/config.hpp"
#include "mngu/runner/metrics.hpp"

namespace mngu {

// Child-stream tags hung off the run seed. Per-agent streams add the agent
// index to the base tag.
namespace stream {
constexpr std::uint64_t env = 1;
constexpr std::uint64_t explore = 2;
constexpr std::uint64_t policy = 3;  // dump-env random policy
constexpr std::uint64_t q_init = 1000;
constexpr std::uint64_t embed_init = 2000;
constexpr std::uint64_t replay = 3000;
}  // namespace stream

// Optional observers, called synchronously inside the loop.
struct RunHooks {
  std::function<void(const Transition&)> on_push;
  std::function<void(int agent_id, Scalar loss)> on_td_update;
  std::function<void(int agent_id)> on_sync;
};

// One seeded training run. When `checkpoint` is non-null it receives the
// final network parameters.
RunSeries run_single(const ExperimentConfig& config, std::uint64_t seed,
                     const RunHooks* hooks = nullptr,
                     nlohmann::json* checkpoint = nullptr);

struct ExperimentOutcome {
  std::vector<std::uint64_t> seeds;             // seeds that produced a run
  std::vector<RunSeries> runs;                  // parallel to `seeds`
  std::vector<std::pair<std::uint64_t, std::string>> failures;
  AggregateSeries aggregate;
};

// Returns true and fills `out` when a cached series exists for this seed.
using CacheLoader = std::function<bool(std::uint64_t seed, RunSeries& out)>;
// Persists a freshly computed run.
using CacheStore = std::function<void(std::uint64_t seed, const RunSeries& run,
                                      const nlohmann::json& checkpoint)>;

// Runs every configured seed (worker threads up to `jobs`), then aggregates
// the smoothed curves. Failed seeds are collected, not fatal, unless every
// seed fails.
ExperimentOutcome run_experiment(const ExperimentConfig& config, int jobs = 1,
                                 const CacheLoader& load_cached = {},
                                 const CacheStore& store = {});

}  // namespace mngu
