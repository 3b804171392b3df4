#include "mngu/runner/run.hpp"

#include <algorithm>
#include <atomic>
#include <memory>
#include <mutex>
#include <thread>

#include "mngu/agents/dqn.hpp"
#include "mngu/env/tag_env.hpp"
#include "mngu/errors.hpp"
#include "mngu/novelty/embedding.hpp"
#include "mngu/novelty/episodic.hpp"

namespace mngu {

namespace {

TagEnvConfig env_config_of(const ExperimentConfig& config) {
  TagEnvConfig env;
  env.n_pursuers = config.n_pursuers;
  env.n_obstacles = config.n_obstacles;
  env.max_cycles = config.max_cycles;
  return env;
}

nlohmann::json net_to_json(const MultiLayerPerceptron& net) {
  nlohmann::json doc;
  doc["layer_sizes"] = net.layer_sizes();
  auto& weights = doc["weights"] = nlohmann::json::array();
  auto& biases = doc["biases"] = nlohmann::json::array();
  for (Index l = 0; l < net.layer_count(); ++l) {
    nlohmann::json rows = nlohmann::json::array();
    const MatrixX& w = net.weights(l);
    for (Index r = 0; r < w.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Index c = 0; c < w.cols(); ++c) row.push_back(w(r, c));
      rows.push_back(std::move(row));
    }
    weights.push_back(std::move(rows));
    const VectorX& b = net.biases(l);
    nlohmann::json bias = nlohmann::json::array();
    for (Index r = 0; r < b.size(); ++r) bias.push_back(b[r]);
    biases.push_back(std::move(bias));
  }
  return doc;
}

}  // namespace

RunSeries run_single(const ExperimentConfig& config, std::uint64_t seed,
                     const RunHooks* hooks, nlohmann::json* checkpoint) {
  validate_config(config);
  const int n = config.n_pursuers;
  const bool ngu = uses_ngu(config);
  const bool gated = config.variant == Variant::shared_novelty;

  TagEnv env(env_config_of(config), derive_seed(seed, stream::env));
  Rng explore_rng(derive_seed(seed, stream::explore));

  DqnAgentConfig agent_config;
  agent_config.obs_size = env.observation_size();
  agent_config.action_count = TagEnv::kActionCount;
  agent_config.hidden_layers = config.hidden_layers;
  agent_config.gamma = config.gamma;
  agent_config.learning_rate = config.learning_rate;
  agent_config.max_grad_norm = config.max_grad_norm;

  std::vector<DqnAgent> agents;
  std::vector<Rng> replay_rngs;
  std::vector<EmbeddingNetwork> embeddings;
  std::vector<EpisodicMemory> memories;
  agents.reserve(n);
  replay_rngs.reserve(n);
  for (int i = 0; i < n; ++i) {
    agent_config.beta = agent_beta(config, i);
    Rng init(derive_seed(seed, stream::q_init + static_cast<std::uint64_t>(i)));
    agents.emplace_back(i, agent_config, init);
    replay_rngs.emplace_back(
        derive_seed(seed, stream::replay + static_cast<std::uint64_t>(i)));
    if (ngu) {
      Rng embed_init(
          derive_seed(seed, stream::embed_init + static_cast<std::uint64_t>(i)));
      embeddings.emplace_back(env.observation_size(), config.embedding_dim,
                              config.encoder_hidden, TagEnv::kActionCount,
                              AdamConfig{config.learning_rate},
                              config.max_grad_norm, embed_init);
      memories.emplace_back(i, config.episodic_memory_capacity);
    }
  }

  std::unique_ptr<SharedNoveltyRegistry> registry;
  if (gated)
    registry = std::make_unique<SharedNoveltyRegistry>(config.tau_sim,
                                                       config.sharing_k);

  std::vector<ReplayBuffer> buffers;
  if (config.shared_buffer) {
    buffers.emplace_back(config.buffer_capacity);
  } else {
    for (int i = 0; i < n; ++i) buffers.emplace_back(config.buffer_capacity);
  }
  auto buffer_of = [&](int i) -> ReplayBuffer& {
    return config.shared_buffer ? buffers[0] : buffers[i];
  };

  EpsilonSchedule schedule{config.epsilon_start, config.epsilon_end,
                          config.exploration_fraction};

  RunSeries series;
  std::vector<VectorX> obs = env.reset(derive_seed(seed, stream::env));
  std::vector<int> actions(n);
  Scalar episode_return = 0;
  Scalar episode_intrinsic = 0;
  std::uint64_t episode_steps = 0;

  // Scratch for inverse-dynamics batches.
  MatrixX batch_obs, batch_next;
  std::vector<int> batch_actions;

  for (std::uint64_t global_step = 1; global_step <= config.total_timesteps;
       ++global_step) {
    const Scalar eps = epsilon_at(schedule, global_step - 1,
                                  config.total_timesteps);
    for (int i = 0; i < n; ++i)
      actions[i] = agents[i].select_action(obs[i], eps, explore_rng);

    const StepOutcome outcome = env.step(actions);

    for (int i = 0; i < n; ++i) {
      const Scalar extrinsic = outcome.rewards[i];
      Scalar reward = extrinsic;
      if (ngu) {
        const VectorX emb = embeddings[i].embed(outcome.observations[i]);
        const NoveltyVerdict verdict =
            gated ? registry->observe(i, emb) : NoveltyVerdict::novel;
        const Scalar raw =
            episodic_novelty(memories[i], emb, config.k_nn, config.r_novel_max);
        memories[i].record_visit(emb);
        const Scalar intrinsic = verdict == NoveltyVerdict::non_novel
                                     ? Scalar(0)
                                     : std::min(raw, config.r_novel_max);
        reward = combine_reward(extrinsic, intrinsic, agents[i].beta());
        episode_intrinsic += intrinsic;
      }
      Transition t{i, obs[i], actions[i], reward, outcome.observations[i],
                   outcome.done};
      if (hooks && hooks->on_push) hooks->on_push(t);
      buffer_of(i).push(std::move(t));
    }
    episode_return += outcome.rewards[0];
    ++episode_steps;

    if (global_step % config.train_frequency == 0 &&
        global_step >= config.learning_starts) {
      for (int g = 0; g < config.gradient_steps; ++g) {
        for (int i = 0; i < n; ++i) {
          ReplayBuffer& buffer = buffer_of(i);
          if (buffer.size() < static_cast<std::size_t>(config.batch_size))
            continue;
          const std::vector<Transition> batch =
              buffer.sample(static_cast<std::size_t>(config.batch_size),
                            replay_rngs[i]);
          const Scalar loss = agents[i].td_update(batch);
          if (hooks && hooks->on_td_update) hooks->on_td_update(i, loss);
          if (ngu && agents[i].beta() != 0) {
            const Index b = static_cast<Index>(batch.size());
            batch_obs.resize(env.observation_size(), b);
            batch_next.resize(env.observation_size(), b);
            batch_actions.resize(batch.size());
            for (Index c = 0; c < b; ++c) {
              batch_obs.col(c) = batch[c].obs;
              batch_next.col(c) = batch[c].next_obs;
              batch_actions[c] = batch[c].action;
            }
            embeddings[i].inverse_dynamics_update(batch_obs, batch_next,
                                                  batch_actions);
          }
        }
      }
    }

    if (global_step % config.target_update_interval == 0) {
      for (int i = 0; i < n; ++i) {
        agents[i].sync_target();
        if (hooks && hooks->on_sync) hooks->on_sync(i);
      }
    }

    if (outcome.done) {
      series.episode_returns.push_back(episode_return);
      series.episode_intrinsic.push_back(
          ngu ? episode_intrinsic /
                    static_cast<Scalar>(episode_steps * static_cast<std::uint64_t>(n))
              : Scalar(0));
      episode_return = 0;
      episode_intrinsic = 0;
      episode_steps = 0;
      if (ngu)
        for (int i = 0; i < n; ++i) reset_episode(memories[i], registry.get());
      obs = env.reset();
    } else {
      obs = outcome.observations;
    }
  }

  series.partial_length = episode_steps;
  series.partial_return = episode_steps > 0 ? episode_return : 0;
  series.smoothed_returns =
      smooth(series.episode_returns, config.smoothing_window);
  series.td_updates_per_agent = agents.empty() ? 0 : agents[0].gradient_steps();
  series.target_syncs = agents.empty() ? 0 : agents[0].target_syncs();

  if (checkpoint) {
    nlohmann::json doc;
    doc["schema_version"] = config.schema_version;
    doc["seed"] = seed;
    auto& agent_list = doc["agents"] = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
      nlohmann::json entry;
      entry["agent_id"] = i;
      entry["beta"] = agents[i].beta();
      entry["online"] = net_to_json(agents[i].online());
      if (ngu) {
        entry["encoder"] = net_to_json(embeddings[i].encoder());
        entry["inverse_head"] = net_to_json(embeddings[i].head());
      }
      agent_list.push_back(std::move(entry));
    }
    *checkpoint = std::move(doc);
  }
  return series;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config, int jobs,
                                 const CacheLoader& load_cached,
                                 const CacheStore& store) {
  validate_config(config);
  if (config.seeds.empty()) throw ConfigError("seeds: must list at least one");

  const std::size_t count = config.seeds.size();
  std::vector<RunSeries> results(count);
  std::vector<std::string> errors(count);
  std::vector<char> failed(count, 0);

  std::mutex cache_mutex;
  auto execute = [&](std::size_t idx) {
    const std::uint64_t seed = config.seeds[idx];
    try {
      {
        std::lock_guard<std::mutex> lock(cache_mutex);
        if (load_cached && load_cached(seed, results[idx])) return;
      }
      nlohmann::json checkpoint;
      results[idx] = run_single(config, seed, nullptr,
                                store ? &checkpoint : nullptr);
      if (store) {
        std::lock_guard<std::mutex> lock(cache_mutex);
        store(seed, results[idx], checkpoint);
      }
    } catch (const std::exception& err) {
      failed[idx] = 1;
      errors[idx] = err.what();
    }
  };

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
  if (workers == 1) {
    for (std::size_t idx = 0; idx < count; ++idx) execute(idx);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t idx = cursor.fetch_add(1); idx < count;
             idx = cursor.fetch_add(1))
          execute(idx);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  ExperimentOutcome outcome;
  for (std::size_t idx = 0; idx < count; ++idx) {
    if (failed[idx]) {
      outcome.failures.emplace_back(config.seeds[idx], errors[idx]);
    } else {
      outcome.seeds.push_back(config.seeds[idx]);
      outcome.runs.push_back(std::move(results[idx]));
    }
  }
  if (outcome.runs.empty())
    throw DivergenceError("all seeds failed; first error: " +
                          (outcome.failures.empty()
                               ? std::string("unknown")
                               : outcome.failures.front().second));
  std::vector<const RunSeries*> pointers;
  pointers.reserve(outcome.runs.size());
  for (const RunSeries& run : outcome.runs) pointers.push_back(&run);
  outcome.aggregate = aggregate_runs(pointers);
  return outcome;
}

}  // namespace mngu
