#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mngu/types.hpp"

namespace mngu {

enum class Variant { multi_dqn, multi_ngu, shared_novelty, hetero_beta };

std::string variant_name(Variant variant);
Variant variant_from_name(const std::string& name);

// One experiment = one variant trained over a list of seeds. Defaults follow
// the reference hyperparameter table; config files override by key.
struct ExperimentConfig {
  int schema_version = 1;
  std::string name = "experiment";
  Variant variant = Variant::multi_dqn;
  bool shared_buffer = false;

  int n_pursuers = 3;
  int n_obstacles = 2;
  int max_cycles = 25;

  std::uint64_t total_timesteps = 200000;
  std::uint64_t learning_starts = 5000;
  std::uint64_t train_frequency = 16;
  int gradient_steps = 4;
  std::uint64_t target_update_interval = 2000;
  int batch_size = 128;
  std::size_t buffer_capacity = 1000000;

  Scalar gamma = 0.99;
  Scalar learning_rate = 0.001;
  Scalar max_grad_norm = 10.0;
  std::vector<Index> hidden_layers = {64, 64};

  Scalar epsilon_start = 1.0;
  Scalar epsilon_end = 0.1;
  Scalar exploration_fraction = 0.1;

  Scalar beta = 0.1;
  std::vector<Scalar> betas;  // hetero_beta only, one entry per pursuer
  int sharing_k = 1;          // shared_novelty only
  int k_nn = 10;
  Scalar tau_sim = 0.99;
  Scalar r_novel_max = 1.0;
  Index embedding_dim = 32;
  Index encoder_hidden = 64;
  std::size_t episodic_memory_capacity = 4096;

  std::vector<std::uint64_t> seeds = {1, 2,  3,  4,  5,  6,  7, 8,
                                      9, 10, 11, 12, 13, 14, 15};
  int smoothing_window = 100;
};

// Strict parse: unknown keys and type mismatches raise ConfigError naming the
// field. Fields not present keep their defaults.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
void validate_config(const ExperimentConfig& config);

nlohmann::json config_to_json(const ExperimentConfig& config);

// Intrinsic scale for one pursuer under the configured variant.
Scalar agent_beta(const ExperimentConfig& config, int agent_index);
bool uses_ngu(const ExperimentConfig& config);

// Content hash identifying one (config, seed) run, independent of the config
// name and seed list. Used to key cached results.
std::uint64_t run_hash(const ExperimentConfig& config, std::uint64_t seed);

Index observation_size_of(const ExperimentConfig& config);

}  // namespace mngu
