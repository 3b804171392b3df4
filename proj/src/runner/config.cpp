#include "mngu/runner/config.hpp"

#include <fstream>
#include <sstream>

#include "mngu/errors.hpp"

namespace mngu {

std::string variant_name(Variant variant) {
  switch (variant) {
    case Variant::multi_dqn: return "multi_dqn";
    case Variant::multi_ngu: return "multi_ngu";
    case Variant::shared_novelty: return "shared_novelty";
    case Variant::hetero_beta: return "hetero_beta";
  }
  throw ConfigError("unknown variant value");
}

Variant variant_from_name(const std::string& name) {
  if (name == "multi_dqn") return Variant::multi_dqn;
  if (name == "multi_ngu") return Variant::multi_ngu;
  if (name == "shared_novelty") return Variant::shared_novelty;
  if (name == "hetero_beta") return Variant::hetero_beta;
  throw ConfigError("variant: unknown value \"" + name +
                    "\" (expected multi_dqn, multi_ngu, shared_novelty, or "
                    "hetero_beta)");
}

bool uses_ngu(const ExperimentConfig& config) {
  return config.variant != Variant::multi_dqn;
}

Scalar agent_beta(const ExperimentConfig& config, int agent_index) {
  if (config.variant == Variant::multi_dqn) return 0;
  if (config.variant == Variant::hetero_beta)
    return config.betas.at(static_cast<std::size_t>(agent_index));
  return config.beta;
}

Index observation_size_of(const ExperimentConfig& config) {
  return 4 + 2 * config.n_obstacles + 2 * (config.n_pursuers - 1) + 4;
}

namespace {

using nlohmann::json;

[[noreturn]] void type_error(const std::string& field, const char* expected) {
  throw ConfigError(field + ": expected " + expected);
}

void read_field(const json& value, const std::string& field, std::string& out) {
  if (!value.is_string()) type_error(field, "a string");
  out = value.get<std::string>();
}

void read_field(const json& value, const std::string& field, bool& out) {
  if (!value.is_boolean()) type_error(field, "a boolean");
  out = value.get<bool>();
}

void read_field(const json& value, const std::string& field, int& out) {
  if (!value.is_number_integer()) type_error(field, "an integer");
  out = value.get<int>();
}

void read_field(const json& value, const std::string& field, Index& out) {
  if (!value.is_number_integer()) type_error(field, "an integer");
  out = value.get<Index>();
}

void read_field(const json& value, const std::string& field,
                std::uint64_t& out) {
  if (!value.is_number_integer()) type_error(field, "a non-negative integer");
  if (!value.is_number_unsigned() && value.get<std::int64_t>() < 0)
    type_error(field, "a non-negative integer");
  out = value.get<std::uint64_t>();
}

void read_field(const json& value, const std::string& field, Scalar& out) {
  if (!value.is_number()) type_error(field, "a number");
  out = value.get<Scalar>();
}

template <typename T>
void read_field(const json& value, const std::string& field,
                std::vector<T>& out) {
  if (!value.is_array()) type_error(field, "an array");
  out.clear();
  for (std::size_t i = 0; i < value.size(); ++i)
    read_field(value[i], field + "[" + std::to_string(i) + "]",
               out.emplace_back());
}

void require_positive(long long v, const char* field) {
  if (v <= 0) throw ConfigError(std::string(field) + ": must be positive");
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  ExperimentConfig config;
  bool variant_seen = false;
  for (const auto& [key, value] : doc.items()) {
    if (key == "schema_version") read_field(value, key, config.schema_version);
    else if (key == "name") read_field(value, key, config.name);
    else if (key == "variant") {
      std::string name;
      read_field(value, key, name);
      config.variant = variant_from_name(name);
      variant_seen = true;
    } else if (key == "shared_buffer") read_field(value, key, config.shared_buffer);
    else if (key == "n_pursuers") read_field(value, key, config.n_pursuers);
    else if (key == "n_obstacles") read_field(value, key, config.n_obstacles);
    else if (key == "max_cycles") read_field(value, key, config.max_cycles);
    else if (key == "total_timesteps") read_field(value, key, config.total_timesteps);
    else if (key == "learning_starts") read_field(value, key, config.learning_starts);
    else if (key == "train_frequency") read_field(value, key, config.train_frequency);
    else if (key == "gradient_steps") read_field(value, key, config.gradient_steps);
    else if (key == "target_update_interval")
      read_field(value, key, config.target_update_interval);
    else if (key == "batch_size") read_field(value, key, config.batch_size);
    else if (key == "buffer_capacity") read_field(value, key, config.buffer_capacity);
    else if (key == "gamma") read_field(value, key, config.gamma);
    else if (key == "learning_rate") read_field(value, key, config.learning_rate);
    else if (key == "max_grad_norm") read_field(value, key, config.max_grad_norm);
    else if (key == "hidden_layers") read_field(value, key, config.hidden_layers);
    else if (key == "epsilon_start") read_field(value, key, config.epsilon_start);
    else if (key == "epsilon_end") read_field(value, key, config.epsilon_end);
    else if (key == "exploration_fraction")
      read_field(value, key, config.exploration_fraction);
    else if (key == "beta") read_field(value, key, config.beta);
    else if (key == "betas") read_field(value, key, config.betas);
    else if (key == "sharing_k") read_field(value, key, config.sharing_k);
    else if (key == "k_nn") read_field(value, key, config.k_nn);
    else if (key == "tau_sim") read_field(value, key, config.tau_sim);
    else if (key == "r_novel_max") read_field(value, key, config.r_novel_max);
    else if (key == "embedding_dim") read_field(value, key, config.embedding_dim);
    else if (key == "encoder_hidden") read_field(value, key, config.encoder_hidden);
    else if (key == "episodic_memory_capacity")
      read_field(value, key, config.episodic_memory_capacity);
    else if (key == "seeds") read_field(value, key, config.seeds);
    else if (key == "smoothing_window")
      read_field(value, key, config.smoothing_window);
    else throw ConfigError("unknown config field: " + key);
  }
  if (!variant_seen) throw ConfigError("variant: required field is missing");
  validate_config(config);
  return config;
}

void validate_config(const ExperimentConfig& config) {
  if (config.schema_version != 1)
    throw ConfigError("schema_version: unsupported version " +
                      std::to_string(config.schema_version));
  require_positive(config.n_pursuers, "n_pursuers");
  if (config.n_obstacles < 0)
    throw ConfigError("n_obstacles: must be non-negative");
  require_positive(config.max_cycles, "max_cycles");
  require_positive(static_cast<long long>(config.total_timesteps),
                   "total_timesteps");
  require_positive(static_cast<long long>(config.train_frequency),
                   "train_frequency");
  require_positive(config.gradient_steps, "gradient_steps");
  require_positive(static_cast<long long>(config.target_update_interval),
                   "target_update_interval");
  require_positive(config.batch_size, "batch_size");
  require_positive(static_cast<long long>(config.buffer_capacity),
                   "buffer_capacity");
  if (config.gamma < 0 || config.gamma > 1)
    throw ConfigError("gamma: must lie in [0, 1]");
  require_positive(config.smoothing_window, "smoothing_window");
  if (config.learning_rate <= 0)
    throw ConfigError("learning_rate: must be positive");
  if (config.max_grad_norm <= 0)
    throw ConfigError("max_grad_norm: must be positive");
  for (Index h : config.hidden_layers)
    if (h <= 0) throw ConfigError("hidden_layers: sizes must be positive");
  if (config.epsilon_start < 0 || config.epsilon_start > 1)
    throw ConfigError("epsilon_start: must lie in [0, 1]");
  if (config.epsilon_end < 0 || config.epsilon_end > 1)
    throw ConfigError("epsilon_end: must lie in [0, 1]");
  if (config.exploration_fraction < 0 || config.exploration_fraction > 1)
    throw ConfigError("exploration_fraction: must lie in [0, 1]");
  if (config.beta < 0) throw ConfigError("beta: must be non-negative");
  if (config.variant == Variant::hetero_beta) {
    if (config.betas.size() != static_cast<std::size_t>(config.n_pursuers))
      throw ConfigError(
          "betas: hetero_beta needs one value per pursuer (n_pursuers = " +
          std::to_string(config.n_pursuers) + ", got " +
          std::to_string(config.betas.size()) + ")");
    for (Scalar b : config.betas)
      if (b < 0) throw ConfigError("betas: values must be non-negative");
  } else if (!config.betas.empty()) {
    throw ConfigError("betas: only valid for the hetero_beta variant");
  }
  if (config.sharing_k < 1) throw ConfigError("sharing_k: must be at least 1");
  require_positive(config.k_nn, "k_nn");
  if (config.tau_sim <= 0 || config.tau_sim > 1)
    throw ConfigError("tau_sim: must lie in (0, 1]");
  if (config.r_novel_max < 0)
    throw ConfigError("r_novel_max: must be non-negative");
  require_positive(config.embedding_dim, "embedding_dim");
  require_positive(config.encoder_hidden, "encoder_hidden");
  require_positive(static_cast<long long>(config.episodic_memory_capacity),
                   "episodic_memory_capacity");
  if (config.seeds.empty()) throw ConfigError("seeds: must list at least one");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError("config file " + path + ": " + err.what());
  }
  return parse_config(doc);
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  json doc;
  doc["schema_version"] = config.schema_version;
  doc["name"] = config.name;
  doc["variant"] = variant_name(config.variant);
  doc["shared_buffer"] = config.shared_buffer;
  doc["n_pursuers"] = config.n_pursuers;
  doc["n_obstacles"] = config.n_obstacles;
  doc["max_cycles"] = config.max_cycles;
  doc["total_timesteps"] = config.total_timesteps;
  doc["learning_starts"] = config.learning_starts;
  doc["train_frequency"] = config.train_frequency;
  doc["gradient_steps"] = config.gradient_steps;
  doc["target_update_interval"] = config.target_update_interval;
  doc["batch_size"] = config.batch_size;
  doc["buffer_capacity"] = config.buffer_capacity;
  doc["gamma"] = config.gamma;
  doc["learning_rate"] = config.learning_rate;
  doc["max_grad_norm"] = config.max_grad_norm;
  doc["hidden_layers"] = config.hidden_layers;
  doc["epsilon_start"] = config.epsilon_start;
  doc["epsilon_end"] = config.epsilon_end;
  doc["exploration_fraction"] = config.exploration_fraction;
  doc["beta"] = config.beta;
  doc["betas"] = config.betas;
  doc["sharing_k"] = config.sharing_k;
  doc["k_nn"] = config.k_nn;
  doc["tau_sim"] = config.tau_sim;
  doc["r_novel_max"] = config.r_novel_max;
  doc["embedding_dim"] = config.embedding_dim;
  doc["encoder_hidden"] = config.encoder_hidden;
  doc["episodic_memory_capacity"] = config.episodic_memory_capacity;
  doc["seeds"] = config.seeds;
  doc["smoothing_window"] = config.smoothing_window;
  return doc;
}

std::uint64_t run_hash(const ExperimentConfig& config, std::uint64_t seed) {
  json doc = config_to_json(config);
  doc.erase("name");
  doc.erase("seeds");
  doc["seed"] = seed;
  const std::string text = doc.dump();
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

}  // namespace mngu
