#include "mngu/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mngu/env/tag_env.hpp"
#include "mngu/errors.hpp"
#include "mngu/format.hpp"
#include "mngu/runner/config.hpp"
#include "mngu/runner/metrics.hpp"
#include "mngu/runner/run.hpp"
#include "mngu/runner/svg.hpp"

namespace mngu {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string default_out_root() {
  if (const char* env = std::getenv("MNGU_OUT"); env && *env) return env;
  return "results";
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    std::uint64_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
      throw ConfigError("--seeds: expected a comma-separated integer list, "
                        "got \"" + token + "\"");
    seeds.push_back(value);
  }
  if (seeds.empty()) throw ConfigError("--seeds: list is empty");
  return seeds;
}

ExperimentConfig load_cli_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError("config file " + path + ": " + err.what());
  }
  if (doc.is_object() && !doc.contains("name"))
    doc["name"] = fs::path(path).stem().string();
  return parse_config(doc);
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out.good()) throw IoError("write failed: " + path.string());
}

// Cache layout per run: <root>/<name>/<seed>/{raw.csv, meta.json,
// checkpoint.json}. meta.json is written last and carries the content hash
// that validates the entry.
struct RunCache {
  fs::path config_dir;
  const ExperimentConfig* config;

  fs::path seed_dir(std::uint64_t seed) const {
    return config_dir / std::to_string(seed);
  }

  bool load(std::uint64_t seed, RunSeries& out) const {
    const fs::path dir = seed_dir(seed);
    std::ifstream meta_in(dir / "meta.json");
    if (!meta_in) return false;
    json meta;
    try {
      meta = json::parse(meta_in);
    } catch (const json::parse_error&) {
      return false;
    }
    if (!meta.is_object() || !meta.contains("hash") ||
        !meta["hash"].is_number_unsigned() ||
        meta["hash"].get<std::uint64_t>() != run_hash(*config, seed))
      return false;
    std::ifstream raw_in(dir / "raw.csv", std::ios::binary);
    if (!raw_in) return false;
    try {
      out = read_raw_csv(raw_in);
    } catch (const IoError&) {
      return false;
    }
    out.partial_length = meta.value("partial_length", std::uint64_t{0});
    out.partial_return = meta.value("partial_return", Scalar{0});
    out.td_updates_per_agent =
        meta.value("td_updates_per_agent", std::uint64_t{0});
    out.target_syncs = meta.value("target_syncs", std::uint64_t{0});
    return true;
  }

  void store(std::uint64_t seed, const RunSeries& run,
             const json& checkpoint) const {
    const fs::path dir = seed_dir(seed);
    fs::create_directories(dir);
    std::ostringstream raw;
    write_raw_csv(raw, run);
    write_text_file(dir / "raw.csv", raw.str());
    write_text_file(dir / "checkpoint.json", checkpoint.dump(2) + "\n");
    json meta;
    meta["schema_version"] = config->schema_version;
    meta["name"] = config->name;
    meta["seed"] = seed;
    meta["hash"] = run_hash(*config, seed);
    meta["variant"] = variant_name(config->variant);
    meta["shared_buffer"] = config->shared_buffer;
    meta["total_timesteps"] = config->total_timesteps;
    meta["episodes"] = run.episode_returns.size();
    meta["partial_length"] = run.partial_length;
    meta["partial_return"] = run.partial_return;
    meta["td_updates_per_agent"] = run.td_updates_per_agent;
    meta["target_syncs"] = run.target_syncs;
    meta["config"] = config_to_json(*config);
    write_text_file(dir / "meta.json", meta.dump(2) + "\n");
  }
};

// Trains (or loads) one experiment config and writes its results directory.
ExperimentOutcome train_one(const ExperimentConfig& config,
                            const fs::path& out_root, int jobs) {
  RunCache cache{out_root / config.name, &config};
  fs::create_directories(cache.config_dir);
  ExperimentOutcome outcome = run_experiment(
      config, jobs,
      [&](std::uint64_t seed, RunSeries& out) { return cache.load(seed, out); },
      [&](std::uint64_t seed, const RunSeries& run, const json& checkpoint) {
        cache.store(seed, run, checkpoint);
      });

  for (const auto& [seed, message] : outcome.failures)
    std::cerr << "warning: seed " << seed << " failed: " << message << "\n";
  if (!outcome.failures.empty())
    std::cerr << "warning: " << outcome.failures.size() << " of "
              << config.seeds.size()
              << " seeds failed; aggregating the rest\n";

  std::ostringstream agg;
  write_aggregate_csv(agg, outcome.aggregate);
  write_text_file(cache.config_dir / "aggregate.csv", agg.str());

  std::ostringstream svg;
  write_curve_svg(svg, {{config.name, outcome.aggregate}}, config.name);
  write_text_file(cache.config_dir / "curve.svg", svg.str());
  return outcome;
}

void print_summary(const ExperimentConfig& config,
                   const ExperimentOutcome& outcome) {
  if (outcome.aggregate.mean.empty()) {
    std::cout << config.name << ": no completed episodes (n_runs="
              << outcome.runs.size() << ")\n";
    return;
  }
  const std::size_t last = outcome.aggregate.mean.size() - 1;
  const Scalar mean = outcome.aggregate.mean[last];
  const Scalar half = outcome.aggregate.ci_high[last] - mean;
  std::cout << config.name << ": final smoothed return " << format_scalar(mean)
            << " ± " << format_scalar(half)
            << " (n_runs=" << outcome.aggregate.n_runs[last] << ")\n";
}

void write_overlays(const fs::path& out_root,
                    const std::vector<ExperimentConfig>& configs,
                    const std::vector<AggregateSeries>& aggregates) {
  std::vector<Curve> shared, individual;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    Curve curve{configs[i].name, aggregates[i]};
    (configs[i].shared_buffer ? shared : individual).push_back(curve);
  }
  if (!shared.empty()) {
    std::ostringstream svg;
    write_curve_svg(svg, shared, "shared replay buffer");
    write_text_file(out_root / "overlay_shared.svg", svg.str());
  }
  if (!individual.empty()) {
    std::ostringstream svg;
    write_curve_svg(svg, individual, "individual replay buffers");
    write_text_file(out_root / "overlay_individual.svg", svg.str());
  }
}

int cmd_train(const std::string& config_path, const std::string& out,
              const std::string& seeds, int jobs) {
  ExperimentConfig config = load_cli_config(config_path);
  if (!seeds.empty()) config.seeds = parse_seed_list(seeds);
  validate_config(config);
  const ExperimentOutcome outcome = train_one(config, out, jobs);
  print_summary(config, outcome);
  return 0;
}

int cmd_compare(const std::vector<std::string>& config_paths,
                const std::string& out, const std::string& seeds, int jobs) {
  std::vector<ExperimentConfig> configs;
  for (const std::string& path : config_paths) {
    configs.push_back(load_cli_config(path));
    if (!seeds.empty()) configs.back().seeds = parse_seed_list(seeds);
    validate_config(configs.back());
  }
  for (std::size_t i = 1; i < configs.size(); ++i) {
    if (observation_size_of(configs[i]) != observation_size_of(configs[0]))
      throw ConfigError(
          "configs disagree on observation dimension (" +
          std::to_string(observation_size_of(configs[0])) + " vs " +
          std::to_string(observation_size_of(configs[i])) + ")");
  }

  const fs::path out_root(out);
  std::vector<AggregateSeries> aggregates;
  fs::create_directories(out_root);
  std::ostringstream comparison;
  comparison << "config,episode_index,mean_smoothed_return,ci_low,ci_high,"
                "n_runs\n";
  for (const ExperimentConfig& config : configs) {
    const ExperimentOutcome outcome = train_one(config, out_root, jobs);
    print_summary(config, outcome);
    const AggregateSeries& agg = outcome.aggregate;
    for (std::size_t i = 0; i < agg.mean.size(); ++i) {
      comparison << config.name << ',' << i << ','
                 << format_scalar(agg.mean[i]) << ','
                 << format_scalar(agg.ci_low[i]) << ','
                 << format_scalar(agg.ci_high[i]) << ',' << agg.n_runs[i]
                 << '\n';
    }
    aggregates.push_back(agg);
  }
  write_text_file(out_root / "comparison.csv", comparison.str());
  write_overlays(out_root, configs, aggregates);
  return 0;
}

int cmd_dump_env(std::uint64_t seed, int steps, const std::string& policy,
                 const std::string& out_file) {
  if (steps < 1) throw UsageError("--steps: must be at least 1");
  TagEnvConfig env_config;
  env_config.max_cycles = steps;  // single uninterrupted trajectory
  TagEnv env(env_config, derive_seed(seed, stream::env));
  Rng policy_rng(derive_seed(seed, stream::policy));

  std::ostringstream out;
  write_trajectory_header(out);
  const int agent_count = env_config.n_pursuers + 1;
  std::vector<int> actions(agent_count, 0);
  for (int step = 1; step <= steps; ++step) {
    if (policy == "random")
      for (int& a : actions) a = policy_rng.uniform_int(TagEnv::kActionCount);
    const StepOutcome outcome = env.step_all(actions);
    write_trajectory_rows(out, step, env, outcome);
  }

  if (out_file.empty()) {
    std::cout << out.str();
  } else {
    write_text_file(out_file, out.str());
  }
  return 0;
}

int cmd_plot(const std::vector<std::string>& config_paths,
             const std::string& out) {
  const fs::path out_root(out);
  std::vector<ExperimentConfig> configs;
  std::vector<AggregateSeries> aggregates;
  for (const std::string& path : config_paths) {
    ExperimentConfig config = load_cli_config(path);
    const fs::path csv = out_root / config.name / "aggregate.csv";
    std::ifstream in(csv, std::ios::binary);
    if (!in) throw IoError("no aggregate at " + csv.string() +
                           " (train this config first)");
    AggregateSeries agg = read_aggregate_csv(in);
    std::ostringstream svg;
    write_curve_svg(svg, {{config.name, agg}}, config.name);
    write_text_file(out_root / config.name / "curve.svg", svg.str());
    configs.push_back(std::move(config));
    aggregates.push_back(std::move(agg));
  }
  if (configs.size() > 1) write_overlays(out_root, configs, aggregates);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Multi-agent pursuit-evasion training and analysis"};
  app.require_subcommand(1);

  std::string out_root = default_out_root();
  std::string seeds;
  int jobs = 1;

  std::string train_config;
  CLI::App* train = app.add_subcommand("train", "Train one experiment config");
  train->add_option("--config", train_config, "Experiment config file (JSON)")
      ->required();
  train->add_option("--out", out_root, "Output root directory");
  train->add_option("--seeds", seeds, "Comma-separated seed override");
  train->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);

  std::vector<std::string> compare_configs;
  CLI::App* compare =
      app.add_subcommand("compare", "Train and overlay several configs");
  compare->add_option("--config", compare_configs, "Config files (two or more)")
      ->required()
      ->expected(2, -1);
  compare->add_option("--out", out_root, "Output root directory");
  compare->add_option("--seeds", seeds, "Comma-separated seed override");
  compare->add_option("--jobs", jobs, "Parallel runs")
      ->check(CLI::PositiveNumber);

  std::uint64_t dump_seed = 0;
  int dump_steps = 25;
  std::string dump_policy = "random";
  std::string dump_out;
  CLI::App* dump =
      app.add_subcommand("dump-env", "Write a per-step environment trajectory");
  dump->add_option("--seed", dump_seed, "Environment seed");
  dump->add_option("--steps", dump_steps, "Steps to simulate")
      ->check(CLI::PositiveNumber);
  dump->add_option("--policy", dump_policy, "Action policy")
      ->check(CLI::IsMember({"random", "zero"}));
  dump->add_option("--out", dump_out, "Output file (default stdout)");

  std::vector<std::string> plot_configs;
  CLI::App* plot =
      app.add_subcommand("plot", "Re-emit SVG plots from stored aggregates");
  plot->add_option("--config", plot_configs, "Config files")
      ->required()
      ->expected(1, -1);
  plot->add_option("--out", out_root, "Output root directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (train->parsed()) return cmd_train(train_config, out_root, seeds, jobs);
    if (compare->parsed())
      return cmd_compare(compare_configs, out_root, seeds, jobs);
    if (dump->parsed())
      return cmd_dump_env(dump_seed, dump_steps, dump_policy, dump_out);
    if (plot->parsed()) return cmd_plot(plot_configs, out_root);
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return 2;
  } catch (const DivergenceError& err) {
    std::cerr << "training diverged: " << err.what() << "\n";
    return 3;
  } catch (const IoError& err) {
    std::cerr << "I/O error: " << err.what() << "\n";
    return 4;
  } catch (const fs::filesystem_error& err) {
    std::cerr << "I/O error: " << err.what() << "\n";
    return 4;
  }
  return 0;
}

}  // namespace mngu
