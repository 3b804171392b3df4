#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mngu/types.hpp"

namespace mngu {

// Trailing moving average: index i averages entries max(0, i-window+1)..i.
std::vector<Scalar> smooth(const std::vector<Scalar>& series, int window);

// Metrics of one training run. Episode entries cover completed episodes only;
// a trailing partial episode is reported separately.
struct RunSeries {
  std::vector<Scalar> episode_returns;    // extrinsic, mean over pursuers
  std::vector<Scalar> smoothed_returns;
  std::vector<Scalar> episode_intrinsic;  // mean per agent-step, diagnostic
  std::uint64_t partial_length = 0;
  Scalar partial_return = 0;
  std::uint64_t td_updates_per_agent = 0;
  std::uint64_t target_syncs = 0;
};

// Cross-run mean and normal-approximation 95% band of smoothed returns,
// indexed by episode.
struct AggregateSeries {
  std::vector<Scalar> mean;
  std::vector<Scalar> ci_low;
  std::vector<Scalar> ci_high;
  std::vector<int> n_runs;
};

AggregateSeries aggregate_runs(const std::vector<const RunSeries*>& runs);

// Mean over the final `steps` environment steps' worth of completed episodes
// of the smoothed series (steps / episode_length episodes, at least one).
Scalar final_window_mean(const RunSeries& run, std::uint64_t steps,
                         int episode_length);

void write_raw_csv(std::ostream& out, const RunSeries& run);
RunSeries read_raw_csv(std::istream& in);

void write_aggregate_csv(std::ostream& out, const AggregateSeries& aggregate);
AggregateSeries read_aggregate_csv(std::istream& in);

}  // namespace mngu
