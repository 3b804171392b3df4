#include "mngu/runner/metrics.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "mngu/errors.hpp"
#include "mngu/format.hpp"

namespace mngu {

std::vector<Scalar> smooth(const std::vector<Scalar>& series, int window) {
  if (window < 1) throw UsageError("smoothing window must be at least 1");
  std::vector<Scalar> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::size_t first =
        i + 1 >= static_cast<std::size_t>(window)
            ? i + 1 - static_cast<std::size_t>(window)
            : 0;
    Scalar sum = 0;
    for (std::size_t j = first; j <= i; ++j) sum += series[j];
    out[i] = sum / static_cast<Scalar>(i - first + 1);
  }
  return out;
}

AggregateSeries aggregate_runs(const std::vector<const RunSeries*>& runs) {
  std::size_t length = 0;
  for (const RunSeries* run : runs)
    length = std::max(length, run->smoothed_returns.size());
  AggregateSeries agg;
  agg.mean.resize(length);
  agg.ci_low.resize(length);
  agg.ci_high.resize(length);
  agg.n_runs.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    Scalar sum = 0;
    int n = 0;
    for (const RunSeries* run : runs) {
      if (i >= run->smoothed_returns.size()) continue;
      sum += run->smoothed_returns[i];
      ++n;
    }
    const Scalar mean = sum / static_cast<Scalar>(n);
    Scalar sq = 0;
    for (const RunSeries* run : runs) {
      if (i >= run->smoothed_returns.size()) continue;
      const Scalar d = run->smoothed_returns[i] - mean;
      sq += d * d;
    }
    const Scalar sd = n > 1 ? std::sqrt(sq / static_cast<Scalar>(n - 1)) : 0;
    const Scalar half = 1.96 * sd / std::sqrt(static_cast<Scalar>(n));
    agg.mean[i] = mean;
    agg.ci_low[i] = mean - half;
    agg.ci_high[i] = mean + half;
    agg.n_runs[i] = n;
  }
  return agg;
}

Scalar final_window_mean(const RunSeries& run, std::uint64_t steps,
                         int episode_length) {
  if (run.smoothed_returns.empty())
    throw UsageError("final_window_mean on a run with no completed episodes");
  const std::size_t episodes = std::max<std::size_t>(
      1, static_cast<std::size_t>(steps / static_cast<std::uint64_t>(
                                              episode_length)));
  const std::size_t n = std::min(episodes, run.smoothed_returns.size());
  Scalar sum = 0;
  for (std::size_t i = run.smoothed_returns.size() - n;
       i < run.smoothed_returns.size(); ++i)
    sum += run.smoothed_returns[i];
  return sum / static_cast<Scalar>(n);
}

void write_raw_csv(std::ostream& out, const RunSeries& run) {
  out << "episode_index,return,smoothed_return,mean_intrinsic\n";
  for (std::size_t i = 0; i < run.episode_returns.size(); ++i) {
    out << i << ',' << format_scalar(run.episode_returns[i]) << ','
        << format_scalar(run.smoothed_returns[i]) << ','
        << format_scalar(run.episode_intrinsic[i]) << '\n';
  }
}

namespace {

Scalar parse_scalar_field(const std::string& text, const char* context) {
  Scalar value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw IoError(std::string("malformed numeric field in ") + context +
                  ": " + text);
  return value;
}

}  // namespace

RunSeries read_raw_csv(std::istream& in) {
  RunSeries run;
  std::string line;
  if (!std::getline(in, line) ||
      line != "episode_index,return,smoothed_return,mean_intrinsic")
    throw IoError("raw CSV header mismatch");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 4) throw IoError("raw CSV row has wrong arity");
    run.episode_returns.push_back(parse_scalar_field(fields[1], "raw CSV"));
    run.smoothed_returns.push_back(parse_scalar_field(fields[2], "raw CSV"));
    run.episode_intrinsic.push_back(parse_scalar_field(fields[3], "raw CSV"));
  }
  return run;
}

AggregateSeries read_aggregate_csv(std::istream& in) {
  AggregateSeries agg;
  std::string line;
  if (!std::getline(in, line) ||
      line != "episode_index,mean_smoothed_return,ci_low,ci_high,n_runs")
    throw IoError("aggregate CSV header mismatch");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 5) throw IoError("aggregate CSV row has wrong arity");
    agg.mean.push_back(parse_scalar_field(fields[1], "aggregate CSV"));
    agg.ci_low.push_back(parse_scalar_field(fields[2], "aggregate CSV"));
    agg.ci_high.push_back(parse_scalar_field(fields[3], "aggregate CSV"));
    agg.n_runs.push_back(
        static_cast<int>(parse_scalar_field(fields[4], "aggregate CSV")));
  }
  return agg;
}

void write_aggregate_csv(std::ostream& out, const AggregateSeries& aggregate) {
  out << "episode_index,mean_smoothed_return,ci_low,ci_high,n_runs\n";
  for (std::size_t i = 0; i < aggregate.mean.size(); ++i) {
    out << i << ',' << format_scalar(aggregate.mean[i]) << ','
        << format_scalar(aggregate.ci_low[i]) << ','
        << format_scalar(aggregate.ci_high[i]) << ',' << aggregate.n_runs[i]
        << '\n';
  }
}

}  // namespace mngu
