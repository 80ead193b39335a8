#include "lsmdp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lsmdp/errors.hpp"
#include "parallel.hpp"

namespace lsmdp {

namespace {

double sorted_mean(const std::vector<double>& sorted) {
  double total = 0.0;
  for (double x : sorted) total += x;
  return total / static_cast<double>(sorted.size());
}

double interpolate(const std::vector<double>& sorted, double q) {
  const double position = q * static_cast<double>(sorted.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(position));
  const std::size_t upper = std::min(lower + 1, sorted.size() - 1);
  const double weight = position - static_cast<double>(lower);
  return sorted[lower] + weight * (sorted[upper] - sorted[lower]);
}

Quantiles sorted_quantiles(const std::vector<double>& sorted) {
  if (sorted.empty()) return {};
  return {sorted.front(), interpolate(sorted, 0.25), interpolate(sorted, 0.5),
          interpolate(sorted, 0.75), sorted.back()};
}

std::vector<BucketRatio> count_buckets(std::span<const TrajectoryRecord> records,
                                       std::size_t width, std::size_t buckets) {
  std::vector<BucketRatio> out(buckets);
  for (std::size_t b = 0; b < buckets; ++b) out[b].start = static_cast<TimeIndex>(b * width);
  for (const auto& record : records) {
    for (const auto& s : record.steps) {
      const auto b = static_cast<std::size_t>(s.t) / width;
      if (b >= buckets) continue;
      if (!s.sigma) {
        ++out[b].stays;
      } else if (*s.sigma == Sigma::exploration) {
        ++out[b].exploration;
      } else {
        ++out[b].exploitation;
      }
    }
  }
  for (auto& bucket : out) {
    const auto e = static_cast<double>(bucket.exploration);
    const auto x = static_cast<double>(bucket.exploitation);
    bucket.ratio = mass_ratio(e, x);
    bucket.exploration_fraction = e + x > 0.0 ? e / (e + x) : 0.0;
  }
  return out;
}

State uniform_start(const LocalSearchMdp& mdp, std::uint64_t seed) {
  Rng rng(splitmix64(seed));
  return rng.below(mdp.num_states());
}

}  // namespace

State TrajectoryRecord::final_state() const {
  if (steps.empty()) return start;
  const auto& last = steps.back();
  return last.action ? last.action->to : last.state;
}

TrajectoryRecord run_trajectory(const Policy& policy, const LocalSearchMdp& mdp, State start,
                                std::size_t horizon, std::uint64_t seed) {
  if (!mdp.contains(start)) throw InvalidArgument("start state out of range");
  Rng rng(seed);
  TrajectoryRecord record;
  record.seed = seed;
  record.start = start;
  double best = mdp.value(start);
  record.best_so_far.emplace_back(0, best);
  State current = start;
  for (std::size_t k = 0; k < horizon; ++k) {
    const auto t = static_cast<TimeIndex>(k);
    if (is_terminal(policy, mdp, current, t)) {
      record.terminated_at = t;
      break;
    }
    const auto result = step(policy, mdp, current, t, rng);
    TrajectoryStep s{t, current, result.taken, result.reward, std::nullopt};
    if (result.taken) s.sigma = sigma(mdp, *result.taken);
    record.steps.push_back(s);
    current = result.next;
    best = std::max(best, mdp.value(current));
    record.best_so_far.emplace_back(t + 1, best);
  }
  return record;
}

Quantiles quantiles(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return sorted_quantiles(values);
}

std::vector<BucketRatio> empirical_delta(std::span<const TrajectoryRecord> records,
                                         std::size_t bucket_width) {
  if (bucket_width == 0) throw InvalidArgument("bucket width must be >= 1");
  std::size_t buckets = 0;
  for (const auto& record : records) {
    if (!record.steps.empty()) {
      buckets = std::max(buckets, static_cast<std::size_t>(record.steps.back().t) / bucket_width + 1);
    }
  }
  return count_buckets(records, bucket_width, buckets);
}

RunSummary summarize(std::span<const TrajectoryRecord> records, const LocalSearchMdp& mdp,
                     std::size_t horizon, std::size_t bucket_width) {
  if (bucket_width == 0) throw InvalidArgument("bucket width must be >= 1");
  RunSummary s;
  s.num_trajectories = records.size();
  s.horizon = horizon;
  s.bucket_width = bucket_width;
  s.buckets = count_buckets(records, bucket_width, (horizon + bucket_width - 1) / bucket_width);
  if (records.empty()) return s;

  std::vector<double> finals;
  std::size_t total_steps = 0;
  for (const auto& r : records) {
    finals.push_back(r.best_so_far.back().second);
    total_steps += r.steps.size();
  }
  std::sort(finals.begin(), finals.end());
  s.best_mean = sorted_mean(finals);
  s.best = sorted_quantiles(finals);
  s.mean_steps = static_cast<double>(total_steps) / static_cast<double>(records.size());

  if (const auto optimum = mdp.objective().known_optimum()) {
    std::size_t hits = 0;
    for (double f : finals) hits += f >= *optimum - 1e-9;
    s.hit_rate = static_cast<double>(hits) / static_cast<double>(records.size());
  }

  std::vector<double> column(records.size());
  for (std::size_t t = 0; t <= horizon; ++t) {
    for (std::size_t k = 0; k < records.size(); ++k) {
      const auto& curve = records[k].best_so_far;
      column[k] = curve[std::min(t, curve.size() - 1)].second;
    }
    std::sort(column.begin(), column.end());
    s.best_curve.push_back({static_cast<TimeIndex>(t), sorted_mean(column), sorted_quantiles(column)});
  }
  return s;
}

BatchResult run_batch(const Policy& policy, const LocalSearchMdp& mdp, const StartRule& start,
                      const BatchOptions& options) {
  if (start.fixed && !mdp.contains(*start.fixed)) throw InvalidArgument("start state out of range");
  std::vector<TrajectoryRecord> records(options.num_trajectories);
  detail::parallel_for(options.num_trajectories, options.threads, [&](std::size_t k) {
    const std::uint64_t seed = derive_seed(options.base_seed, k);
    const State s0 = start.fixed ? *start.fixed : uniform_start(mdp, seed);
    records[k] = run_trajectory(policy, mdp, s0, options.horizon, seed);
  });

  BatchResult result;
  result.summary = summarize(records, mdp, options.horizon, options.bucket_width);
  for (const auto& r : records) result.summary.seeds.push_back(r.seed);
  if (options.keep_records) result.records = std::move(records);
  return result;
}

}  // namespace lsmdp
