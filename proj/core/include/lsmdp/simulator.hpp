#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lsmdp/coefficients.hpp"
#include "lsmdp/policies.hpp"
#include "lsmdp/search_space.hpp"

namespace lsmdp {

struct TrajectoryStep {
  TimeIndex t = 0;
  State state = 0;              ///< state at time t, before the step
  std::optional<Move> action;   ///< empty when the policy stayed
  double reward = 0.0;          ///< f(state_{t+1}) - f(state_t)
  std::optional<Sigma> sigma;   ///< present iff a move was taken
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  State start = 0;
  std::vector<TrajectoryStep> steps;
  /// (t, best f so far) for t = 0 .. steps.size().
  std::vector<std::pair<TimeIndex, double>> best_so_far;
  std::optional<TimeIndex> terminated_at;

  State final_state() const;
};

/// Runs up to `horizon` steps, stopping early when the policy reaches a
/// terminal state.
TrajectoryRecord run_trajectory(const Policy& policy, const LocalSearchMdp& mdp, State start,
                                std::size_t horizon, std::uint64_t seed);

/// Fixed start state, or a uniformly random one drawn from each
/// trajectory's own generator.
struct StartRule {
  std::optional<State> fixed;

  static StartRule at(State s) { return {s}; }
  static StartRule uniform() { return {}; }
};

struct BatchOptions {
  std::size_t horizon = 1000;
  std::size_t num_trajectories = 100;
  std::uint64_t base_seed = 0;
  std::size_t bucket_width = 10;
  bool keep_records = false;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct Quantiles {
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;
};

/// Linear-interpolation quantiles of an unsorted sample.
Quantiles quantiles(std::vector<double> values);

struct BucketRatio {
  TimeIndex start = 0;
  std::uint64_t exploration = 0;
  std::uint64_t exploitation = 0;
  std::uint64_t stays = 0;
  /// exploration / exploitation, extended-real conventions.
  double ratio = 0.0;
  /// exploration / (exploration + exploitation); 0 without moves.
  double exploration_fraction = 0.0;
};

/// Bucketed counts of exploration and exploitation moves: bucket b covers
/// t in [b * width, (b + 1) * width).
std::vector<BucketRatio> empirical_delta(std::span<const TrajectoryRecord> records,
                                         std::size_t bucket_width);

struct CurvePoint {
  TimeIndex t = 0;
  double mean = 0.0;
  Quantiles q;
};

struct RunSummary {
  std::size_t num_trajectories = 0;
  std::size_t horizon = 0;
  std::size_t bucket_width = 0;
  /// Fraction reaching the known optimum; empty without trajectories or
  /// without a known optimum.
  std::optional<double> hit_rate;
  double best_mean = 0.0;
  Quantiles best;
  double mean_steps = 0.0;
  std::vector<BucketRatio> buckets;
  std::vector<CurvePoint> best_curve;
  std::vector<std::uint64_t> seeds;
};

/// Aggregates records. The result is independent of record order.
RunSummary summarize(std::span<const TrajectoryRecord> records, const LocalSearchMdp& mdp,
                     std::size_t horizon, std::size_t bucket_width);

struct BatchResult {
  RunSummary summary;
  std::vector<TrajectoryRecord> records;  ///< filled when keep_records
};

/// Trajectory k uses seed derive_seed(base_seed, k). Trajectories run in
/// parallel; the reduction does not depend on completion order.
BatchResult run_batch(const Policy& policy, const LocalSearchMdp& mdp, const StartRule& start,
                      const BatchOptions& options);

nlohmann::json to_json(const TrajectoryRecord& record, int n);
nlohmann::json to_json(const RunSummary& summary);
/// One line per trajectory.
void write_jsonl(std::ostream& out, std::span<const TrajectoryRecord> records, int n);
/// Single-row summary table.
void write_summary_csv_header(std::ostream& out);
void write_summary_csv_row(std::ostream& out, const std::string& policy, const RunSummary& s);
/// t,mean,min,q25,median,q75,max (prefixed by a policy column when one is
/// given).
void write_best_curve_csv(std::ostream& out, const RunSummary& s,
                          const std::string& policy_column = {}, bool header = true);
/// bucket_start,exploration,exploitation,stays,exploration_fraction,delta
void write_bucket_csv(std::ostream& out, const RunSummary& s,
                      const std::string& policy_column = {}, bool header = true);

}  // namespace lsmdp
