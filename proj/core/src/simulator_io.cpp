#include <ostream>

#include <nlohmann/json.hpp>

#include "lsmdp/format.hpp"
#include "lsmdp/simulator.hpp"

namespace lsmdp {

namespace {

nlohmann::json to_json(const Quantiles& q) {
  return {{"min", json_number(q.min)},
          {"q25", json_number(q.q25)},
          {"median", json_number(q.median)},
          {"q75", json_number(q.q75)},
          {"max", json_number(q.max)}};
}

void prefix(std::ostream& out, const std::string& policy_column) {
  if (!policy_column.empty()) out << csv_field(policy_column) << ',';
}

}  // namespace

nlohmann::json to_json(const TrajectoryRecord& record, int n) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : record.steps) {
    steps.push_back({{"t", s.t},
                     {"state", to_bits(s.state, n)},
                     {"action", s.action ? nlohmann::json(to_bits(s.action->to, n)) : nlohmann::json()},
                     {"reward", json_number(s.reward)},
                     {"sigma", s.sigma ? nlohmann::json(static_cast<int>(*s.sigma)) : nlohmann::json()}});
  }
  nlohmann::json best = nlohmann::json::array();
  for (const auto& [t, f] : record.best_so_far) best.push_back({t, json_number(f)});
  return {{"seed", record.seed},
          {"start", to_bits(record.start, n)},
          {"terminated_at", record.terminated_at ? nlohmann::json(*record.terminated_at) : nlohmann::json()},
          {"steps", std::move(steps)},
          {"best_so_far", std::move(best)}};
}

nlohmann::json to_json(const RunSummary& s) {
  nlohmann::json buckets = nlohmann::json::array();
  for (const auto& b : s.buckets) {
    buckets.push_back({{"start", b.start},
                       {"exploration", b.exploration},
                       {"exploitation", b.exploitation},
                       {"stays", b.stays},
                       {"exploration_fraction", json_number(b.exploration_fraction)},
                       {"delta", json_number(b.ratio)}});
  }
  return {{"num_trajectories", s.num_trajectories},
          {"horizon", s.horizon},
          {"bucket_width", s.bucket_width},
          {"hit_rate", s.hit_rate ? json_number(*s.hit_rate) : nlohmann::json()},
          {"hit_rate_defined", s.hit_rate.has_value()},
          {"best_mean", json_number(s.best_mean)},
          {"best", to_json(s.best)},
          {"mean_steps", json_number(s.mean_steps)},
          {"buckets", std::move(buckets)},
          {"seeds", s.seeds}};
}

void write_jsonl(std::ostream& out, std::span<const TrajectoryRecord> records, int n) {
  for (const auto& r : records) out << to_json(r, n).dump() << '\n';
}

void write_summary_csv_header(std::ostream& out) {
  out << "policy,num_trajectories,horizon,hit_rate,best_mean,best_min,best_q25,best_median,"
         "best_q75,best_max,mean_steps\n";
}

void write_summary_csv_row(std::ostream& out, const std::string& policy, const RunSummary& s) {
  out << csv_field(policy) << ',' << s.num_trajectories << ',' << s.horizon << ','
      << (s.hit_rate ? format_double(*s.hit_rate) : std::string()) << ','
      << format_double(s.best_mean) << ',' << format_double(s.best.min) << ','
      << format_double(s.best.q25) << ',' << format_double(s.best.median) << ','
      << format_double(s.best.q75) << ',' << format_double(s.best.max) << ','
      << format_double(s.mean_steps) << '\n';
}

void write_best_curve_csv(std::ostream& out, const RunSummary& s, const std::string& policy_column,
                          bool header) {
  if (header) {
    if (!policy_column.empty()) out << "policy,";
    out << "t,mean,min,q25,median,q75,max\n";
  }
  for (const auto& p : s.best_curve) {
    prefix(out, policy_column);
    out << p.t << ',' << format_double(p.mean) << ',' << format_double(p.q.min) << ','
        << format_double(p.q.q25) << ',' << format_double(p.q.median) << ','
        << format_double(p.q.q75) << ',' << format_double(p.q.max) << '\n';
  }
}

void write_bucket_csv(std::ostream& out, const RunSummary& s, const std::string& policy_column,
                      bool header) {
  if (header) {
    if (!policy_column.empty()) out << "policy,";
    out << "bucket_start,exploration,exploitation,stays,exploration_fraction,delta\n";
  }
  for (const auto& b : s.buckets) {
    prefix(out, policy_column);
    out << b.start << ',' << b.exploration << ',' << b.exploitation << ',' << b.stays << ','
        << format_double(b.exploration_fraction) << ',' << format_double(b.ratio) << '\n';
  }
}

}  // namespace lsmdp
