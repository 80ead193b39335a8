#include "cli.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lsmdp/coefficients.hpp"
#include "lsmdp/errors.hpp"
#include "lsmdp/exact_solver.hpp"
#include "lsmdp/format.hpp"
#include "lsmdp/objectives.hpp"
#include "lsmdp/policies.hpp"
#include "lsmdp/search_space.hpp"
#include "lsmdp/simulator.hpp"

#ifndef LSMDP_VERSION
#define LSMDP_VERSION "unknown"
#endif

namespace lsmdp::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kOutEnv = "LSMDP_OUT_DIR";

struct Settings {
  std::string objective;
  std::string neighborhood = "hamming:1";
  std::string out_dir = "lsmdp-out";
  std::vector<std::string> formats{"csv", "json"};
  std::vector<std::string> policies;
  std::size_t horizon = 0;
  double tail_tolerance = 1e-9;
  std::string reachable_from;
  std::string start;
  std::size_t steps = 100;
  std::uint64_t seed = 0;
  double discount = 0.9;
  double tolerance = 1e-10;
  std::size_t num_trajectories = 10;
  std::size_t bucket_width = 10;
  bool write_trajectories = false;
  unsigned threads = 0;
};

/// Ordered key/value view of a resolved configuration, rendered both as a
/// config file CLI11 reads back and as JSON.
class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  void add(const std::string& key, const std::string& value) { entries_.push_back({key, {value}, false}); }
  void add(const std::string& key, double value) { add_raw(key, format_double(value)); }
  void add(const std::string& key, std::size_t value) { add_raw(key, std::to_string(value)); }
  void add(const std::string& key, std::uint64_t value, int /*tag*/) { add_raw(key, std::to_string(value)); }
  void add(const std::string& key, bool value) { add_raw(key, value ? "true" : "false"); }
  void add(const std::string& key, const std::vector<std::string>& values) {
    entries_.push_back({key, values, true});
  }
  void seeds(std::vector<std::uint64_t> s) { seeds_ = std::move(s); }
  void outputs(std::vector<std::string> o) { outputs_ = std::move(o); }

  std::string ini() const {
    std::ostringstream out;
    out << "; lsmdp " << LSMDP_VERSION << " run manifest; reproduce with: lsmdp --config <this file>\n";
    out << '[' << command_ << "]\n";
    for (const auto& e : entries_) {
      out << e.key << '=';
      if (e.list) {
        out << '[';
        for (std::size_t k = 0; k < e.values.size(); ++k) out << (k ? ", " : "") << quote(e.values[k]);
        out << ']';
      } else if (e.raw) {
        out << e.values.front();
      } else {
        out << quote(e.values.front());
      }
      out << '\n';
    }
    return out.str();
  }

  nlohmann::json json() const {
    nlohmann::json config = nlohmann::json::object();
    for (const auto& e : entries_) {
      if (e.list) {
        config[e.key] = e.values;
      } else {
        config[e.key] = e.values.front();
      }
    }
    return {{"tool", "lsmdp"},  {"version", LSMDP_VERSION}, {"command", command_},
            {"config", config}, {"seeds", seeds_},          {"outputs", outputs_}};
  }

 private:
  struct Entry {
    std::string key;
    std::vector<std::string> values;
    bool list = false;
    bool raw = false;
  };

  void add_raw(const std::string& key, std::string value) {
    entries_.push_back({key, {std::move(value)}, false, true});
  }

  static std::string quote(const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + '"';
  }

  std::string command_;
  std::vector<Entry> entries_;
  std::vector<std::uint64_t> seeds_;
  std::vector<std::string> outputs_;
};

/// Collects output files in memory and publishes each with an atomic rename.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

  std::ostream& open(const std::string& name) {
    names_.push_back(name);
    buffers_.emplace_back();
    return buffers_.back();
  }
  const std::vector<std::string>& names() const { return names_; }

  void commit() {
    fs::create_directories(dir_);
    for (std::size_t k = 0; k < names_.size(); ++k) {
      const fs::path target = dir_ / names_[k];
      const fs::path temp = dir_ / ("." + names_[k] + ".tmp");
      {
        std::ofstream file(temp, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot write " + temp.string());
        file << buffers_[k].str();
        if (!file.flush()) throw std::runtime_error("cannot write " + temp.string());
      }
      fs::rename(temp, target);
    }
  }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
  std::deque<std::ostringstream> buffers_;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool wants(const Settings& s, const std::string& format) {
  return std::find(s.formats.begin(), s.formats.end(), format) != s.formats.end();
}

void check_formats(const Settings& s) {
  if (s.formats.empty()) throw UsageError("no output format selected");
  for (const auto& f : s.formats) {
    if (f != "csv" && f != "json") throw UsageError("unknown format '" + f + "' (expected csv or json)");
  }
}

State parse_state(const std::string& bits, int n, const std::string& what) {
  if (bits.size() != static_cast<std::size_t>(n)) {
    throw UsageError(what + " '" + bits + "' must have exactly n=" + std::to_string(n) + " bits");
  }
  return parse_bits(bits);
}

LocalSearchMdp build_mdp(const Settings& s) {
  if (s.objective.empty()) throw UsageError("--objective is required");
  return LocalSearchMdp(parse_objective(s.objective), parse_neighborhood(s.neighborhood));
}

Policy single_policy(const Settings& s) {
  if (s.policies.size() != 1) throw UsageError("exactly one --policy is required");
  return parse_policy(s.policies.front());
}

void add_common(Manifest& m, const Settings& s) {
  m.add("objective", s.objective);
  m.add("neighborhood", s.neighborhood);
}

void finish_common(Manifest& m, const Settings& s) {
  m.add("out", s.out_dir);
  m.add("format", s.formats);
}

void publish(OutputSet& files, Manifest& manifest) {
  auto names = files.names();
  names.push_back("manifest.ini");
  names.push_back("manifest.json");
  manifest.outputs(names);
  files.open("manifest.ini") << manifest.ini();
  files.open("manifest.json") << manifest.json().dump(2) << '\n';
  files.commit();
}

int cmd_classify(const Settings& s, std::ostream& out) {
  check_formats(s);
  const auto mdp = build_mdp(s);
  const auto policy = single_policy(s);
  ClassifyOptions options;
  options.series.horizon = s.horizon;
  options.series.tail_tolerance = s.tail_tolerance;
  if (!s.reachable_from.empty()) {
    options.reachable_from = parse_state(s.reachable_from, mdp.n(), "--reachable-from");
  }
  const auto report = classify(policy, mdp, options);

  OutputSet files(s.out_dir);
  if (wants(s, "json")) files.open("classify.json") << to_json(report).dump(2) << '\n';
  if (wants(s, "csv")) write_csv(files.open("classify.csv"), report);
  Manifest manifest("classify");
  add_common(manifest, s);
  manifest.add("policy", policy.descriptor());
  manifest.add("horizon", s.horizon);
  manifest.add("tail-tolerance", s.tail_tolerance);
  manifest.add("reachable-from", s.reachable_from);
  finish_common(manifest, s);
  publish(files, manifest);

  out << verdict_line(report) << '\n';
  return report.orientation == Orientation::inconclusive ? kExitInconclusive : kExitOk;
}

int cmd_gamma(const Settings& s, std::ostream& out) {
  check_formats(s);
  const auto mdp = build_mdp(s);
  const auto policy = single_policy(s);
  OutputSet files(s.out_dir);
  nlohmann::json doc = {{"objective", mdp.objective().name()},
                        {"neighborhood", mdp.criterion().descriptor()},
                        {"policy", policy.descriptor()}};

  if (mdp.n() > kMaxExactBits && s.start.empty()) {
    throw ResourceLimit("per-state gamma table is capped at n=" + std::to_string(kMaxExactBits) +
                        "; pass --start for a trajectory");
  }
  if (mdp.n() <= kMaxExactBits) {
    std::size_t local_maxima = 0;
    nlohmann::json rows = nlohmann::json::array();
    std::ostringstream csv;
    csv << "state,bits,improving,non_improving,gamma,local_max\n";
    for (State i = 0; i < mdp.num_states(); ++i) {
      const auto p = partition_moves(mdp, i);
      const double g = gamma(mdp, i);
      local_maxima += g == 0.0;
      csv << i << ',' << to_bits(i, mdp.n()) << ',' << p.improving.size() << ','
          << p.non_improving.size() << ',' << format_double(g) << ',' << (g == 0.0 ? 1 : 0) << '\n';
      rows.push_back({{"state", i}, {"gamma", json_number(g)}, {"local_max", g == 0.0}});
    }
    doc["states"] = std::move(rows);
    doc["local_maxima"] = local_maxima;
    if (wants(s, "csv")) files.open("gamma.csv") << csv.str();
    out << "local maxima: " << local_maxima << " of " << mdp.num_states() << " states\n";
  }

  if (!s.start.empty()) {
    Rng rng(s.seed);
    const auto start = parse_state(s.start, mdp.n(), "--start");
    const auto trajectory = gamma_trajectory(policy, mdp, start, s.steps, rng);
    nlohmann::json values = nlohmann::json::array();
    std::ostringstream csv;
    csv << "t,state,gamma\n";
    for (std::size_t t = 0; t < trajectory.gamma.size(); ++t) {
      csv << t << ',' << to_bits(trajectory.states[t], mdp.n()) << ','
          << format_double(trajectory.gamma[t]) << '\n';
      values.push_back(json_number(trajectory.gamma[t]));
    }
    doc["trajectory"] = {{"start", s.start},
                         {"seed", s.seed},
                         {"gamma", std::move(values)},
                         {"first_zero", trajectory.first_zero ? nlohmann::json(*trajectory.first_zero)
                                                              : nlohmann::json()}};
    if (wants(s, "csv")) files.open("gamma_trajectory.csv") << csv.str();
    if (trajectory.first_zero) {
      out << "gamma reached 0 at t=" << *trajectory.first_zero << '\n';
    } else {
      out << "gamma did not reach 0 within " << s.steps << " steps\n";
    }
  }
  if (wants(s, "json")) files.open("gamma.json") << doc.dump(2) << '\n';

  Manifest manifest("gamma");
  add_common(manifest, s);
  manifest.add("policy", policy.descriptor());
  manifest.add("start", s.start);
  manifest.add("steps", s.steps);
  manifest.add("seed", s.seed, 0);
  finish_common(manifest, s);
  manifest.seeds({s.seed});
  publish(files, manifest);
  return kExitOk;
}

int cmd_value(const Settings& s, std::ostream& out) {
  check_formats(s);
  const auto mdp = build_mdp(s);
  const auto policy = single_policy(s);
  const ValueVector evaluated =
      policy.is_stationary() ? evaluate_stationary(freeze(policy, mdp, 0), s.discount, s.tolerance)
                             : evaluate_nonstationary(policy, mdp, s.horizon, s.discount);
  const auto optimal = value_iteration(mdp, s.discount, s.tolerance);

  OutputSet files(s.out_dir);
  double max_gap = 0.0;
  std::ostringstream csv;
  csv << "state,f,v_policy,v_optimal,gap\n";
  for (State i = 0; i < mdp.num_states(); ++i) {
    const double gap = optimal.value.values[i] - evaluated.values[i];
    max_gap = std::max(max_gap, gap);
    csv << to_bits(i, mdp.n()) << ',' << format_double(mdp.value(i)) << ','
        << format_double(evaluated.values[i]) << ',' << format_double(optimal.value.values[i]) << ','
        << format_double(gap) << '\n';
  }
  if (wants(s, "csv")) {
    files.open("value.csv") << csv.str();
    write_greedy_csv(files.open("greedy_policy.csv"), optimal.policy, mdp.n());
  }
  if (wants(s, "json")) {
    const nlohmann::json doc = {{"objective", mdp.objective().name()},
                                {"neighborhood", mdp.criterion().descriptor()},
                                {"policy", policy.descriptor()},
                                {"policy_value", to_json(evaluated)},
                                {"optimal_value", to_json(optimal.value)},
                                {"greedy_policy", to_json(optimal.policy, mdp.n())}};
    files.open("value.json") << doc.dump(2) << '\n';
  }

  Manifest manifest("value");
  add_common(manifest, s);
  manifest.add("policy", policy.descriptor());
  manifest.add("discount", s.discount);
  manifest.add("horizon", s.horizon);
  manifest.add("tolerance", s.tolerance);
  finish_common(manifest, s);
  publish(files, manifest);

  out << "max optimality gap: " << format_double(max_gap) << '\n';
  return kExitOk;
}

StartRule start_rule(const Settings& s, int n) {
  if (s.start.empty() || s.start == "random") return StartRule::uniform();
  return StartRule::at(parse_state(s.start, n, "--start"));
}

BatchOptions batch_options(const Settings& s, bool keep_records) {
  BatchOptions o;
  o.horizon = s.horizon;
  o.num_trajectories = s.num_trajectories;
  o.base_seed = s.seed;
  o.bucket_width = s.bucket_width;
  o.keep_records = keep_records;
  o.threads = s.threads;
  if (o.bucket_width == 0) throw UsageError("--bucket-width must be >= 1");
  return o;
}

void add_simulation(Manifest& m, const Settings& s) {
  m.add("horizon", s.horizon);
  m.add("seeds", s.num_trajectories);
  m.add("seed", s.seed, 0);
  m.add("start", s.start);
  m.add("bucket-width", s.bucket_width);
}

std::string summary_line(const std::string& policy, const RunSummary& summary) {
  return policy + ": hit_rate=" + (summary.hit_rate ? format_double(*summary.hit_rate) : "undefined") +
         " best_mean=" + format_double(summary.best_mean) +
         " best_median=" + format_double(summary.best.median);
}

int cmd_simulate(const Settings& s, std::ostream& out) {
  check_formats(s);
  const auto mdp = build_mdp(s);
  const auto policy = single_policy(s);
  const auto result =
      run_batch(policy, mdp, start_rule(s, mdp.n()), batch_options(s, s.write_trajectories));

  OutputSet files(s.out_dir);
  if (wants(s, "json")) files.open("summary.json") << to_json(result.summary).dump(2) << '\n';
  if (wants(s, "csv")) {
    auto& csv = files.open("summary.csv");
    write_summary_csv_header(csv);
    write_summary_csv_row(csv, policy.descriptor(), result.summary);
  }
  write_best_curve_csv(files.open("plot_best.csv"), result.summary);
  write_bucket_csv(files.open("plot_exploration.csv"), result.summary);
  if (s.write_trajectories) write_jsonl(files.open("trajectories.jsonl"), result.records, mdp.n());

  Manifest manifest("simulate");
  add_common(manifest, s);
  manifest.add("policy", policy.descriptor());
  add_simulation(manifest, s);
  manifest.add("trajectories", s.write_trajectories);
  finish_common(manifest, s);
  manifest.seeds(result.summary.seeds);
  publish(files, manifest);

  out << summary_line(policy.descriptor(), result.summary) << '\n';
  return kExitOk;
}

int cmd_compare(const Settings& s, std::ostream& out) {
  check_formats(s);
  const auto mdp = build_mdp(s);
  if (s.policies.empty()) throw UsageError("compare needs at least one --policy");
  std::vector<Policy> policies;
  for (const auto& p : s.policies) policies.push_back(parse_policy(p));

  OutputSet files(s.out_dir);
  std::ostringstream csv, best, buckets;
  write_summary_csv_header(csv);
  nlohmann::json rows = nlohmann::json::array();
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> descriptors;
  for (std::size_t k = 0; k < policies.size(); ++k) {
    const auto name = policies[k].descriptor();
    descriptors.push_back(name);
    const auto result = run_batch(policies[k], mdp, start_rule(s, mdp.n()), batch_options(s, false));
    write_summary_csv_row(csv, name, result.summary);
    write_best_curve_csv(best, result.summary, name, k == 0);
    write_bucket_csv(buckets, result.summary, name, k == 0);
    auto row = to_json(result.summary);
    row["policy"] = name;
    rows.push_back(std::move(row));
    seeds = result.summary.seeds;
    out << summary_line(name, result.summary) << '\n';
  }
  if (wants(s, "csv")) files.open("compare.csv") << csv.str();
  if (wants(s, "json")) {
    files.open("compare.json") << nlohmann::json{{"objective", mdp.objective().name()},
                                                 {"policies", std::move(rows)}}
                                      .dump(2)
                               << '\n';
  }
  files.open("plot_best.csv") << best.str();
  files.open("plot_exploration.csv") << buckets.str();

  Manifest manifest("compare");
  add_common(manifest, s);
  manifest.add("policy", descriptors);
  add_simulation(manifest, s);
  finish_common(manifest, s);
  manifest.seeds(seeds);
  publish(files, manifest);
  return kExitOk;
}

void add_common_options(CLI::App& sub, Settings& s) {
  sub.add_option("--objective", s.objective,
                 "Objective descriptor: onemax:n=10, leadingones:n=8, trap:n=8,k=4, "
                 "nk:n=12,k=3,seed=7, maxsat:path=f.cnf (bit i-1 holds variable i), const:n=4,value=0");
  sub.add_option("--neighborhood", s.neighborhood, "Neighborhood descriptor, e.g. hamming:1")
      ->capture_default_str();
  sub.add_option("--out", s.out_dir, "Output directory")->envname(kOutEnv)->capture_default_str();
  sub.add_option("--format", s.formats, "Output formats (csv, json)")
      ->delimiter(',')
      ->capture_default_str();
}

void add_simulation_options(CLI::App& sub, Settings& s) {
  sub.add_option("--horizon", s.horizon, "Steps per trajectory")->capture_default_str();
  sub.add_option("--seeds", s.num_trajectories, "Number of trajectories")->capture_default_str();
  sub.add_option("--seed", s.seed, "Base seed; trajectory k uses a seed derived from it")
      ->capture_default_str();
  sub.add_option("--start", s.start, "Start bit string, or 'random' for uniform starts");
  sub.add_option("--bucket-width", s.bucket_width, "Time bucket width for exploration statistics")
      ->capture_default_str();
  sub.add_option("--threads", s.threads, "Worker threads (0 = all cores)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Markov decision process analysis of local search metaheuristics", "lsmdp"};
  app.set_config("--config", "", "Read options from a config file (e.g. a run manifest)");
  app.set_version_flag("--version", std::string(LSMDP_VERSION));
  app.require_subcommand(1);

  Settings classify_s, gamma_s, value_s, simulate_s, compare_s;
  classify_s.horizon = 200;
  value_s.horizon = 500;
  simulate_s.horizon = 1000;
  compare_s.horizon = 1000;
  gamma_s.policies = {"hc"};
  value_s.policies = {"hc"};

  auto* classify_cmd = app.add_subcommand("classify", "Classify a policy by its exploration-exploitation coefficient");
  add_common_options(*classify_cmd, classify_s);
  classify_cmd->add_option("--policy", classify_s.policies, "Policy descriptor: hc, hc:literal, sa:T0=10,rate=0.95, walk, metropolis:T=1")
      ->expected(1);
  classify_cmd->add_option("--horizon", classify_s.horizon, "Terms of the delta series")->capture_default_str();
  classify_cmd->add_option("--tail-tolerance", classify_s.tail_tolerance, "Geometric tail bound for convergence")
      ->capture_default_str();
  classify_cmd->add_option("--reachable-from", classify_s.reachable_from,
                           "Only analyze states reachable from this bit string");

  auto* gamma_cmd = app.add_subcommand("gamma", "Convergence coefficient per state and along a trajectory");
  add_common_options(*gamma_cmd, gamma_s);
  gamma_cmd->add_option("--policy", gamma_s.policies, "Policy descriptor")->expected(1)->capture_default_str();
  gamma_cmd->add_option("--start", gamma_s.start, "Start bit string of a gamma trajectory");
  gamma_cmd->add_option("--steps", gamma_s.steps, "Trajectory length")->capture_default_str();
  gamma_cmd->add_option("--seed", gamma_s.seed, "Trajectory seed")->capture_default_str();

  auto* value_cmd = app.add_subcommand("value", "Policy evaluation against value iteration");
  add_common_options(*value_cmd, value_s);
  value_cmd->add_option("--policy", value_s.policies, "Policy descriptor")->expected(1)->capture_default_str();
  value_cmd->add_option("--discount", value_s.discount, "Discount factor")->capture_default_str();
  value_cmd->add_option("--horizon", value_s.horizon, "Horizon for nonstationary policies")->capture_default_str();
  value_cmd->add_option("--tolerance", value_s.tolerance, "Solver tolerance")->capture_default_str();

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo rollouts of one policy");
  add_common_options(*simulate_cmd, simulate_s);
  simulate_cmd->add_option("--policy", simulate_s.policies, "Policy descriptor")->expected(1);
  add_simulation_options(*simulate_cmd, simulate_s);
  simulate_cmd->add_flag("--trajectories", simulate_s.write_trajectories, "Write trajectories.jsonl");

  auto* compare_cmd = app.add_subcommand("compare", "Monte Carlo rollouts of several policies");
  add_common_options(*compare_cmd, compare_s);
  compare_cmd->add_option("--policy", compare_s.policies, "Policy descriptor (repeatable)");
  add_simulation_options(*compare_cmd, compare_s);

  for (auto* sub : {classify_cmd, gamma_cmd, value_cmd, simulate_cmd, compare_cmd}) sub->configurable();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (classify_cmd->parsed()) return cmd_classify(classify_s, out);
    if (gamma_cmd->parsed()) return cmd_gamma(gamma_s, out);
    if (value_cmd->parsed()) return cmd_value(value_s, out);
    if (simulate_cmd->parsed()) return cmd_simulate(simulate_s, out);
    if (compare_cmd->parsed()) return cmd_compare(compare_s, out);
  } catch (const ResourceLimit& e) {
    err << "error: " << e.what() << '\n';
    return kExitResourceLimit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace lsmdp::cli
