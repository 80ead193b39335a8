#include "lsmdp/objectives.hpp"

#include <bit>
#include <memory>
#include <random>

#include "lsmdp/descriptor.hpp"
#include "lsmdp/errors.hpp"

namespace lsmdp {

namespace {

void check_length(int n) {
  if (n < 1 || n > kMaxBits) {
    throw InvalidArgument("bit length n must lie in [1, " + std::to_string(kMaxBits) +
                          "], got " + std::to_string(n));
  }
}

int checked_int(std::int64_t v, const std::string& what) {
  if (v < 0 || v > 1'000'000) throw InvalidArgument(what + " out of range: " + std::to_string(v));
  return static_cast<int>(v);
}

}  // namespace

Objective::Objective(std::string name, int n, Function eval, std::optional<double> known_optimum)
    : name_(std::move(name)), n_(n), eval_(std::move(eval)), known_optimum_(known_optimum) {
  check_length(n);
  if (!eval_) throw InvalidArgument("objective '" + name_ + "' has no evaluation function");
}

Objective make_onemax(int n) {
  check_length(n);
  return Objective("onemax:n=" + std::to_string(n), n,
                   [](State x) { return static_cast<double>(std::popcount(x)); },
                   static_cast<double>(n));
}

Objective make_leading_ones(int n) {
  check_length(n);
  return Objective(
      "leadingones:n=" + std::to_string(n), n,
      [n](State x) {
        // Left-align the n bits so countl_one sees the leading character first.
        const State aligned = x << (64 - n);
        const int run = std::countl_one(aligned);
        return static_cast<double>(run > n ? n : run);
      },
      static_cast<double>(n));
}

Objective make_trap(int n, int k) {
  check_length(n);
  if (k < 1 || k > n || n % k != 0) {
    throw InvalidArgument("trap requires 1 <= k <= n with k dividing n, got n=" +
                          std::to_string(n) + ", k=" + std::to_string(k));
  }
  const State block_mask = (State{1} << k) - 1;
  return Objective(
      "trap:n=" + std::to_string(n) + ",k=" + std::to_string(k), n,
      [n, k, block_mask](State x) {
        double total = 0.0;
        for (int offset = 0; offset < n; offset += k) {
          const int u = std::popcount((x >> offset) & block_mask);
          total += u == k ? k : k - 1 - u;
        }
        return total;
      },
      static_cast<double>(n));
}

Objective make_nk_landscape(int n, int k, std::uint64_t seed) {
  check_length(n);
  if (k < 0 || k >= n || k > 16) {
    throw InvalidArgument("nk landscape requires 0 <= k < n and k <= 16, got n=" +
                          std::to_string(n) + ", k=" + std::to_string(k));
  }
  const std::size_t table_size = std::size_t{1} << (k + 1);
  auto tables = std::make_shared<std::vector<double>>(static_cast<std::size_t>(n) * table_size);
  std::mt19937_64 engine(seed);
  for (double& entry : *tables) {
    entry = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  }
  return Objective(
      "nk:n=" + std::to_string(n) + ",k=" + std::to_string(k) + ",seed=" + std::to_string(seed), n,
      [n, k, table_size, tables = std::shared_ptr<const std::vector<double>>(tables)](State x) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
          std::size_t index = 0;
          for (int m = 0; m <= k; ++m) {
            index |= static_cast<std::size_t>((x >> ((i + m) % n)) & 1U) << m;
          }
          total += (*tables)[static_cast<std::size_t>(i) * table_size + index];
        }
        return total / n;
      });
}

Objective make_constant(int n, double value) {
  check_length(n);
  std::string name = "const:n=" + std::to_string(n) + ",value=" + std::to_string(value);
  return Objective(std::move(name), n, [value](State) { return value; }, value);
}

Objective cnf_objective(const CnfInstance& instance) {
  if (instance.num_vars < 1 || instance.num_vars > kMaxBits) {
    throw InvalidArgument("MAX-SAT objective needs 1.." + std::to_string(kMaxBits) +
                          " variables, got " + std::to_string(instance.num_vars));
  }
  // A clause is satisfied iff one of its positive variables is 1 or one of
  // its negated variables is 0.
  struct ClauseMask {
    State positive = 0;
    State negative = 0;
  };
  auto masks = std::make_shared<std::vector<ClauseMask>>();
  masks->reserve(instance.clauses.size());
  for (const auto& clause : instance.clauses) {
    if (clause.empty()) throw InvalidArgument("empty clause");
    ClauseMask m;
    for (int lit : clause) {
      const int var = lit > 0 ? lit : -lit;
      if (lit == 0 || var > instance.num_vars) {
        throw InvalidArgument("literal " + std::to_string(lit) + " out of range");
      }
      (lit > 0 ? m.positive : m.negative) |= State{1} << (var - 1);
    }
    masks->push_back(m);
  }
  return Objective(
      "maxsat:vars=" + std::to_string(instance.num_vars) +
          ",clauses=" + std::to_string(instance.clauses.size()),
      instance.num_vars,
      [masks = std::shared_ptr<const std::vector<ClauseMask>>(masks)](State x) {
        std::size_t satisfied = 0;
        for (const auto& m : *masks) {
          satisfied += (x & m.positive) != 0 || (~x & m.negative) != 0;
        }
        return static_cast<double>(satisfied);
      });
}

Objective parse_objective(std::string_view text) {
  const auto d = Descriptor::parse(text);
  const auto& name = d.name();
  if (name == "onemax") {
    d.expect_only({"n"});
    return make_onemax(checked_int(d.get_int("n"), "n"));
  }
  if (name == "leadingones" || name == "leading_ones") {
    d.expect_only({"n"});
    return make_leading_ones(checked_int(d.get_int("n"), "n"));
  }
  if (name == "trap") {
    d.expect_only({"n", "k"});
    return make_trap(checked_int(d.get_int("n"), "n"), checked_int(d.get_int("k"), "k"));
  }
  if (name == "nk") {
    d.expect_only({"n", "k", "seed"});
    const auto seed = d.find_int("seed").value_or(0);
    if (seed < 0) throw InvalidArgument("nk seed must be nonnegative");
    return make_nk_landscape(checked_int(d.get_int("n"), "n"), checked_int(d.get_int("k"), "k"),
                             static_cast<std::uint64_t>(seed));
  }
  if (name == "maxsat") {
    d.expect_only({"path"});
    auto objective = cnf_objective(load_dimacs(d.get_string("path")));
    return Objective("maxsat:path=" + d.get_string("path"), objective.n(),
                     [objective](State x) { return objective(x); });
  }
  if (name == "const" || name == "zero") {
    d.expect_only({"n", "value"});
    const double value = name == "zero" ? 0.0 : d.find_double("value").value_or(0.0);
    return make_constant(checked_int(d.get_int("n"), "n"), value);
  }
  throw ParseError(0, "unknown objective '" + std::string(text) + "'");
}

}  // namespace lsmdp
