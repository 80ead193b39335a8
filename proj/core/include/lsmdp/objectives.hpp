#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsmdp/types.hpp"

namespace lsmdp {

/// A total, deterministic objective f : {0,1}^n -> R to be maximized.
///
/// Objectives are cheap to copy and immutable; the evaluation closure only
/// holds shared read-only tables, so concurrent evaluation is safe.
class Objective {
 public:
  using Function = std::function<double(State)>;

  Objective(std::string name, int n, Function eval,
            std::optional<double> known_optimum = std::nullopt);

  double operator()(State x) const { return eval_(x); }

  int n() const { return n_; }
  std::uint64_t num_states() const { return state_count(n_); }
  const std::string& name() const { return name_; }
  /// Global maximum of f when analytically known.
  std::optional<double> known_optimum() const { return known_optimum_; }

 private:
  std::string name_;
  int n_;
  Function eval_;
  std::optional<double> known_optimum_;
};

/// Number of one-bits. Requires 1 <= n <= 63.
Objective make_onemax(int n);

/// Length of the run of ones starting at the most significant bit (the
/// leftmost character of the bit string).
Objective make_leading_ones(int n);

/// Concatenated deceptive traps: the string is cut into n/k blocks of k bits;
/// a block with u ones scores k if u == k and k - 1 - u otherwise.
Objective make_trap(int n, int k);

/// NK landscape with adjacent epistasis: bit i interacts with bits
/// i+1 .. i+k (mod n). Each of the n contribution tables has 2^(k+1) entries
/// drawn uniformly from [0, 1) by a mt19937_64 seeded with `seed`; f is the
/// mean contribution. Requires 0 <= k < n and k <= 16.
Objective make_nk_landscape(int n, int k, std::uint64_t seed);

/// f(x) = value everywhere.
Objective make_constant(int n, double value);

/// A CNF formula. Literal v > 0 is variable v, -v its negation.
struct CnfInstance {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;

  friend bool operator==(const CnfInstance&, const CnfInstance&) = default;
};

/// Parses DIMACS CNF: `c` comment lines, a single `p cnf <vars> <clauses>`
/// header, then whitespace-separated literals with each clause terminated by
/// 0 (clauses may span lines). A line starting with `%` ends the clause
/// section. Errors carry the 1-based line number.
CnfInstance parse_dimacs(std::istream& in);
CnfInstance parse_dimacs_string(std::string_view text);
CnfInstance load_dimacs(const std::filesystem::path& path);

/// Canonical DIMACS text: header, then one clause per line.
std::string write_dimacs(const CnfInstance& instance);

/// Number of satisfied clauses (unweighted MAX-SAT). Bit i - 1 of the state
/// holds the truth value of variable i. Requires num_vars <= 63.
Objective cnf_objective(const CnfInstance& instance);

/// Builds an objective from a descriptor string:
///   onemax:n=10   leadingones:n=8   trap:n=8,k=4   nk:n=12,k=3,seed=7
///   maxsat:path=foo.cnf   const:n=4,value=0   zero:n=4
Objective parse_objective(std::string_view descriptor);

}  // namespace lsmdp
