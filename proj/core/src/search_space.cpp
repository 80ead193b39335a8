#include "lsmdp/search_space.hpp"

#include <algorithm>
#include <bit>

#include "lsmdp/descriptor.hpp"
#include "lsmdp/errors.hpp"

namespace lsmdp {

namespace {

constexpr int kTableBits = 16;

}  // namespace

HammingNeighborhood::HammingNeighborhood(int distance) : distance_(distance) {
  if (distance < 1) {
    throw InvalidArgument("Hamming distance must be >= 1, got " + std::to_string(distance));
  }
}

void HammingNeighborhood::validate(int n) const {
  if (distance_ > n) {
    throw InvalidArgument("Hamming distance " + std::to_string(distance_) +
                          " exceeds bit length " + std::to_string(n));
  }
}

std::vector<State> HammingNeighborhood::neighbors(State i, int n) const {
  std::vector<State> out;
  if (distance_ == 1) {
    out.reserve(static_cast<std::size_t>(n));
    for (int b = 0; b < n; ++b) out.push_back(i ^ (State{1} << b));
  } else {
    // Gosper's hack: every n-bit mask with exactly `distance_` bits set.
    const State limit = state_count(n);
    for (State mask = (State{1} << distance_) - 1; mask < limit;) {
      out.push_back(i ^ mask);
      const State lowest = mask & (~mask + 1);
      const State ripple = mask + lowest;
      mask = (((ripple ^ mask) >> 2) / lowest) | ripple;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string HammingNeighborhood::descriptor() const { return "hamming:" + std::to_string(distance_); }

std::shared_ptr<const NeighborhoodCriterion> hamming(int distance) {
  return std::make_shared<HammingNeighborhood>(distance);
}

std::shared_ptr<const NeighborhoodCriterion> parse_neighborhood(std::string_view text) {
  const auto d = Descriptor::parse(text);
  if (d.name() != "hamming") throw ParseError(0, "unknown neighborhood '" + std::string(text) + "'");
  d.expect_only({"", "d"});
  const auto distance = d.has("d") ? d.get_int("d") : d.find_int("").value_or(1);
  if (distance < 1 || distance > kMaxBits) {
    throw InvalidArgument("Hamming distance out of range in '" + std::string(text) + "'");
  }
  return hamming(static_cast<int>(distance));
}

LocalSearchMdp::LocalSearchMdp(Objective objective,
                               std::shared_ptr<const NeighborhoodCriterion> criterion)
    : objective_(std::move(objective)), criterion_(std::move(criterion)) {
  if (!criterion_) throw InvalidArgument("missing neighborhood criterion");
  criterion_->validate(n());
  if (n() <= kTableBits) {
    table_.resize(num_states());
    for (State i = 0; i < num_states(); ++i) table_[i] = objective_(i);
  }
}

void LocalSearchMdp::check_state(State i) const {
  if (!contains(i)) {
    throw InvalidArgument("state " + std::to_string(i) + " out of range for n=" +
                          std::to_string(n()));
  }
}

std::vector<State> LocalSearchMdp::neighbors(State i) const {
  check_state(i);
  return criterion_->neighbors(i, n());
}

std::vector<Move> LocalSearchMdp::actions(State i) const {
  std::vector<Move> out;
  for (State j : neighbors(i)) out.push_back({i, j});
  return out;
}

double LocalSearchMdp::action_weight(State i, Move a) const {
  const auto nbrs = neighbors(i);
  if (a.from != i || !std::binary_search(nbrs.begin(), nbrs.end(), a.to)) {
    throw InvalidArgument("move " + to_bits(a.from, n()) + "->" + to_bits(a.to, n()) +
                          " is not an action of state " + to_bits(i, n()));
  }
  return 1.0 / static_cast<double>(nbrs.size());
}

}  // namespace lsmdp
