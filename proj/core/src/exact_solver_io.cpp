#include <ostream>

#include <nlohmann/json.hpp>

#include "lsmdp/exact_solver.hpp"
#include "lsmdp/format.hpp"

namespace lsmdp {

nlohmann::json to_json(const ValueVector& value) {
  nlohmann::json values = nlohmann::json::array();
  for (double v : value.values) values.push_back(json_number(v));
  return {{"method", to_string(value.method)},
          {"discount", json_number(value.discount)},
          {"residual", json_number(value.residual)},
          {"iterations", value.iterations},
          {"values", std::move(values)}};
}

nlohmann::json to_json(const GreedyPolicy& policy, int n) {
  nlohmann::json actions = nlohmann::json::array();
  for (std::size_t i = 0; i < policy.next.size(); ++i) {
    const auto& next = policy.next[i];
    actions.push_back({{"state", i},
                       {"bits", to_bits(i, n)},
                       {"action", next ? to_bits(*next, n) : std::string("stay")}});
  }
  return {{"actions", std::move(actions)}};
}

void write_greedy_csv(std::ostream& out, const GreedyPolicy& policy, int n) {
  out << "state,action\n";
  for (std::size_t i = 0; i < policy.next.size(); ++i) {
    const auto& next = policy.next[i];
    out << to_bits(i, n) << ',' << (next ? to_bits(*next, n) : std::string("stay")) << '\n';
  }
}

}  // namespace lsmdp
