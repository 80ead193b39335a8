#include <cstdio>
#include <ostream>

#include <nlohmann/json.hpp>

#include "lsmdp/coefficients.hpp"
#include "lsmdp/format.hpp"

namespace lsmdp {

std::string verdict_line(const CoefficientReport& report) {
  if (report.orientation != Orientation::balanced) return to_string(report.orientation);
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "balanced (C=%.10g)", report.delta_star);
  return buffer;
}

nlohmann::json to_json(const CoefficientReport& report) {
  nlohmann::json states = nlohmann::json::array();
  for (const auto& row : report.states) {
    states.push_back({
        {"state", row.state},
        {"bits", to_bits(row.state, report.n)},
        {"improving", row.alpha_beta.beta.numerator},
        {"non_improving", row.alpha_beta.alpha.numerator},
        {"alpha", json_number(row.alpha_beta.alpha.value())},
        {"beta", json_number(row.alpha_beta.beta.value())},
        {"gamma", json_number(row.gamma)},
        {"delta", json_number(row.delta.partial_sum)},
        {"verdict", to_string(row.delta.verdict)},
        {"tail_ratio", json_number(row.delta.tail_ratio)},
        {"tail_bound", json_number(row.delta.tail_bound)},
        {"aggregated", row.aggregated},
    });
  }
  return {
      {"objective", report.objective},
      {"neighborhood", report.neighborhood},
      {"policy", report.policy},
      {"n", report.n},
      {"classification", to_string(report.orientation)},
      {"verdict", verdict_line(report)},
      {"delta_star", json_number(report.delta_star)},
      {"inconclusive", report.inconclusive},
      {"counts",
       {{"zero", report.zero_count},
        {"converged", report.converged_count},
        {"diverging", report.diverging_count},
        {"inconclusive", report.inconclusive_count},
        {"excluded", report.excluded_count}}},
      {"truncation",
       {{"horizon", report.horizon},
        {"tail_tolerance", json_number(report.options.tail_tolerance)},
        {"max_tail_ratio", json_number(report.max_tail_ratio)}}},
      {"states", std::move(states)},
  };
}

void write_csv(std::ostream& out, const CoefficientReport& report) {
  out << "state,bits,alpha,beta,gamma,delta,verdict,aggregated\n";
  for (const auto& row : report.states) {
    out << row.state << ',' << to_bits(row.state, report.n) << ','
        << format_double(row.alpha_beta.alpha.value()) << ','
        << format_double(row.alpha_beta.beta.value()) << ',' << format_double(row.gamma) << ','
        << format_double(row.delta.partial_sum) << ',' << to_string(row.delta.verdict) << ','
        << (row.aggregated ? 1 : 0) << '\n';
  }
}

}  // namespace lsmdp
