#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "lsmdp/errors.hpp"
#include "lsmdp/objectives.hpp"

namespace lsmdp {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t begin = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > begin) tokens.push_back(line.substr(begin, i - begin));
  }
  return tokens;
}

bool parse_long(std::string_view token, long long& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc{} && ptr == token.data() + token.size();
}

}  // namespace

CnfInstance parse_dimacs(std::istream& in) {
  CnfInstance instance;
  bool have_header = false;
  long long declared_clauses = 0;
  std::vector<int> current;
  std::size_t clause_start_line = 0;
  std::size_t line_no = 0;
  std::string line;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0].front() == 'c') continue;
    if (tokens[0].front() == '%') break;
    if (tokens[0] == "p") {
      if (have_header) throw ParseError(line_no, "duplicate problem line");
      long long vars = 0;
      if (tokens.size() != 4 || tokens[1] != "cnf" || !parse_long(tokens[2], vars) ||
          !parse_long(tokens[3], declared_clauses)) {
        throw ParseError(line_no, "malformed problem line, expected 'p cnf <vars> <clauses>'");
      }
      if (vars < 1 || vars > 1'000'000) {
        throw ParseError(line_no, "variable count must be positive, got " + std::string(tokens[2]));
      }
      if (declared_clauses < 0) {
        throw ParseError(line_no, "negative clause count " + std::string(tokens[3]));
      }
      instance.num_vars = static_cast<int>(vars);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line_no, "clause data before the 'p cnf' problem line");

    for (auto token : tokens) {
      long long lit = 0;
      if (!parse_long(token, lit)) {
        throw ParseError(line_no, "not an integer literal: '" + std::string(token) + "'");
      }
      if (lit == 0) {
        if (current.empty()) throw ParseError(line_no, "empty clause");
        if (static_cast<long long>(instance.clauses.size()) >= declared_clauses) {
          throw ParseError(line_no, "more clauses than the " + std::to_string(declared_clauses) +
                                        " declared");
        }
        instance.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      const long long var = lit < 0 ? -lit : lit;
      if (var > instance.num_vars) {
        throw ParseError(line_no, "literal " + std::string(token) + " out of range [1, " +
                                      std::to_string(instance.num_vars) + "]");
      }
      if (current.empty()) clause_start_line = line_no;
      current.push_back(static_cast<int>(lit));
    }
  }

  const std::size_t last_line = std::max<std::size_t>(line_no, 1);
  if (!have_header) throw ParseError(last_line, "missing 'p cnf' problem line");
  if (!current.empty()) {
    throw ParseError(clause_start_line, "clause not terminated by 0");
  }
  if (static_cast<long long>(instance.clauses.size()) != declared_clauses) {
    throw ParseError(last_line, "expected " + std::to_string(declared_clauses) + " clauses, found " +
                                  std::to_string(instance.clauses.size()));
  }
  return instance;
}

CnfInstance parse_dimacs_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

CnfInstance load_dimacs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open DIMACS file '" + path.string() + "'");
  return parse_dimacs(in);
}

std::string write_dimacs(const CnfInstance& instance) {
  std::ostringstream out;
  out << "p cnf " << instance.num_vars << ' ' << instance.clauses.size() << '\n';
  for (const auto& clause : instance.clauses) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

}  // namespace lsmdp
