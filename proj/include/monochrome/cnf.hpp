#pragma once

// DIMACS CNF documents, model parsing, and a small reference DPLL solver used
// to cross-check the avoidance backtracker.

#include "ring.hpp"

#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace monochrome {

struct Cnf {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  std::vector<std::string> comments;  // without the leading "c "

  friend bool operator==(const Cnf&, const Cnf&) = default;
};

/// Comments first, then `p cnf <vars> <clauses>`, then one 0-terminated clause per line.
inline std::string format_dimacs(const Cnf& cnf) {
  std::string out;
  for (const auto& c : cnf.comments) out += "c " + c + "\n";
  out += "p cnf " + std::to_string(cnf.num_vars) + " " + std::to_string(cnf.clauses.size()) + "\n";
  for (const auto& clause : cnf.clauses) {
    for (int lit : clause) out += std::to_string(lit) + " ";
    out += "0\n";
  }
  return out;
}

inline Cnf parse_dimacs(std::string_view text) {
  Cnf cnf;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_header = false;
  std::size_t declared = 0;
  std::vector<int> current;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    if (t[0] == 'c') {
      cnf.comments.push_back(t.size() > 2 ? t.substr(2) : "");
      continue;
    }
    if (t[0] == 'p') {
      std::istringstream h(t);
      std::string p, kind;
      long vars = -1, clauses = -1;
      if (!(h >> p >> kind >> vars >> clauses) || kind != "cnf" || vars < 0 || clauses < 0)
        throw ParseError("bad DIMACS header '" + t + "'");
      cnf.num_vars = static_cast<int>(vars);
      declared = static_cast<std::size_t>(clauses);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("DIMACS clause before header");
    std::istringstream ls(t);
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      const long lit = std::strtol(tok.c_str(), &end, 10);
      if (*end != '\0') throw ParseError("bad DIMACS literal '" + tok + "'");
      if (lit == 0) {
        cnf.clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (std::labs(lit) > cnf.num_vars) throw ParseError("DIMACS literal " + tok + " exceeds the declared variables");
        current.push_back(static_cast<int>(lit));
      }
    }
  }
  if (!have_header) throw ParseError("missing DIMACS header");
  if (!current.empty()) throw ParseError("unterminated DIMACS clause");
  if (cnf.clauses.size() != declared)
    throw ParseError("DIMACS header declares " + std::to_string(declared) + " clauses, found " +
                     std::to_string(cnf.clauses.size()));
  return cnf;
}

/// Accepts solver output with `v` lines (other lines ignored), or bare
/// literals one per line. A terminating 0 is dropped.
inline std::vector<int> parse_model(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<int> lits;
  std::vector<std::string> lines;
  bool has_v = false;
  while (std::getline(in, line)) {
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    if (t[0] == 'v') has_v = true;
    lines.push_back(t);
  }
  for (const auto& t : lines) {
    std::string body = t;
    if (has_v) {
      if (t[0] != 'v') continue;
      body = t.substr(1);
    } else if (t[0] == 's' || t[0] == 'c') {
      continue;
    }
    std::istringstream ls(body);
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      const long lit = std::strtol(tok.c_str(), &end, 10);
      if (*end != '\0') throw ParseError("bad model literal '" + tok + "'");
      if (lit != 0) lits.push_back(static_cast<int>(lit));
    }
  }
  return lits;
}

/// Plain DPLL: unit propagation to a fixpoint, then branch on the lowest
/// unassigned variable, true first. Returns a total model (one signed literal
/// per variable) or nullopt when unsatisfiable. Meant for desk-scale instances.
class ReferenceDpll {
 public:
  explicit ReferenceDpll(const Cnf& cnf) : cnf_(cnf), value_(cnf.num_vars + 1, 0) {}

  std::optional<std::vector<int>> solve() {
    if (!search()) return std::nullopt;
    std::vector<int> model;
    for (int v = 1; v <= cnf_.num_vars; ++v) model.push_back(value_[v] >= 0 ? v : -v);
    return model;
  }

  std::size_t decisions() const { return decisions_; }

 private:
  int lit_value(int lit) const {
    const int v = value_[std::abs(lit)];
    return lit > 0 ? v : -v;
  }

  // false on conflict; assigned variables are appended to `trail`.
  bool propagate(std::vector<int>& trail) {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& clause : cnf_.clauses) {
        int unassigned = 0, last = 0;
        bool sat = false;
        for (int lit : clause) {
          const int v = lit_value(lit);
          if (v > 0) { sat = true; break; }
          if (v == 0) { ++unassigned; last = lit; }
        }
        if (sat) continue;
        if (unassigned == 0) return false;
        if (unassigned == 1) {
          value_[std::abs(last)] = last > 0 ? 1 : -1;
          trail.push_back(std::abs(last));
          changed = true;
        }
      }
    }
    return true;
  }

  bool search() {
    std::vector<int> trail;
    if (!propagate(trail)) {
      for (int v : trail) value_[v] = 0;
      return false;
    }
    int branch = 0;
    for (int v = 1; v <= cnf_.num_vars; ++v)
      if (value_[v] == 0) { branch = v; break; }
    if (branch == 0) return true;
    for (int polarity : {1, -1}) {
      ++decisions_;
      value_[branch] = polarity;
      if (search()) return true;
      value_[branch] = 0;
    }
    for (int v : trail) value_[v] = 0;
    return false;
  }

  const Cnf& cnf_;
  std::vector<int> value_;  // +1 true, -1 false, 0 unassigned
  std::size_t decisions_ = 0;
};

inline std::optional<std::vector<int>> dpll_solve(const Cnf& cnf) { return ReferenceDpll(cnf).solve(); }

/// True iff every clause has a literal made true by `model` (missing variables count as false).
inline bool model_satisfies(const Cnf& cnf, const std::vector<int>& model) {
  std::vector<int> value(cnf.num_vars + 1, -1);
  for (int lit : model)
    if (std::abs(lit) <= cnf.num_vars) value[std::abs(lit)] = lit > 0 ? 1 : -1;
  for (const auto& clause : cnf.clauses) {
    bool sat = false;
    for (int lit : clause)
      if ((lit > 0 ? value[lit] : -value[-lit]) > 0) { sat = true; break; }
    if (!sat) return false;
  }
  return true;
}

}  // namespace monochrome
