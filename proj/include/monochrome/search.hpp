#pragma once

// Avoidance search: is there an r-coloring of a window with no monochromatic
// instance of {xy} ∪ {x + f(y) : f ∈ F}? Backtracking with propagation, a
// DIMACS encoding of the same question, and least-N ("Moreira number") search
// over the integer windows {1..N}.

#include "cnf.hpp"
#include "patterns.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

namespace monochrome {

struct AvoidanceInstance {
  std::shared_ptr<const Window> window;
  Coloring::Color r;
  PolyFamily F;
  ScanConstraints constraints;
  /// Sorted window indices of each distinct candidate element set, in scan order of first occurrence.
  std::vector<std::vector<std::uint32_t>> candidates;
};

inline AvoidanceInstance build_instance(std::shared_ptr<const Window> window, Coloring::Color r, const PolyFamily& F,
                                        const ScanConstraints& k) {
  if (r < 1) throw std::invalid_argument("color count must be at least 1");
  AvoidanceInstance inst{window, r, F, k, {}};
  std::set<std::vector<std::uint32_t>> seen;
  const Window& w = *window;
  for (std::size_t yi = 0; yi < w.size(); ++yi) {
    const Element& y = w[yi];
    if (!k.allows_y(y)) continue;
    const auto fy = detail::family_values(F, y);
    for (std::size_t xi = 0; xi < w.size(); ++xi) {
      const Element& x = w[xi];
      if (!k.allows_x(x)) continue;
      const PatternInstance pi = detail::make_instance(x, y, fy);
      if (k.forbid_degenerate && pi.degenerate()) continue;
      std::vector<std::uint32_t> idx;
      bool inside = true;
      for (const auto& e : pi.elements) {
        const auto p = w.index_of(e);
        if (!p) { inside = false; break; }
        idx.push_back(static_cast<std::uint32_t>(*p));
      }
      if (!inside) continue;
      std::sort(idx.begin(), idx.end());
      if (seen.insert(idx).second) inst.candidates.push_back(std::move(idx));
    }
  }
  return inst;
}

/// True iff no candidate is monochromatic under `colors` (indexed by window position).
inline bool avoids_all(const AvoidanceInstance& inst, const std::vector<Coloring::Color>& colors) {
  for (const auto& cand : inst.candidates) {
    const auto c0 = colors[cand[0]];
    if (std::all_of(cand.begin(), cand.end(), [&](std::uint32_t p) { return colors[p] == c0; })) return false;
  }
  return true;
}

struct SearchStats {
  std::uint64_t nodes = 0;       // color decisions tried
  std::uint64_t backtracks = 0;  // refuted decisions
};

struct AvoidanceResult {
  enum class Status { AvoidanceFound, Forced, Timeout };
  Status status;
  std::optional<Coloring> coloring;  // AvoidanceFound only
  SearchStats stats;
};

inline const char* to_string(AvoidanceResult::Status s) {
  switch (s) {
    case AvoidanceResult::Status::AvoidanceFound: return "avoidance_found";
    case AvoidanceResult::Status::Forced: return "forced";
    case AvoidanceResult::Status::Timeout: return "timeout";
  }
  return "?";
}

namespace detail {

class AvoidanceSolver {
 public:
  AvoidanceSolver(const AvoidanceInstance& inst, std::uint64_t budget, std::atomic<std::uint64_t>* shared_nodes)
      : inst_(inst), budget_(budget), shared_nodes_(shared_nodes) {
    if (inst.r > 64) throw std::invalid_argument("avoidance search supports at most 64 colors");
    const std::size_t n = inst.window->size();
    occurs_.resize(n);
    for (std::size_t c = 0; c < inst.candidates.size(); ++c)
      for (auto p : inst.candidates[c]) occurs_[p].push_back(static_cast<std::uint32_t>(c));
    // Most-constrained first: descending membership count, ties by index.
    for (std::uint32_t e = 0; e < n; ++e)
      if (!occurs_[e].empty()) order_.push_back(e);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return occurs_[a].size() > occurs_[b].size(); });
    color_.assign(n, 0);
    const std::uint64_t full = inst.r == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << inst.r) - 1;
    domain_.assign(n, full);
  }

  const std::vector<std::uint32_t>& order() const { return order_; }

  /// Restricts the first variable in the order to one color before solving.
  void pin_first(Coloring::Color c) { pinned_ = c; }

  AvoidanceResult::Status run() {
    const auto s = dfs(0);
    return s;
  }

  std::vector<Coloring::Color> colors() const {
    std::vector<Coloring::Color> out(color_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = color_[k] ? color_[k] : 1;
    return out;
  }

  SearchStats stats;

 private:
  using Status = AvoidanceResult::Status;

  bool take_node() {
    if (shared_nodes_) {
      if (shared_nodes_->fetch_add(1) >= budget_) return false;
    } else if (stats.nodes >= budget_) {
      return false;
    }
    ++stats.nodes;
    return true;
  }

  // Assigns e := c and propagates. Changes are recorded in the trails so the
  // caller can undo them with `undo_to`.
  bool assign(std::uint32_t e, Coloring::Color c) {
    std::vector<std::pair<std::uint32_t, Coloring::Color>> queue{{e, c}};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const auto [v, col] = queue[qi];
      if (color_[v] == col) continue;
      if (color_[v] != 0 || !(domain_[v] >> (col - 1) & 1)) return false;
      color_[v] = col;
      assigned_.push_back(v);
      for (auto ci : occurs_[v]) {
        const auto& cand = inst_.candidates[ci];
        std::uint32_t open = 0, last = 0;
        bool mono = true;
        for (auto p : cand) {
          if (color_[p] == 0) { ++open; last = p; }
          else if (color_[p] != col) { mono = false; break; }
        }
        if (!mono) continue;
        if (open == 0) return false;
        if (open == 1) {
          const std::uint64_t bit = std::uint64_t(1) << (col - 1);
          if (domain_[last] & bit) {
            domain_trail_.emplace_back(last, domain_[last]);
            domain_[last] &= ~bit;
            if (domain_[last] == 0) return false;
            if ((domain_[last] & (domain_[last] - 1)) == 0)
              queue.emplace_back(last, static_cast<Coloring::Color>(__builtin_ctzll(domain_[last]) + 1));
          }
        }
      }
    }
    return true;
  }

  void undo_to(std::size_t assigned_mark, std::size_t domain_mark) {
    while (assigned_.size() > assigned_mark) {
      color_[assigned_.back()] = 0;
      assigned_.pop_back();
    }
    while (domain_trail_.size() > domain_mark) {
      domain_[domain_trail_.back().first] = domain_trail_.back().second;
      domain_trail_.pop_back();
    }
  }

  Status dfs(std::size_t depth) {
    while (depth < order_.size() && color_[order_[depth]] != 0) ++depth;
    if (depth == order_.size()) return Status::AvoidanceFound;
    const std::uint32_t e = order_[depth];
    bool timed_out = false;
    for (Coloring::Color c = 1; c <= inst_.r; ++c) {
      if (!(domain_[e] >> (c - 1) & 1)) continue;
      if (depth == 0 && pinned_ && c != pinned_) continue;
      if (!take_node()) return Status::Timeout;
      const std::size_t am = assigned_.size(), dm = domain_trail_.size();
      if (assign(e, c)) {
        const Status s = dfs(depth + 1);
        if (s == Status::AvoidanceFound) return s;
        if (s == Status::Timeout) timed_out = true;
      }
      undo_to(am, dm);
      if (timed_out) return Status::Timeout;
      ++stats.backtracks;
    }
    return Status::Forced;
  }

  const AvoidanceInstance& inst_;
  std::uint64_t budget_;
  std::atomic<std::uint64_t>* shared_nodes_;
  std::vector<std::vector<std::uint32_t>> occurs_;
  std::vector<std::uint32_t> order_;
  std::vector<Coloring::Color> color_;
  std::vector<std::uint64_t> domain_;
  std::vector<std::uint32_t> assigned_;
  std::vector<std::pair<std::uint32_t, std::uint64_t>> domain_trail_;
  Coloring::Color pinned_ = 0;
};

}  // namespace detail

/// Colors elements in descending candidate-membership order, lowest color
/// first. Assigning color c to an element forbids c on the last open element of
/// any candidate whose other elements are all c; an emptied domain backtracks.
/// Elements in no candidate get color 1. `budget` caps the number of color
/// decisions. With jobs > 1 the first variable's colors are searched in
/// parallel and the lowest successful color wins.
inline AvoidanceResult avoidance_backtrack(const AvoidanceInstance& inst, std::uint64_t budget, unsigned jobs = 1) {
  using Status = AvoidanceResult::Status;
  auto finish = [&](Status s, detail::AvoidanceSolver& solver) {
    AvoidanceResult res{s, std::nullopt, solver.stats};
    if (s == Status::AvoidanceFound) {
      auto colors = solver.colors();
      if (!avoids_all(inst, colors)) throw std::logic_error("backtracker produced an invalid coloring");
      res.coloring = Coloring(inst.window, inst.r, std::move(colors));
    }
    return res;
  };

  detail::AvoidanceSolver probe(inst, budget, nullptr);
  if (jobs <= 1 || inst.r < 2 || probe.order().empty()) return finish(probe.run(), probe);

  std::atomic<std::uint64_t> nodes{0};
  std::vector<std::unique_ptr<detail::AvoidanceSolver>> solvers;
  std::vector<Status> status(inst.r, Status::Forced);
  for (Coloring::Color c = 1; c <= inst.r; ++c) {
    solvers.push_back(std::make_unique<detail::AvoidanceSolver>(inst, budget, &nodes));
    solvers.back()->pin_first(c);
  }
  for (Coloring::Color base = 0; base < inst.r; base += jobs) {
    std::vector<std::thread> workers;
    for (Coloring::Color c = base; c < std::min<Coloring::Color>(inst.r, base + jobs); ++c)
      workers.emplace_back([&, c] { status[c] = solvers[c]->run(); });
    for (auto& w : workers) w.join();
  }
  SearchStats total;
  for (auto& s : solvers) {
    total.nodes += s->stats.nodes;
    total.backtracks += s->stats.backtracks;
  }
  for (Coloring::Color c = 0; c < inst.r; ++c)
    if (status[c] == Status::AvoidanceFound) {
      auto res = finish(Status::AvoidanceFound, *solvers[c]);
      res.stats = total;
      return res;
    }
  const bool timeout = std::find(status.begin(), status.end(), Status::Timeout) != status.end();
  return {timeout ? Status::Timeout : Status::Forced, std::nullopt, total};
}

/// var(e, c) = index(e)·r + c + 1 for 0-based index and c ∈ 0..r−1.
inline int cnf_var(std::size_t index, Coloring::Color c0, Coloring::Color r) {
  return static_cast<int>(index * r + c0 + 1);
}

/// At-least-one color per element, pairwise at-most-one, and one clause
/// ⋁_{p∈P} ¬var(p,c) per candidate P and color c, in that order. The comment
/// lines `map <element> <index>` record the variable layout.
inline Cnf cnf_export(const AvoidanceInstance& inst) {
  const std::size_t n = inst.window->size();
  const auto r = inst.r;
  Cnf cnf;
  cnf.num_vars = static_cast<int>(n * r);
  cnf.comments.reserve(n);
  for (std::size_t e = 0; e < n; ++e) cnf.comments.push_back("map " + (*inst.window)[e].to_string() + " " + std::to_string(e));
  for (std::size_t e = 0; e < n; ++e) {
    std::vector<int> alo;
    for (Coloring::Color c = 0; c < r; ++c) alo.push_back(cnf_var(e, c, r));
    cnf.clauses.push_back(std::move(alo));
  }
  for (std::size_t e = 0; e < n; ++e)
    for (Coloring::Color a = 0; a < r; ++a)
      for (Coloring::Color b = a + 1; b < r; ++b) cnf.clauses.push_back({-cnf_var(e, a, r), -cnf_var(e, b, r)});
  for (const auto& cand : inst.candidates)
    for (Coloring::Color c = 0; c < r; ++c) {
      std::vector<int> clause;
      for (auto p : cand) clause.push_back(-cnf_var(p, c, r));
      cnf.clauses.push_back(std::move(clause));
    }
  return cnf;
}

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads color(e) as the unique c with var(e,c) true. Variables absent from
/// the model are false. Throws ModelError when an element has zero or several
/// colors, or when the decoded coloring has a monochromatic candidate.
inline Coloring cnf_model_decode(const std::vector<int>& model, const AvoidanceInstance& inst) {
  const std::size_t n = inst.window->size();
  const auto r = inst.r;
  std::vector<bool> truth(n * r + 1, false);
  for (int lit : model) {
    const std::size_t v = static_cast<std::size_t>(std::abs(lit));
    if (v == 0 || v > n * r) throw ModelError("model literal " + std::to_string(lit) + " outside the variable range");
    truth[v] = lit > 0;
  }
  std::vector<Coloring::Color> colors(n, 0);
  for (std::size_t e = 0; e < n; ++e)
    for (Coloring::Color c = 0; c < r; ++c)
      if (truth[cnf_var(e, c, r)]) {
        if (colors[e] != 0)
          throw ModelError("model assigns two colors to element " + (*inst.window)[e].to_string());
        colors[e] = c + 1;
      }
  for (std::size_t e = 0; e < n; ++e)
    if (colors[e] == 0) throw ModelError("model assigns no color to element " + (*inst.window)[e].to_string());
  if (!avoids_all(inst, colors)) throw ModelError("decoded coloring has a monochromatic candidate");
  return Coloring(inst.window, r, std::move(colors));
}

/// Unit clauses fixing each element to its color under `c`.
inline std::vector<std::vector<int>> coloring_unit_clauses(const Coloring& c) {
  std::vector<std::vector<int>> out;
  for (std::size_t e = 0; e < c.colors().size(); ++e) out.push_back({cnf_var(e, c.at(e) - 1, c.colors_count())});
  return out;
}

struct MoreiraProbe {
  std::uint64_t N;
  AvoidanceResult::Status status;
  std::size_t candidates;
  SearchStats stats;
};

struct MoreiraResult {
  enum class Status { Found, NotFoundWithin, Inconclusive };
  Status status;
  std::uint64_t N;  // least N when Found; maxN when NotFoundWithin; the timed-out N when Inconclusive
  std::vector<MoreiraProbe> probes;  // in the order run
  /// Reference-DPLL verdicts on the exported CNF: unsatisfiable at N and satisfiable at N−1.
  std::optional<bool> dpll_agrees;
};

inline const char* to_string(MoreiraResult::Status s) {
  switch (s) {
    case MoreiraResult::Status::Found: return "found";
    case MoreiraResult::Status::NotFoundWithin: return "not_found_within";
    case MoreiraResult::Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// Least N <= maxN such that every r-coloring of {1..N} has a monochromatic
/// instance. Probes N = 1, 2, 4, ... (capped at maxN) until the first Forced,
/// then binary-searches the gap, relying on Forced at N ⇒ Forced at N+1.
inline MoreiraResult moreira_number(Coloring::Color r, const PolyFamily& F, std::uint64_t maxN, std::uint64_t budget,
                                    bool cross_check = true, unsigned jobs = 1) {
  if (maxN < 1) throw std::invalid_argument("maxN must be at least 1");
  const RingSpec Z = RingSpec::integers();
  for (const auto& f : F.polys())
    for (const auto& [deg, coef] : f.terms())
      if (!(coef.ring() == Z)) throw std::invalid_argument("least-N search is defined over Z only");
  const ScanConstraints k = ScanConstraints::defaults(Z);
  MoreiraResult res{MoreiraResult::Status::NotFoundWithin, maxN, {}, std::nullopt};

  auto instance_at = [&](std::uint64_t N) {
    return build_instance(std::make_shared<const Window>(Z, WindowParams::count(N)), r, F, k);
  };
  // Returns true when Forced; records an Inconclusive result on timeout.
  auto probe = [&](std::uint64_t N) -> std::optional<bool> {
    const auto inst = instance_at(N);
    const auto out = avoidance_backtrack(inst, budget, jobs);
    res.probes.push_back({N, out.status, inst.candidates.size(), out.stats});
    if (out.status == AvoidanceResult::Status::Timeout) return std::nullopt;
    return out.status == AvoidanceResult::Status::Forced;
  };

  std::uint64_t lo = 0, hi = 0;  // lo: largest known avoidable N; hi: smallest known forced N
  for (std::uint64_t N = 1;; N = std::min(maxN, N * 2)) {
    const auto forced = probe(N);
    if (!forced) {
      res.status = MoreiraResult::Status::Inconclusive;
      res.N = N;
      return res;
    }
    if (*forced) { hi = N; break; }
    lo = N;
    if (N == maxN) return res;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    const auto forced = probe(mid);
    if (!forced) {
      res.status = MoreiraResult::Status::Inconclusive;
      res.N = mid;
      return res;
    }
    (*forced ? hi : lo) = mid;
  }
  res.status = MoreiraResult::Status::Found;
  res.N = hi;
  if (cross_check) {
    const bool unsat_at_n = !dpll_solve(cnf_export(instance_at(hi))).has_value();
    const bool sat_below = hi == 1 || dpll_solve(cnf_export(instance_at(hi - 1))).has_value();
    res.dpll_agrees = unsat_at_n && sat_below;
  }
  return res;
}

}  // namespace monochrome
