#pragma once

// Words, variable words and combinatorial lines over [t]; polynomial
// Hales–Jewett spaces [q]^N × [q]^{N^2} × ... × [q]^{N^d}; and the embedding
// σ(u) = r0 + Σ_j Σ_ī u_{j,ī} y_ī of such a space into a ring.

#include "patterns.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace monochrome {

using Letter = std::uint32_t;

class Word {
 public:
  Word(Letter alphabet, std::vector<Letter> letters) : t_(alphabet), letters_(std::move(letters)) {
    if (t_ < 1) throw std::invalid_argument("alphabet must be nonempty");
    if (letters_.empty()) throw std::invalid_argument("word must be nonempty");
    for (Letter a : letters_)
      if (a < 1 || a > t_) throw std::invalid_argument("letter outside alphabet");
  }
  Letter alphabet() const { return t_; }
  const std::vector<Letter>& letters() const { return letters_; }
  friend bool operator==(const Word&, const Word&) = default;

 private:
  Letter t_;
  std::vector<Letter> letters_;
};

/// Letter 0 stands for the variable v.
class VariableWord {
 public:
  static constexpr Letter variable = 0;

  VariableWord(Letter alphabet, std::vector<Letter> letters) : t_(alphabet), letters_(std::move(letters)) {
    if (t_ < 1) throw std::invalid_argument("alphabet must be nonempty");
    bool has_v = false;
    for (Letter a : letters_) {
      if (a == variable) has_v = true;
      else if (a > t_) throw std::invalid_argument("letter outside alphabet");
    }
    if (!has_v) throw std::invalid_argument("variable word needs at least one occurrence of v");
  }

  /// "1v2" style; 'v' marks the variable.
  static VariableWord parse(Letter alphabet, std::string_view text) {
    std::vector<Letter> letters;
    for (char c : text) {
      if (c == 'v') letters.push_back(variable);
      else if (c >= '1' && c <= '9') letters.push_back(static_cast<Letter>(c - '0'));
      else throw ParseError("bad variable word '" + std::string(text) + "'");
    }
    return VariableWord(alphabet, std::move(letters));
  }

  Letter alphabet() const { return t_; }
  const std::vector<Letter>& letters() const { return letters_; }

 private:
  Letter t_;
  std::vector<Letter> letters_;
};

/// w(a): every v replaced by a.
inline Word substitute(const VariableWord& w, Letter a) {
  if (a < 1 || a > w.alphabet()) throw std::out_of_range("letter outside alphabet");
  std::vector<Letter> out = w.letters();
  for (auto& c : out)
    if (c == VariableWord::variable) c = a;
  return Word(w.alphabet(), std::move(out));
}

/// Position of a word in [t]^N, reading the first letter as the most significant base-t digit.
inline std::size_t word_index(const Word& w) {
  std::size_t idx = 0;
  for (Letter a : w.letters()) idx = idx * w.alphabet() + (a - 1);
  return idx;
}

namespace detail {

// Each line as the cell indices of w(1), ..., w(t), over all (t+1)^N - t^N variable words.
inline std::vector<std::vector<std::size_t>> all_lines(Letter t, unsigned N) {
  std::vector<std::vector<std::size_t>> lines;
  std::vector<Letter> digits(N, 0);  // 0 = v, 1..t letters
  for (;;) {
    if (std::find(digits.begin(), digits.end(), VariableWord::variable) != digits.end()) {
      const VariableWord w(t, digits);
      std::vector<std::size_t> line;
      for (Letter a = 1; a <= t; ++a) line.push_back(word_index(substitute(w, a)));
      lines.push_back(std::move(line));
    }
    std::size_t k = N;
    while (k > 0 && digits[k - 1] == t) digits[--k] = 0;
    if (k == 0) break;
    ++digits[k - 1];
  }
  return lines;
}

}  // namespace detail

struct HjSearchBudget {
  /// Cap on the estimated work t^N * r^(t^N) for any single N.
  double max_work = 1e9;
  unsigned jobs = 1;
};

struct HjResult {
  enum class Status { Found, NotFoundWithin };
  Status status;
  unsigned r, t, N;  // N is the least N when Found, otherwise maxN
  /// Coloring of [t]^M avoiding all lines, M = N-1 when Found (absent if N = 1), M = maxN otherwise.
  std::optional<std::vector<Letter>> avoiding_coloring;
  unsigned avoiding_length = 0;
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Searches for a coloring of [t]^N with no monochromatic combinatorial line.
/// Colorings are enumerated as base-r counters over the t^N cells in index
/// order; a partial assignment is cut as soon as a line whose last cell was
/// just colored is monochromatic.
inline std::optional<std::vector<Letter>> hj_avoiding_coloring(unsigned r, Letter t, unsigned N, unsigned jobs = 1) {
  const auto lines = detail::all_lines(t, N);
  std::size_t cells = 1;
  for (unsigned k = 0; k < N; ++k) cells *= t;
  std::vector<std::vector<std::size_t>> closing(cells);  // lines whose largest cell is the key
  for (std::size_t l = 0; l < lines.size(); ++l)
    closing[*std::max_element(lines[l].begin(), lines[l].end())].push_back(l);

  auto search_from = [&](std::vector<Letter> colors, std::size_t start, const std::atomic<bool>& stop)
      -> std::optional<std::vector<Letter>> {
    auto mono_closes = [&](std::size_t cell) {
      for (std::size_t l : closing[cell]) {
        const auto& line = lines[l];
        if (std::all_of(line.begin(), line.end(), [&](std::size_t c) { return colors[c] == colors[line[0]]; }))
          return true;
      }
      return false;
    };
    for (std::size_t c = 0; c < start; ++c)
      if (mono_closes(c)) return std::nullopt;
    std::size_t pos = start;
    if (pos == cells) return colors;
    colors[pos] = 0;
    for (;;) {
      if (stop.load(std::memory_order_relaxed)) return std::nullopt;
      ++colors[pos];
      if (colors[pos] > r) {
        if (pos == start) return std::nullopt;
        --pos;
        continue;
      }
      if (mono_closes(pos)) continue;
      if (++pos == cells) return colors;
      colors[pos] = 0;
    }
  };

  std::atomic<bool> stop{false};
  if (jobs <= 1 || cells < 2 || r < 2) return search_from(std::vector<Letter>(cells, 0), 0, stop);

  // Split on the first cell's color; the lowest-color branch that succeeds wins,
  // so the result matches the single-threaded enumeration order.
  std::vector<std::optional<std::vector<Letter>>> found(r);
  std::vector<std::thread> workers;
  for (unsigned c = 1; c <= r; ++c) {
    workers.emplace_back([&, c] {
      std::vector<Letter> colors(cells, 0);
      colors[0] = c;
      std::atomic<bool> never{false};
      found[c - 1] = search_from(std::move(colors), 1, never);
    });
    if (workers.size() == jobs || c == r) {
      for (auto& w : workers) w.join();
      workers.clear();
      for (unsigned k = 0; k < c; ++k)
        if (found[k]) return found[k];
    }
  }
  return std::nullopt;
}

inline double hj_work_estimate(unsigned r, Letter t, unsigned N) {
  const double cells = std::pow(double(t), double(N));
  return cells * std::pow(double(r), cells);
}

/// Least N <= maxN such that every r-coloring of [t]^N has a monochromatic line.
/// Throws BudgetExceeded when an N that must be decided exceeds the work cap.
inline HjResult hj_number_exhaustive(unsigned r, Letter t, unsigned maxN, const HjSearchBudget& budget = {}) {
  if (r < 1 || t < 1) throw std::invalid_argument("need r >= 1 and t >= 1");
  if (maxN < 1) throw std::invalid_argument("maxN must be at least 1");
  HjResult res{HjResult::Status::NotFoundWithin, r, t, maxN, std::nullopt, 0};
  for (unsigned N = 1; N <= maxN; ++N) {
    if (hj_work_estimate(r, t, N) > budget.max_work)
      throw BudgetExceeded("exhaustive search at N=" + std::to_string(N) + " exceeds the work budget");
    auto avoid = hj_avoiding_coloring(r, t, N, budget.jobs);
    if (!avoid) {
      res.status = HjResult::Status::Found;
      res.N = N;
      return res;
    }
    res.avoiding_coloring = std::move(avoid);
    res.avoiding_length = N;
  }
  return res;
}

/// Cells [N]^j are stored row-major with 1-based tuples (i_1, ..., i_j) and i_1 most significant.
inline std::size_t multi_index_offset(const std::vector<unsigned>& tuple, unsigned N) {
  std::size_t off = 0;
  for (unsigned i : tuple) {
    if (i < 1 || i > N) throw std::out_of_range("multi-index outside [N]");
    off = off * N + (i - 1);
  }
  return off;
}

inline std::vector<unsigned> multi_index_tuple(std::size_t offset, unsigned j, unsigned N) {
  std::vector<unsigned> tuple(j);
  for (unsigned k = j; k-- > 0;) {
    tuple[k] = static_cast<unsigned>(offset % N) + 1;
    offset /= N;
  }
  return tuple;
}

inline std::size_t ipow(std::size_t b, unsigned e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

/// A point of [q]^N × [q]^{N^2} × ... × [q]^{N^d}.
class PhjPoint {
 public:
  PhjPoint(unsigned d, unsigned N, Letter q, std::vector<std::vector<Letter>> arrays)
      : d_(d), N_(N), q_(q), arrays_(std::move(arrays)) {
    if (d_ < 1 || N_ < 1 || q_ < 1) throw std::invalid_argument("PHJ space needs d, N, q >= 1");
    if (arrays_.size() != d_) throw std::invalid_argument("PHJ point needs exactly d coordinate arrays");
    for (unsigned j = 1; j <= d_; ++j) {
      if (arrays_[j - 1].size() != ipow(N_, j)) throw std::invalid_argument("coordinate array has the wrong shape");
      for (Letter a : arrays_[j - 1])
        if (a < 1 || a > q_) throw std::invalid_argument("PHJ letter outside [q]");
    }
  }

  static PhjPoint constant(unsigned d, unsigned N, Letter q, Letter a) {
    std::vector<std::vector<Letter>> arrays;
    for (unsigned j = 1; j <= d; ++j) arrays.emplace_back(ipow(N, j), a);
    return PhjPoint(d, N, q, std::move(arrays));
  }

  unsigned d() const { return d_; }
  unsigned N() const { return N_; }
  Letter q() const { return q_; }
  /// A_j for j = 1..d.
  const std::vector<Letter>& array(unsigned j) const { return arrays_.at(j - 1); }
  Letter at(const std::vector<unsigned>& tuple) const {
    return arrays_.at(tuple.size() - 1)[multi_index_offset(tuple, N_)];
  }

  friend bool operator==(const PhjPoint&, const PhjPoint&) = default;

 private:
  unsigned d_, N_;
  Letter q_;
  std::vector<std::vector<Letter>> arrays_;
};

/// Nonempty γ ⊆ [N], kept sorted.
class WildcardSet {
 public:
  WildcardSet(std::vector<unsigned> members, unsigned N) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (members_.empty()) throw std::invalid_argument("wildcard set must be nonempty");
    if (members_.front() < 1 || members_.back() > N) throw std::out_of_range("wildcard set must lie in [N]");
    mask_.assign(N + 1, false);
    for (unsigned i : members_) mask_[i] = true;
  }
  const std::vector<unsigned>& members() const { return members_; }
  /// ī ∈ γ^j.
  bool contains_tuple(const std::vector<unsigned>& tuple) const {
    return std::all_of(tuple.begin(), tuple.end(), [&](unsigned i) { return i < mask_.size() && mask_[i]; });
  }
  unsigned universe() const { return static_cast<unsigned>(mask_.size() - 1); }

 private:
  std::vector<unsigned> members_;
  std::vector<bool> mask_;
};

/// a ⊕ x_1γ ⊕ x_2γ^2 ⊕ ... ⊕ x_dγ^d: coordinates in γ^j become x_j, the rest are copied.
inline PhjPoint phj_translate(const PhjPoint& a, const WildcardSet& gamma, const std::vector<Letter>& xs) {
  if (xs.size() != a.d()) throw std::invalid_argument("need one translation letter per degree");
  if (gamma.universe() != a.N()) throw std::invalid_argument("wildcard set is over a different [N]");
  for (Letter x : xs)
    if (x < 1 || x > a.q()) throw std::out_of_range("translation letter outside [q]");
  std::vector<std::vector<Letter>> arrays;
  for (unsigned j = 1; j <= a.d(); ++j) {
    std::vector<Letter> b = a.array(j);
    // Walk γ^j directly: its offsets are the j-fold products of γ's members.
    std::vector<std::size_t> offsets{0};
    for (unsigned level = 0; level < j; ++level) {
      std::vector<std::size_t> next;
      for (std::size_t off : offsets)
        for (unsigned i : gamma.members()) next.push_back(off * a.N() + (i - 1));
      offsets = std::move(next);
    }
    for (std::size_t off : offsets) b[off] = xs[j - 1];
    arrays.push_back(std::move(b));
  }
  return PhjPoint(a.d(), a.N(), a.q(), std::move(arrays));
}

/// Values y_ī for every ī ∈ [N]^j, j = 1..d, stored like PhjPoint arrays.
struct YAssignment {
  unsigned d = 0, N = 0;
  std::vector<std::vector<std::optional<Element>>> values;

  YAssignment(unsigned d_, unsigned N_) : d(d_), N(N_) {
    for (unsigned j = 1; j <= d; ++j) values.emplace_back(ipow(N, j));
  }

  /// y_{(i_1..i_j)} = y_{i_1} ⋯ y_{i_j} from base values y_1..y_N.
  static YAssignment multiplicative(const std::vector<Element>& base, unsigned d) {
    const unsigned N = static_cast<unsigned>(base.size());
    if (N == 0) throw std::invalid_argument("need at least one base value");
    YAssignment ya(d, N);
    for (unsigned i = 0; i < N; ++i) ya.values[0][i] = base[i];
    for (unsigned j = 2; j <= d; ++j)
      for (std::size_t off = 0; off < ya.values[j - 1].size(); ++off)
        ya.values[j - 1][off] = *ya.values[j - 2][off / N] * base[off % N];
    return ya;
  }

  void set(const std::vector<unsigned>& tuple, Element v) { values.at(tuple.size() - 1)[multi_index_offset(tuple, N)] = std::move(v); }

  const Element& get(unsigned j, std::size_t off) const {
    const auto& v = values.at(j - 1).at(off);
    if (!v) throw std::invalid_argument("no y value assigned to multi-index " + tuple_string(multi_index_tuple(off, j, N)));
    return *v;
  }

  const Element& base(unsigned i) const { return get(1, i - 1); }

  static std::string tuple_string(const std::vector<unsigned>& t) {
    std::string s = "(";
    for (std::size_t k = 0; k < t.size(); ++k) s += (k ? "," : "") + std::to_string(t[k]);
    return s + ")";
  }
};

/// First multi-index whose value is not the product of its base values, if any.
inline std::optional<std::vector<unsigned>> multiplicativity_violation(const YAssignment& ya) {
  for (unsigned j = 2; j <= ya.d; ++j)
    for (std::size_t off = 0; off < ya.values[j - 1].size(); ++off) {
      const auto tuple = multi_index_tuple(off, j, ya.N);
      Element prod = ya.base(tuple[0]);
      for (std::size_t k = 1; k < tuple.size(); ++k) prod *= ya.base(tuple[k]);
      if (!(ya.get(j, off) == prod)) return tuple;
    }
  return std::nullopt;
}

/// The coefficients {a_j^i : f_i ∈ F, 1 <= j <= d}, zeros for j > deg f_i
/// included, deduplicated in canonical order. Letter k names alphabet[k-1].
inline std::vector<Element> coefficient_alphabet(const PolyFamily& F, const RingSpec& ring) {
  const int d = std::max(F.max_degree(), 1);
  std::vector<Element> out;
  for (const auto& f : F.polys())
    for (int j = 1; j <= d; ++j) detail::push_unique(out, f.coefficient(j, ring));
  std::sort(out.begin(), out.end(), CanonicalLess{});
  return out;
}

/// σ(u) = r0 + Σ_{j=1}^{d} Σ_{ī∈[N]^j} alphabet[u_{j,ī}] · y_ī.
inline Element sigma_embed(const std::vector<Element>& alphabet, const YAssignment& ya, const Element& r0,
                           const PhjPoint& u) {
  if (u.d() != ya.d || u.N() != ya.N) throw std::invalid_argument("point and y assignment have different shapes");
  if (u.q() > alphabet.size()) throw std::invalid_argument("point alphabet larger than the coefficient alphabet");
  Element acc = r0;
  for (unsigned j = 1; j <= u.d(); ++j) {
    const auto& arr = u.array(j);
    for (std::size_t off = 0; off < arr.size(); ++off) {
      const Element& coef = alphabet[arr[off] - 1];
      if (coef.is_zero()) {
        (void)ya.get(j, off);  // still required to be assigned
        continue;
      }
      acc += coef * ya.get(j, off);
    }
  }
  return acc;
}

inline Element sigma_embed(const PolyFamily& F, const YAssignment& ya, const Element& r0, const PhjPoint& u) {
  return sigma_embed(coefficient_alphabet(F, r0.ring()), ya, r0, u);
}

struct SigmaLineCheck {
  ZeroConstPoly f;
  Element lhs;  // σ(u ⊕ a_1γ ⊕ ... ⊕ a_dγ^d)
  Element s;    // contribution of coordinates outside γ^j
  Element y_gamma;
  Element rhs;  // r0 + s + f(y_γ)
  bool holds;
};

struct NonMultiplicative : std::invalid_argument {
  std::vector<unsigned> tuple;
  explicit NonMultiplicative(std::vector<unsigned> t)
      : std::invalid_argument("y assignment is not multiplicative at " + YAssignment::tuple_string(t)), tuple(std::move(t)) {}
};

/// For each f_i ∈ F, evaluates both sides of
///   σ(u ⊕ a_1^i γ ⊕ ... ⊕ a_d^i γ^d) = r0 + s + f_i(y_γ)
/// with s = Σ_j Σ_{ī ∉ γ^j} u_{j,ī} y_ī and y_γ = Σ_{i∈γ} y_i.
/// The family's degree d must equal the point's depth.
inline std::vector<SigmaLineCheck> verify_sigma_line_identity(const PolyFamily& F, const YAssignment& ya,
                                                              const WildcardSet& gamma, const PhjPoint& u,
                                                              const Element& r0) {
  const RingSpec ring = r0.ring();
  const auto alphabet = coefficient_alphabet(F, ring);
  const unsigned d = static_cast<unsigned>(std::max(F.max_degree(), 1));
  if (u.d() != d) throw std::invalid_argument("point depth must equal the family's maximal degree");
  if (u.q() != alphabet.size()) throw std::invalid_argument("point alphabet must be the family's coefficient alphabet");
  if (auto bad = multiplicativity_violation(ya)) throw NonMultiplicative(*bad);

  Element s = Element::zero(ring);
  for (unsigned j = 1; j <= d; ++j) {
    const auto& arr = u.array(j);
    for (std::size_t off = 0; off < arr.size(); ++off)
      if (!gamma.contains_tuple(multi_index_tuple(off, j, u.N()))) s += alphabet[arr[off] - 1] * ya.get(j, off);
  }
  Element y_gamma = Element::zero(ring);
  for (unsigned i : gamma.members()) y_gamma += ya.base(i);

  std::vector<SigmaLineCheck> out;
  for (const auto& f : F.polys()) {
    std::vector<Letter> xs;
    for (unsigned j = 1; j <= d; ++j) {
      const Element a = f.coefficient(j, ring);
      xs.push_back(static_cast<Letter>(std::find(alphabet.begin(), alphabet.end(), a) - alphabet.begin() + 1));
    }
    Element lhs = sigma_embed(alphabet, ya, r0, phj_translate(u, gamma, xs));
    Element rhs = r0 + s + eval_poly(f, y_gamma);
    const bool holds = lhs == rhs;
    out.push_back({f, std::move(lhs), s, y_gamma, std::move(rhs), holds});
  }
  return out;
}

}  // namespace monochrome
