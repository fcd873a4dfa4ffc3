#pragma once

// Witness-based finite versions of syndetic, piecewise syndetic and IP
// notions. Piecewise syndeticity is never asserted outright: a PSWitness only
// certifies B + x ⊆ ⋃_{t∈G} (−t + A) for the finite data it carries.

#include "coloring.hpp"

#include <algorithm>
#include <optional>
#include <unordered_set>
#include <variant>
#include <vector>

namespace monochrome {

using ElementSet = std::unordered_set<Element>;

/// Sorted copy in canonical order, for reporting and comparisons.
inline std::vector<Element> sorted(const ElementSet& s) {
  std::vector<Element> v(s.begin(), s.end());
  std::sort(v.begin(), v.end(), CanonicalLess{});
  return v;
}

struct PSWitness {
  std::vector<Element> gaps;   // G
  std::vector<Element> block;  // B
  Element anchor;              // x

  friend bool operator==(const PSWitness&, const PSWitness&) = default;
};

/// ∀ b ∈ B ∃ t ∈ G : t + b + x ∈ A.
inline bool validate_ps_witness(const PSWitness& w, const ElementSet& A) {
  return std::all_of(w.block.begin(), w.block.end(), [&](const Element& b) {
    const Element shifted = b + w.anchor;
    return std::any_of(w.gaps.begin(), w.gaps.end(), [&](const Element& t) { return A.count(t + shifted) != 0; });
  });
}

/// nullopt when every window element w has some t ∈ G with t + w ∈ A;
/// otherwise the first violating w in window order.
inline std::optional<Element> syndetic_check(const ElementSet& A, const std::vector<Element>& G, const Window& window) {
  for (const auto& w : window.elements()) {
    const bool covered = std::any_of(G.begin(), G.end(), [&](const Element& t) { return A.count(t + w) != 0; });
    if (!covered) return w;
  }
  return std::nullopt;
}

/// Least anchor x in window order with B + x ⊆ ⋃_{t∈G}(−t + A).
inline std::optional<PSWitness> ps_witness_search(const ElementSet& A, const std::vector<Element>& G,
                                                  const std::vector<Element>& B, const Window& window) {
  for (const auto& x : window.elements()) {
    PSWitness w{G, B, x};
    if (validate_ps_witness(w, A)) return w;
  }
  return std::nullopt;
}

inline constexpr std::size_t max_generators = 24;

namespace detail {

template <typename Op>
std::vector<Element> finite_combinations(const std::vector<Element>& seq, Op op) {
  if (seq.empty()) throw std::invalid_argument("finite sums/products need a nonempty sequence");
  if (seq.size() > max_generators)
    throw std::invalid_argument("sequence length " + std::to_string(seq.size()) + " exceeds the cap of 24");
  // Subsets of the first k generators, grown one generator at a time. Only
  // distinct values are kept, which is all the set needs.
  ElementSet all;
  std::vector<Element> frontier;
  for (const auto& g : seq) {
    std::vector<Element> fresh;
    if (all.insert(g).second) fresh.push_back(g);
    for (const auto& s : frontier) {
      Element v = op(s, g);
      if (all.insert(v).second) fresh.push_back(std::move(v));
    }
    frontier.insert(frontier.end(), std::make_move_iterator(fresh.begin()), std::make_move_iterator(fresh.end()));
  }
  return sorted(all);
}

}  // namespace detail

struct FSSet {
  std::vector<Element> generators;
  std::vector<Element> sums;  // canonical order

  bool contains(const Element& e) const { return std::binary_search(sums.begin(), sums.end(), e, CanonicalLess{}); }
};

inline FSSet finite_sums(const std::vector<Element>& seq) {
  return {seq, detail::finite_combinations(seq, [](const Element& a, const Element& b) { return a + b; })};
}

inline std::vector<Element> finite_products(const std::vector<Element>& seq) {
  return detail::finite_combinations(seq, [](const Element& a, const Element& b) { return a * b; });
}

/// Searches `samples` random length-n sequences drawn from `entries` for one
/// whose finite sums all miss A. Sums are taken in the ring, so a sum outside
/// the set counts as a miss. nullopt is evidence, not proof, of IP*-ness.
inline std::optional<std::vector<Element>> ipstar_refute(const ElementSet& A, const Window& entries, std::size_t n,
                                                         std::size_t samples, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sequence length must be at least 1");
  SplitMix64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<Element> seq;
    seq.reserve(n);
    for (std::size_t k = 0; k < n; ++k) seq.push_back(entries[rng.below(entries.size())]);
    const FSSet fs = finite_sums(seq);
    if (std::none_of(fs.sums.begin(), fs.sums.end(), [&](const Element& e) { return A.count(e) != 0; })) return seq;
  }
  return std::nullopt;
}

inline ElementSet dilate(const ElementSet& A, const Element& r) {
  ElementSet out;
  for (const auto& a : A) out.insert(r * a);
  return out;
}

namespace detail {

inline std::vector<Element> scale(const std::vector<Element>& v, const Element& r) {
  std::vector<Element> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(r * e);
  return out;
}

}  // namespace detail

/// (rG, rB, rx): valid for rA whenever w is valid for A, since
/// r(t + b + x) = rt + rb + rx and multiplication by r ≠ 0 is injective.
inline PSWitness dilation_transport(const PSWitness& w, const Element& r) {
  if (r.is_zero()) throw std::invalid_argument("dilation by zero");
  return {detail::scale(w.gaps, r), detail::scale(w.block, r), r * w.anchor};
}

struct NotDivisible {
  Element value;  // first element that y fails to divide
};

/// (G/y, B/y, x/y), the inverse of dilation_transport by y. The set A itself is
/// only needed to check A ⊆ yR.
inline std::variant<PSWitness, NotDivisible> division_transport(const PSWitness& w, const Element& y,
                                                                const ElementSet* A = nullptr) {
  if (y.is_zero()) throw std::invalid_argument("division by zero");
  if (A)
    for (const auto& a : sorted(*A))
      if (!exact_divide(a, y)) return NotDivisible{a};
  PSWitness out;
  auto divide_all = [&](const std::vector<Element>& src, std::vector<Element>& dst) -> std::optional<Element> {
    for (const auto& e : src) {
      auto q = exact_divide(e, y);
      if (!q) return e;
      dst.push_back(std::move(*q));
    }
    return std::nullopt;
  };
  if (auto bad = divide_all(w.gaps, out.gaps)) return NotDivisible{*bad};
  if (auto bad = divide_all(w.block, out.block)) return NotDivisible{*bad};
  auto x = exact_divide(w.anchor, y);
  if (!x) return NotDivisible{w.anchor};
  out.anchor = std::move(*x);
  return out;
}

/// A/y for A ⊆ yR; nullopt when some element is not divisible.
inline std::optional<ElementSet> divide_set(const ElementSet& A, const Element& y) {
  ElementSet out;
  for (const auto& a : A) {
    auto q = exact_divide(a, y);
    if (!q) return std::nullopt;
    out.insert(std::move(*q));
  }
  return out;
}

/// mR ∩ window.
inline ElementSet ideal_in_window(const Element& m, const Window& window) {
  ElementSet out;
  for (const auto& e : window.elements())
    if (m.is_zero() ? e.is_zero() : exact_divide(e, m).has_value()) out.insert(e);
  return out;
}

/// Element-set literals: `{e1,e2,...}` (integer ranges `a..b` allowed inside
/// braces over Z), or a preset evaluated in `window`: `evens` (= ideal(2)),
/// `odds` (window minus evens), `all`, `ideal(m)` (= mR ∩ window).
inline ElementSet parse_element_set(std::string_view text, const Window& window) {
  const std::string s = detail::strip_spaces(text);
  const RingSpec& ring = window.spec();
  if (s == "evens") return ideal_in_window(Element::from_integer(ring, 2), window);
  if (s == "all") return ElementSet(window.elements().begin(), window.elements().end());
  if (s == "odds") {
    const ElementSet evens = ideal_in_window(Element::from_integer(ring, 2), window);
    ElementSet out;
    for (const auto& e : window.elements())
      if (!evens.count(e)) out.insert(e);
    return out;
  }
  if (s.rfind("ideal(", 0) == 0 && s.size() > 7 && s.back() == ')')
    return ideal_in_window(parse_element(ring, s.substr(6, s.size() - 7)), window);
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    throw ParseError("bad element set '" + std::string(text) + "' (expected {..}, evens, odds, all or ideal(m))");
  ElementSet out;
  const std::string body = s.substr(1, s.size() - 2);
  if (body.empty()) return out;
  std::size_t start = 0;
  while (start <= body.size()) {
    const std::size_t comma = body.find(',', start);
    const std::string item = body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto dots = item.find("..");
    if (dots != std::string::npos) {
      if (ring.kind() != RingKind::Integers) throw ParseError("ranges are only supported over Z: '" + item + "'");
      const mpz_class lo = parse_element(ring, item.substr(0, dots)).as_integer();
      const mpz_class hi = parse_element(ring, item.substr(dots + 2)).as_integer();
      if (hi - lo > mpz_class(Window::max_size)) throw ParseError("range too large: '" + item + "'");
      for (mpz_class v = lo; v <= hi; ++v) out.insert(Element::integer(v));
    } else {
      out.insert(parse_element(ring, item));
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Same syntax, as an ordered list (canonical order) for gap sets and blocks.
inline std::vector<Element> parse_element_list(std::string_view text, const Window& window) {
  return sorted(parse_element_set(text, window));
}

}  // namespace monochrome
