#pragma once

// Uniqueness of finite products, and the exclusion-set extension step that
// keeps it: x breaks uniqueness for a product set B only if xα = β for some
// α, β ∈ B ∪ {1}, and in an integral domain each such pair pins x down to
// at most one value β/α.

#include "largeness.hpp"
#include "patterns.hpp"

#include <cstdint>
#include <unordered_map>
#include <variant>

namespace monochrome {

/// Index sets are bitmasks over sequence positions; bit k is position k+1.
using IndexMask = std::uint32_t;

inline std::vector<unsigned> mask_positions(IndexMask m) {
  std::vector<unsigned> out;
  for (unsigned k = 0; m; ++k, m >>= 1)
    if (m & 1) out.push_back(k + 1);
  return out;
}

/// Products Π_{t∈H} y_t for every nonempty H, indexed by mask (entry 0 is the empty product 1).
inline std::vector<Element> subset_products(const std::vector<Element>& seq) {
  if (seq.empty()) throw std::invalid_argument("sequence must be nonempty");
  if (seq.size() > max_generators) throw std::invalid_argument("sequence length exceeds the cap of 24");
  const std::size_t total = std::size_t(1) << seq.size();
  std::vector<Element> prod;
  prod.reserve(total);
  prod.push_back(Element::one(seq[0].ring()));
  for (std::size_t m = 1; m < total; ++m) {
    const unsigned low = static_cast<unsigned>(__builtin_ctzll(m));
    prod.push_back(prod[m & (m - 1)] * seq[low]);
  }
  return prod;
}

struct UfpViolation {
  std::vector<unsigned> H, K;  // 1-based positions, H before K in mask order
  Element product;
};

/// nullopt when all 2^len − 1 products over distinct nonempty index sets are
/// pairwise distinct. Otherwise the collision with the smallest K (as a
/// mask), and for that K the smallest H.
inline std::optional<UfpViolation> has_ufp(const std::vector<Element>& seq) {
  const auto prod = subset_products(seq);
  std::unordered_map<Element, IndexMask> first;
  first.reserve(prod.size());
  for (IndexMask m = 1; m < prod.size(); ++m) {
    auto [it, fresh] = first.emplace(prod[m], m);
    if (!fresh) return UfpViolation{mask_positions(it->second), mask_positions(m), prod[m]};
  }
  return std::nullopt;
}

/// First nonempty index set whose product is 0 or 1, if any.
inline std::optional<std::vector<unsigned>> product_hits_zero_or_one(const std::vector<Element>& seq) {
  const auto prod = subset_products(seq);
  for (IndexMask m = 1; m < prod.size(); ++m)
    if (prod[m].is_zero() || prod[m].is_one()) return mask_positions(m);
  return std::nullopt;
}

/// C = { β/α : α, β ∈ B ∪ {1}, α | β } \ {0, 1}, in canonical order.
inline std::vector<Element> exclusion_set(const std::vector<Element>& B, const RingSpec& ring) {
  std::vector<Element> with_one;
  with_one.reserve(B.size() + 1);
  with_one.push_back(Element::one(ring));
  for (const auto& b : B) detail::push_unique(with_one, b);
  ElementSet out;
  for (const auto& alpha : with_one) {
    if (alpha.is_zero()) continue;
    for (const auto& beta : with_one) {
      auto x = exact_divide(beta, alpha);
      if (x && !x->is_zero() && !x->is_one()) out.insert(std::move(*x));
    }
  }
  return sorted(out);
}

/// Pointwise form of membership in exclusion_set(B): ∃ α ∈ B ∪ {1} with xα ∈ B ∪ {1}.
/// `B_with_one` must already contain 1.
inline bool excluded_by(const Element& x, const std::vector<Element>& B_with_one, const ElementSet& lookup) {
  if (x.is_zero() || x.is_one()) return true;
  return std::any_of(B_with_one.begin(), B_with_one.end(), [&](const Element& a) { return lookup.count(x * a) != 0; });
}

class UfpSequence {
 public:
  /// Checks uniqueness of finite products and FP ⊆ R \ {0, 1}.
  explicit UfpSequence(std::vector<Element> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw std::invalid_argument("sequence must be nonempty");
    if (auto bad = product_hits_zero_or_one(elements_)) throw std::invalid_argument("a finite product equals 0 or 1");
    if (auto v = has_ufp(elements_))
      throw std::invalid_argument("products collide: " + v->product.to_string());
  }

  const std::vector<Element>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }

  /// FP(elements), indexed by mask; computed once.
  const std::vector<Element>& products() const {
    if (!products_) products_ = subset_products(elements_);
    return *products_;
  }

 private:
  std::vector<Element> elements_;
  mutable std::optional<std::vector<Element>> products_;
};

struct PoolExhausted {
  std::size_t step = 0;  // sequence length that could not be extended
};

/// Appends the first pool element outside exclusion_set(FP(seq)) ∪ {0, 1}.
/// The result is re-checked by the UfpSequence constructor.
inline std::variant<UfpSequence, PoolExhausted> extend_ufp(const UfpSequence& seq, const std::vector<Element>& pool) {
  const auto& prod = seq.products();  // prod[0] == 1
  const ElementSet lookup(prod.begin(), prod.end());
  for (const auto& x : pool) {
    if (excluded_by(x, prod, lookup)) continue;
    std::vector<Element> next = seq.elements();
    next.push_back(x);
    return UfpSequence(std::move(next));
  }
  return PoolExhausted{seq.size()};
}

inline constexpr std::size_t max_grow_length = 20;

/// Length-m sequence starting at `start`, each step extending over the window in canonical order.
inline std::variant<UfpSequence, PoolExhausted> grow_ufp(const Element& start, const Window& pool, std::size_t m) {
  if (start.is_zero() || start.is_one()) throw std::invalid_argument("start must not be 0 or 1");
  if (m < 1 || m > max_grow_length) throw std::invalid_argument("target length must be in 1..20");
  UfpSequence seq({start});
  while (seq.size() < m) {
    auto next = extend_ufp(seq, pool.elements());
    if (auto* ex = std::get_if<PoolExhausted>(&next)) return *ex;
    seq = std::move(std::get<UfpSequence>(next));
  }
  return seq;
}

}  // namespace monochrome
