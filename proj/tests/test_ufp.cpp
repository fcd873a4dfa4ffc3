#include <catch_amalgamated.hpp>

#include <monochrome/ufp.hpp>

using namespace monochrome;

namespace {

const RingSpec Z = RingSpec::integers();

Element z(long v) { return Element::integer(v); }

std::vector<Element> zs(std::initializer_list<long> vs) {
  std::vector<Element> out;
  for (long v : vs) out.push_back(z(v));
  return out;
}

/// Whether appending x to seq keeps products unique and away from 0 and 1.
bool extension_ok(std::vector<Element> seq, const Element& x) {
  seq.push_back(x);
  return !has_ufp(seq) && !product_hits_zero_or_one(seq);
}

}  // namespace

TEST_CASE("unique finite products", "[ufp]") {
  CHECK_FALSE(has_ufp(zs({2, 3})).has_value());
  CHECK_FALSE(has_ufp(zs({2, 4})).has_value());
  const auto v = has_ufp(zs({2, 3, 6}));
  REQUIRE(v.has_value());
  CHECK(v->H == std::vector<unsigned>{1, 2});
  CHECK(v->K == std::vector<unsigned>{3});
  CHECK(v->product == z(6));
  const auto dup = has_ufp(zs({5, 5}));
  REQUIRE(dup.has_value());
  CHECK(dup->H == std::vector<unsigned>{1});
  CHECK(dup->K == std::vector<unsigned>{2});

  CHECK(subset_products(zs({2, 3})) == zs({1, 2, 3, 6}));
  CHECK(product_hits_zero_or_one(zs({-1, -1})) == std::vector<unsigned>{1, 2});
  CHECK_THROWS(UfpSequence(zs({2, 3, 6})));
  CHECK_THROWS(UfpSequence(zs({2, 0})));
  CHECK_THROWS(subset_products({}));
}

TEST_CASE("exclusion sets", "[ufp]") {
  CHECK(exclusion_set(zs({2}), Z) == zs({2}));
  CHECK(exclusion_set(zs({2, 3, 6}), Z) == zs({2, 3, 6}));
  CHECK(exclusion_set({}, Z).empty());
  CHECK(exclusion_set(zs({2, 4}), Z) == zs({2, 4}));
  CHECK(exclusion_set(zs({-2, 4}), Z) == zs({-2, 4}));
}

TEST_CASE("extension step", "[ufp]") {
  const UfpSequence two(zs({2}));
  std::vector<Element> pool;
  for (long v = 1; v <= 10; ++v) pool.push_back(z(v));
  const auto next = extend_ufp(two, pool);
  REQUIRE(std::holds_alternative<UfpSequence>(next));
  CHECK(std::get<UfpSequence>(next).elements() == zs({2, 3}));

  const auto stuck = extend_ufp(two, zs({0, 1, 2}));
  REQUIRE(std::holds_alternative<PoolExhausted>(stuck));
  CHECK(std::get<PoolExhausted>(stuck).step == 1);

  const RingSpec GF2 = RingSpec::poly_over(2);
  const Window p3(GF2, WindowParams::degree(3));
  const auto gx = extend_ufp(UfpSequence({parse_element(GF2, "x")}), p3.elements());
  REQUIRE(std::holds_alternative<UfpSequence>(gx));
  CHECK(std::get<UfpSequence>(gx).elements().back() == parse_element(GF2, "x+1"));
}

TEST_CASE("greedy growth", "[ufp]") {
  const Window pool(Z, WindowParams::count(10000));
  const auto grown = grow_ufp(z(2), pool, 10);
  REQUIRE(std::holds_alternative<UfpSequence>(grown));
  CHECK(std::get<UfpSequence>(grown).elements() == zs({2, 3, 4, 5, 7, 9, 11, 13, 16, 17}));

  const auto single = grow_ufp(z(7), pool, 1);
  CHECK(std::get<UfpSequence>(single).elements() == zs({7}));

  const auto small = grow_ufp(z(2), Window(Z, WindowParams::count(4)), 5);
  REQUIRE(std::holds_alternative<PoolExhausted>(small));
  CHECK(std::get<PoolExhausted>(small).step == 3);

  CHECK_THROWS(grow_ufp(z(1), pool, 3));
  CHECK_THROWS(grow_ufp(z(0), pool, 3));
  CHECK_THROWS(grow_ufp(z(2), pool, 0));
  CHECK_THROWS(grow_ufp(z(2), pool, 21));
}

TEST_CASE("extension is sound and complete", "[ufp][property]") {
  for (const RingSpec& ring : {Z, RingSpec::gaussian(), RingSpec::poly_over(3)}) {
    const Window pool = ring.kind() == RingKind::Integers   ? Window(ring, WindowParams::count(40, true))
                        : ring.kind() == RingKind::GaussianIntegers ? Window(ring, WindowParams::box(3))
                                                            : Window(ring, WindowParams::degree(3));
    SplitMix64 rng(404 + ring.modulus());
    int trials = 0;
    while (trials < 100) {
      std::vector<Element> seq;
      const std::size_t len = 1 + rng.below(4);
      for (std::size_t k = 0; k < len; ++k) seq.push_back(pool[rng.below(pool.size())]);
      if (has_ufp(seq) || product_hits_zero_or_one(seq)) continue;
      ++trials;
      const UfpSequence s(seq);
      const auto& prod = s.products();
      const ElementSet lookup(prod.begin(), prod.end());
      const std::vector<Element> B(prod.begin() + 1, prod.end());
      const auto C = exclusion_set(B, ring);
      REQUIRE(C.size() <= (B.size() + 1) * (B.size() + 1));
      const ElementSet Cset(C.begin(), C.end());
      for (const auto& x : pool.elements()) {
        const bool excluded = excluded_by(x, prod, lookup);
        // pointwise test and symbolic set agree
        REQUIRE(excluded == (x.is_zero() || x.is_one() || Cset.count(x) != 0));
        // excluded exactly when appending x breaks the property
        REQUIRE(excluded == !extension_ok(seq, x));
      }
      const auto next = extend_ufp(s, pool.elements());
      if (const auto* ok = std::get_if<UfpSequence>(&next)) REQUIRE_FALSE(has_ufp(ok->elements()).has_value());
    }
  }
}

TEST_CASE("random growth keeps unique products", "[ufp][property]") {
  for (const RingSpec& ring : {Z, RingSpec::gaussian(), RingSpec::poly_over(2), RingSpec::poly_over(3)}) {
    const Window pool = ring.kind() == RingKind::Integers   ? Window(ring, WindowParams::count(200))
                        : ring.kind() == RingKind::GaussianIntegers ? Window(ring, WindowParams::box(4))
                                                            : Window(ring, WindowParams::degree(4));
    SplitMix64 rng(7 + ring.modulus());
    for (int trial = 0; trial < 500; ++trial) {
      const Element start = pool[rng.below(pool.size())];
      if (start.is_zero() || start.is_one()) continue;
      if (product_hits_zero_or_one({start})) continue;
      const std::size_t m = 1 + rng.below(6);
      const auto out = grow_ufp(start, pool, m);
      if (const auto* seq = std::get_if<UfpSequence>(&out)) {
        REQUIRE(seq->size() == m);
        REQUIRE(seq->elements().front() == start);
        REQUIRE_FALSE(has_ufp(seq->elements()).has_value());
        REQUIRE_FALSE(product_hits_zero_or_one(seq->elements()).has_value());
      } else {
        REQUIRE(std::get<PoolExhausted>(out).step < m);
      }
    }
  }
}
