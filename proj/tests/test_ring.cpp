#include <catch_amalgamated.hpp>

#include <monochrome/coloring.hpp>
#include <monochrome/window.hpp>

using namespace monochrome;

namespace {

const RingSpec Z = RingSpec::integers();
const RingSpec Zi = RingSpec::gaussian();
const RingSpec GF2 = RingSpec::poly_over(2);
const RingSpec GF3 = RingSpec::poly_over(3);

Element z(long v) { return Element::integer(v); }
Element el(const RingSpec& r, const char* s) { return parse_element(r, s); }

}  // namespace

TEST_CASE("ring arithmetic examples", "[ring]") {
  CHECK(ring_arith(RingOp::Add, z(2), z(3)) == z(5));
  CHECK(ring_arith(RingOp::Add, el(GF2, "x+1"), el(GF2, "x+1")) == Element::zero(GF2));
  CHECK(ring_arith(RingOp::Mul, el(Zi, "1+i"), el(Zi, "1-i")) == el(Zi, "2"));
  CHECK(ring_arith(RingOp::Sub, z(2), z(7)) == z(-5));
  CHECK(ring_arith(RingOp::Neg, el(GF3, "x+1")) == el(GF3, "2x+2"));
  CHECK_THROWS_AS(ring_arith(RingOp::Add, z(1), el(Zi, "1")), RingMismatch);
  CHECK_THROWS(ring_arith(RingOp::Mul, z(1)));
}

TEST_CASE("arbitrary precision does not wrap", "[ring]") {
  Element p = z(3).pow(200);
  CHECK(p.to_string().size() == 96);
  CHECK(*exact_divide(p, z(3).pow(199)) == z(3));
}

TEST_CASE("exact division", "[ring]") {
  CHECK(*exact_divide(z(6), z(3)) == z(2));
  CHECK_FALSE(exact_divide(z(7), z(3)).has_value());
  CHECK(*exact_divide(el(GF2, "x^2+x"), el(GF2, "x")) == el(GF2, "x+1"));
  CHECK(*exact_divide(z(-6), z(3)) == z(-2));
  CHECK(*exact_divide(el(Zi, "2"), el(Zi, "1+i")) == el(Zi, "1-i"));
  CHECK_FALSE(exact_divide(el(Zi, "1"), el(Zi, "1+i")).has_value());
  CHECK(*exact_divide(Element::zero(GF3), el(GF3, "x")) == Element::zero(GF3));
  CHECK_FALSE(exact_divide(el(GF3, "x+1"), el(GF3, "x")).has_value());
  CHECK_THROWS_AS(exact_divide(z(1), z(0)), std::domain_error);
  CHECK_THROWS_AS(exact_divide(z(1), el(GF2, "x")), RingMismatch);
}

TEST_CASE("ring spec parsing", "[ring]") {
  CHECK(RingSpec::parse("Z") == Z);
  CHECK(RingSpec::parse("Zi") == Zi);
  CHECK(RingSpec::parse("GF(2)[x]") == GF2);
  CHECK(RingSpec::parse("GF(7)[x]").to_string() == "GF(7)[x]");
  CHECK_THROWS_AS(RingSpec::parse("GF(4)[x]"), ParseError);
  CHECK_THROWS_AS(RingSpec::parse("Q"), ParseError);
  CHECK_THROWS(RingSpec::poly_over(9));
}

TEST_CASE("element literals", "[ring]") {
  CHECK(el(Zi, "i") == Element::gaussian(0, 1));
  CHECK(el(Zi, "-i") == Element::gaussian(0, -1));
  CHECK(el(Zi, "3-2i") == Element::gaussian(3, -2));
  CHECK(el(Zi, "-2i+5") == Element::gaussian(5, -2));
  CHECK(Element::gaussian(0, -3).to_string() == "-3i");
  CHECK(Element::gaussian(2, 1).to_string() == "2+i");
  CHECK(el(GF3, "2x^2+x+2").to_string() == "2x^2+x+2");
  CHECK(el(GF3, "x+x+x") == Element::zero(GF3));
  CHECK(el(GF2, "-x") == el(GF2, "x"));
  CHECK_THROWS_AS(el(Z, "1.5"), ParseError);
  CHECK_THROWS_AS(el(Zi, "1+j"), ParseError);
  CHECK_THROWS_AS(el(Zi, "i+i"), ParseError);
  CHECK_THROWS_AS(el(GF2, "x^"), ParseError);
  CHECK_THROWS_AS(el(Z, ""), ParseError);
}

TEST_CASE("ring axioms on random triples", "[ring][property]") {
  for (const RingSpec& ring : {Z, Zi, GF2, GF3, RingSpec::poly_over(5)}) {
    SplitMix64 rng(0xC0FFEE + ring.modulus());
    for (int trial = 0; trial < 1000; ++trial) {
      const Element a = random_element(ring, rng, 50), b = random_element(ring, rng, 50), c = random_element(ring, rng, 50);
      REQUIRE(a + b == b + a);
      REQUIRE(a * b == b * a);
      REQUIRE(a * (b + c) == a * b + a * c);
      REQUIRE((a + b) + c == a + (b + c));
      REQUIRE(a - a == Element::zero(ring));
      if (!b.is_zero()) REQUIRE(*exact_divide(a * b, b) == a);
      // literal round trip is the canonical form
      REQUIRE(parse_element(ring, a.to_string()) == a);
    }
  }
}

TEST_CASE("polynomial canonical form strips trailing zeros", "[ring]") {
  const Element p = Element::poly(GF3, {1, 2, 0, 3, 6});
  CHECK(p.as_poly().coeffs == std::vector<std::uint32_t>{1, 2});
  const Element again = Element::poly(GF3, {p.as_poly().coeffs.begin(), p.as_poly().coeffs.end()});
  CHECK(again == p);
  CHECK(std::hash<Element>{}(again) == std::hash<Element>{}(p));
  CHECK(Element::from_integer(GF3, -1) == el(GF3, "2"));
}

TEST_CASE("window enumeration", "[ring][window]") {
  const Window w5(Z, WindowParams::count(5));
  REQUIRE(w5.size() == 5);
  for (long v = 1; v <= 5; ++v) CHECK(w5[v - 1] == z(v));

  const Window p2(GF2, WindowParams::degree(2));
  REQUIRE(p2.size() == 4);
  CHECK(p2[0] == Element::zero(GF2));
  CHECK(p2[1] == el(GF2, "1"));
  CHECK(p2[2] == el(GF2, "x"));
  CHECK(p2[3] == el(GF2, "x+1"));

  const Window g1(Zi, WindowParams::box(1));
  REQUIRE(g1.size() == 9);
  CHECK(g1[0] == Element::zero(Zi));
  // (norm, re, im): norm-1 elements -i, -1 ... sorted by re then im
  CHECK(g1[1] == el(Zi, "-1"));
  CHECK(g1[2] == el(Zi, "-i"));
  CHECK(g1[3] == el(Zi, "i"));
  CHECK(g1[4] == el(Zi, "1"));
  CHECK(g1[8] == el(Zi, "1+i"));

  const Window sym(Z, WindowParams::parse("N=3,sym"));
  REQUIRE(sym.size() == 7);
  CHECK(sym[0] == z(-3));
  CHECK(sym.params().to_string() == "N=3,sym");
}

TEST_CASE("window sizes and index inverse", "[ring][window][property]") {
  const std::vector<Window> windows = {
      Window(Z, WindowParams::count(37)),     Window(Zi, WindowParams::box(4)),
      Window(GF3, WindowParams::degree(4)),   Window(RingSpec::poly_over(5), WindowParams::degree(3)),
      Window(Z, WindowParams::count(10, true))};
  CHECK(windows[0].size() == 37);
  CHECK(windows[1].size() == 81);
  CHECK(windows[2].size() == 81);
  CHECK(windows[3].size() == 125);
  CHECK(windows[4].size() == 21);
  for (const auto& w : windows) {
    for (std::size_t k = 0; k < w.size(); ++k) REQUIRE(w.index_of(w[k]) == k);
    for (std::size_t k = 1; k < w.size(); ++k) REQUIRE(compare_canonical(w[k - 1], w[k]) < 0);
  }
  CHECK_FALSE(windows[0].index_of(z(0)).has_value());
}

TEST_CASE("window parameter errors", "[ring][window]") {
  CHECK_THROWS(Window(Z, WindowParams::count(0)));
  CHECK_THROWS(Window(GF2, WindowParams::degree(0)));
  CHECK_THROWS(Window(Z, WindowParams::box(2)));
  CHECK_THROWS(Window(GF2, WindowParams::degree(40)));
  CHECK_THROWS_AS(WindowParams::parse("M=3"), ParseError);
  CHECK_THROWS_AS(WindowParams::parse("B=2,sym"), ParseError);
  CHECK(WindowParams::parse("B=0").value == 0);
  CHECK(Window(Zi, WindowParams::box(0)).size() == 1);
}
