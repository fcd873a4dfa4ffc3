#include <catch_amalgamated.hpp>

#include <monochrome/coloring.hpp>

#include <cstdio>
#include <set>
#include <unordered_set>

using namespace monochrome;

namespace {

std::shared_ptr<const Window> ints(std::uint64_t n) {
  return std::make_shared<const Window>(RingSpec::integers(), WindowParams::count(n));
}

Coloring parity(std::uint64_t n) {
  auto w = ints(n);
  std::vector<Coloring::Color> colors;
  for (const auto& e : w->elements()) colors.push_back(1 + static_cast<Coloring::Color>(mpz_class(e.as_integer() % 2).get_ui()));
  return Coloring(w, 2, colors);
}

}  // namespace

TEST_CASE("splitmix64 reference outputs", "[coloring][rng]") {
  // Published reference values of SplitMix64 seeded with 0.
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);
}

TEST_CASE("random coloring contract", "[coloring]") {
  auto w = ints(200);
  const auto a = random_coloring(w, 3, 42), b = random_coloring(w, 3, 42), c = random_coloring(w, 3, 43);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  std::set<Coloring::Color> seen(a.colors().begin(), a.colors().end());
  CHECK(seen == std::set<Coloring::Color>{1, 2, 3});

  const auto mono = random_coloring(w, 1, 9);
  CHECK(std::all_of(mono.colors().begin(), mono.colors().end(), [](auto c) { return c == 1; }));
  CHECK_THROWS(random_coloring(w, 0, 1));
}

TEST_CASE("color classes", "[coloring]") {
  auto w = ints(10);
  const auto one = Coloring::constant(w, 2);
  CHECK(color_class(one, 1).size() == 10);
  CHECK(color_class(one, 2).empty());
  CHECK_THROWS_AS(color_class(one, 3), std::out_of_range);
  CHECK_THROWS_AS(color_class(one, 0), std::out_of_range);

  const auto evens = color_class(parity(10), 1);
  std::vector<Element> expect;
  for (long v : {2, 4, 6, 8, 10}) expect.push_back(Element::integer(v));
  CHECK(evens == expect);
}

TEST_CASE("color classes partition the window", "[coloring][property]") {
  for (const auto& w : {std::make_shared<const Window>(RingSpec::gaussian(), WindowParams::box(3)),
                        std::make_shared<const Window>(RingSpec::poly_over(3), WindowParams::degree(3)), ints(60)}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto c = random_coloring(w, 4, seed);
      std::size_t total = 0;
      std::unordered_set<Element> seen;
      for (Coloring::Color i = 1; i <= 4; ++i)
        for (const auto& e : color_class(c, i)) {
          ++total;
          REQUIRE(seen.insert(e).second);
          REQUIRE(c.color_of(e) == i);
        }
      REQUIRE(total == w->size());
    }
  }
}

TEST_CASE("coloring file format is bit exact", "[coloring][io]") {
  auto w = ints(5);
  const Coloring c(w, 2, {1, 2, 2, 1, 2});
  CHECK(format_coloring(c) == "ring Z\nwindow N=5\ncolors 2\n1 2 2 1 2\n");
  CHECK(parse_coloring(format_coloring(c)) == c);
}

TEST_CASE("coloring persistence round trip", "[coloring][io][property]") {
  const std::string path = "test_coloring_roundtrip.txt";
  for (const auto& w : {ints(40), std::make_shared<const Window>(RingSpec::gaussian(), WindowParams::box(2)),
                        std::make_shared<const Window>(RingSpec::poly_over(2), WindowParams::degree(5))}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto c = random_coloring(w, 1 + seed % 5, seed);
      store_coloring(path, c);
      REQUIRE(load_coloring(path) == c);
    }
  }
  std::remove(path.c_str());
}

TEST_CASE("malformed coloring files", "[coloring][io]") {
  CHECK_THROWS_AS(parse_coloring("ring Z\nwindow N=3\ncolors 2\n1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_coloring("ring Z\nwindow N=3\ncolors 2\n1 2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_coloring("ring Z\nwindow N=3\ncolors 2\n1 2 3\n"), ParseError);
  CHECK_THROWS_AS(parse_coloring("rings Z\nwindow N=3\ncolors 2\n1 2 1\n"), ParseError);
  CHECK_THROWS_AS(parse_coloring("ring Z\nwindow N=3\n"), ParseError);
  CHECK_THROWS_AS(parse_coloring("ring Z\nwindow N=3\ncolors 0\n"), ParseError);
  CHECK_THROWS(load_coloring("/nonexistent/coloring.txt"));
}
