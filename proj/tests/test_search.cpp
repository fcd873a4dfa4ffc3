#include <catch_amalgamated.hpp>

#include <monochrome/search.hpp>

#include "support/oracles.hpp"

using namespace monochrome;

namespace {

const RingSpec Z = RingSpec::integers();

std::shared_ptr<const Window> ints(std::uint64_t n) {
  return std::make_shared<const Window>(Z, WindowParams::count(n));
}

AvoidanceInstance instance(std::uint64_t n, Coloring::Color r, const char* F) {
  return build_instance(ints(n), r, parse_family(Z, F), ScanConstraints::defaults(Z));
}

std::vector<oracle::Poly> oracle_family(const PolyFamily& F) {
  std::vector<oracle::Poly> out;
  for (const auto& f : F.polys()) {
    oracle::Poly p;
    for (const auto& [deg, coef] : f.terms()) p.emplace_back(deg, coef);
    out.push_back(p);
  }
  return out;
}

using Cands = std::vector<std::vector<std::uint32_t>>;

}  // namespace

TEST_CASE("avoidance instances", "[search]") {
  CHECK(instance(3, 2, "t").candidates == Cands{{1, 2}});
  CHECK(instance(4, 2, "t").candidates == Cands{{1, 2}, {2, 3}});
  CHECK(instance(1, 2, "t").candidates.empty());
  CHECK(instance(6, 2, "0; t").candidates.front() == std::vector<std::uint32_t>{0, 1, 2});
  CHECK_THROWS(instance(3, 0, "t"));
}

TEST_CASE("avoidance backtracking", "[search]") {
  const auto found = avoidance_backtrack(instance(4, 2, "t"), 1000);
  REQUIRE(found.status == AvoidanceResult::Status::AvoidanceFound);
  REQUIRE(found.coloring.has_value());
  const auto& c = found.coloring->colors();
  CHECK(c[1] != c[2]);
  CHECK(c[2] != c[3]);

  CHECK(avoidance_backtrack(instance(3, 1, "t"), 1000).status == AvoidanceResult::Status::Forced);
  CHECK(avoidance_backtrack(instance(40, 2, "0; t"), 0).status == AvoidanceResult::Status::Timeout);
  CHECK(avoidance_backtrack(instance(40, 2, "0; t"), 5).status == AvoidanceResult::Status::Timeout);

  // No candidates: anything avoids.
  const auto empty = avoidance_backtrack(instance(1, 2, "t"), 0);
  CHECK(empty.status == AvoidanceResult::Status::AvoidanceFound);
}

TEST_CASE("CNF export layout", "[search][cnf]") {
  const auto cnf = cnf_export(instance(3, 2, "t"));
  CHECK(format_dimacs(cnf) ==
        "c map 1 0\nc map 2 1\nc map 3 2\np cnf 6 8\n"
        "1 2 0\n3 4 0\n5 6 0\n-1 -2 0\n-3 -4 0\n-5 -6 0\n-3 -5 0\n-4 -6 0\n");
  CHECK(cnf_var(0, 0, 3) == 1);
  CHECK(cnf_var(2, 1, 3) == 8);
}

TEST_CASE("CNF size formula", "[search][cnf][property]") {
  for (const char* F : {"t", "0; t", "2t^2+t"})
    for (Coloring::Color r = 1; r <= 4; ++r)
      for (std::uint64_t n = 1; n <= 30; n += 7) {
        const auto inst = instance(n, r, F);
        const auto cnf = cnf_export(inst);
        REQUIRE(cnf.num_vars == static_cast<int>(n * r));
        REQUIRE(cnf.clauses.size() == n + n * r * (r - 1) / 2 + inst.candidates.size() * r);
        REQUIRE(parse_dimacs(format_dimacs(cnf)) == cnf);
      }
}

TEST_CASE("DIMACS and model parsing", "[cnf]") {
  CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 3 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2\n"), ParseError);
  const auto cnf = parse_dimacs("c hello\np cnf 3 2\n1 -2\n0\n3 0\n");
  CHECK(cnf.comments == std::vector<std::string>{"hello"});
  CHECK(cnf.clauses == std::vector<std::vector<int>>{{1, -2}, {3}});

  CHECK(parse_model("s SATISFIABLE\nv 1 -2\nv 3 0\n") == std::vector<int>{1, -2, 3});
  CHECK(parse_model("1\n-2\n3\n") == std::vector<int>{1, -2, 3});
  CHECK_THROWS_AS(parse_model("v 1 x 0"), ParseError);
}

TEST_CASE("model decoding", "[search][cnf]") {
  const auto inst = instance(3, 2, "t");
  const auto c = cnf_model_decode({1, -2, 3, -4, -5, 6}, inst);
  CHECK(c.colors() == std::vector<Coloring::Color>{1, 1, 2});
  // absent variables are false
  CHECK(cnf_model_decode({2, 3, 6}, inst).colors() == std::vector<Coloring::Color>{2, 1, 2});
  CHECK_THROWS_AS(cnf_model_decode({1, 2, 3, 6}, inst), ModelError);
  CHECK_THROWS_AS(cnf_model_decode({1, 3}, inst), ModelError);
  CHECK_THROWS_AS(cnf_model_decode({1, 3, 5}, inst), ModelError);
  CHECK_THROWS_AS(cnf_model_decode({1, 4, 7}, inst), ModelError);

  const auto cnf = cnf_export(inst);
  const auto model = dpll_solve(cnf);
  REQUIRE(model.has_value());
  CHECK(model_satisfies(cnf, *model));
  const auto decoded = cnf_model_decode(*model, inst);
  CHECK(avoids_all(inst, decoded.colors()));
}

TEST_CASE("backtracker and reference DPLL agree", "[search][cnf][oracle]") {
  int compared = 0;
  for (const char* F : {"t", "0; t", "2t^2+t"})
    for (std::uint64_t n = 1; n <= 18; ++n) {
      const auto inst = instance(n, 2, F);
      const auto bt = avoidance_backtrack(inst, 1'000'000);
      REQUIRE(bt.status != AvoidanceResult::Status::Timeout);
      const auto cnf = cnf_export(inst);
      const auto model = dpll_solve(cnf);
      REQUIRE((bt.status == AvoidanceResult::Status::AvoidanceFound) == model.has_value());
      if (bt.coloring) {
        // soundness: the coloring avoids every candidate and satisfies the CNF
        REQUIRE(avoids_all(inst, bt.coloring->colors()));
        auto units = cnf;
        for (auto& u : coloring_unit_clauses(*bt.coloring)) units.clauses.push_back(u);
        REQUIRE(dpll_solve(units).has_value());
      }
      for (unsigned jobs : {2u, 3u}) REQUIRE(avoidance_backtrack(inst, 1'000'000, jobs).status == bt.status);
      ++compared;
    }
  CHECK(compared == 54);
}

TEST_CASE("avoidance agrees with exhaustive colorings", "[search][oracle]") {
  // Frozen oracle verdicts: r=2 {t} avoidable up to 7, forced at 8; {0,t} avoidable up to 14, forced at 15.
  const auto Ft = parse_family(Z, "t");
  CHECK(oracle::avoidable(2, 7, oracle_family(Ft)));
  CHECK_FALSE(oracle::avoidable(2, 8, oracle_family(Ft)));
  const auto F0t = parse_family(Z, "0; t");
  CHECK(oracle::avoidable(2, 14, oracle_family(F0t)));
  CHECK_FALSE(oracle::avoidable(2, 15, oracle_family(F0t)));
  for (std::uint64_t n = 1; n <= 12; ++n)
    for (const auto* F : {&Ft, &F0t}) {
      const auto inst = build_instance(ints(n), 2, *F, ScanConstraints::defaults(Z));
      const bool found = avoidance_backtrack(inst, 1'000'000).status == AvoidanceResult::Status::AvoidanceFound;
      REQUIRE(found == oracle::avoidable(2, static_cast<unsigned>(n), oracle_family(*F)));
    }
}

TEST_CASE("forced is monotone in N", "[search][property]") {
  for (const char* F : {"t", "0; t"}) {
    bool forced = false;
    for (std::uint64_t n = 1; n <= 20; ++n) {
      const bool now = avoidance_backtrack(instance(n, 2, F), 1'000'000).status == AvoidanceResult::Status::Forced;
      if (forced) REQUIRE(now);
      forced = now;
    }
  }
}

TEST_CASE("least N search", "[search][moreira]") {
  const auto one = moreira_number(1, parse_family(Z, "t"), 64, 1'000'000);
  CHECK(one.status == MoreiraResult::Status::Found);
  CHECK(one.N == 3);
  CHECK(one.dpll_agrees == true);

  const auto two = moreira_number(2, parse_family(Z, "t"), 64, 1'000'000);
  CHECK(two.status == MoreiraResult::Status::Found);
  CHECK(two.N == 8);
  CHECK(two.dpll_agrees == true);

  const auto three = moreira_number(2, parse_family(Z, "0; t"), 64, 1'000'000);
  CHECK(three.N == 15);
  CHECK(three.dpll_agrees == true);

  const auto capped = moreira_number(2, parse_family(Z, "t"), 5, 1'000'000);
  CHECK(capped.status == MoreiraResult::Status::NotFoundWithin);
  CHECK(capped.N == 5);

  const auto starved = moreira_number(2, parse_family(Z, "0; t"), 64, 0);
  CHECK(starved.status == MoreiraResult::Status::Inconclusive);

  const auto quick = moreira_number(2, parse_family(Z, "t"), 64, 1'000'000, false);
  CHECK_FALSE(quick.dpll_agrees.has_value());
  CHECK_THROWS(moreira_number(2, parse_family(RingSpec::gaussian(), "t"), 8, 100));
}
