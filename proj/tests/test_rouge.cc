#include <doctest.h>

#include <random>

#include "sportsnews/error.h"
#include "sportsnews/rouge.h"
#include "test_oracles.h"

using namespace sportsnews;

TEST_CASE("rouge-1 hand case") {
  RougeScore s = RougeN({"a", "b", "e"}, {"a", "b", "c", "d"}, 1);
  CHECK(s.precision == doctest::Approx(2.0 / 3));
  CHECK(s.recall == doctest::Approx(0.5));
  CHECK(s.f1 == doctest::Approx(4.0 / 7).epsilon(1e-12));
}

TEST_CASE("rouge identity and disjoint") {
  Tokens t{"x", "y", "z", "x"};
  for (int n : {1, 2}) CHECK(RougeN(t, t, n).f1 == 1.0);
  CHECK(RougeL(t, t).f1 == 1.0);
  CHECK(RougeN({"a"}, {"b"}, 1).f1 == 0.0);
  CHECK(RougeL({"a", "b"}, {"c"}).f1 == 0.0);
}

TEST_CASE("empty sides") {
  CHECK(RougeN({}, {}, 1).f1 == 1.0);
  CHECK(RougeN({"a"}, {}, 1).f1 == 0.0);
  CHECK(RougeN({}, {"a"}, 1).f1 == 0.0);
  CHECK(RougeN({"a"}, {"a"}, 2).f1 == 1.0);  // both sides have no bigrams
  CHECK(RougeN({"a"}, {"a", "b"}, 2).f1 == 0.0);
  CHECK(RougeL({}, {}).f1 == 1.0);
  CHECK_THROWS_AS(RougeN({"a"}, {"a"}, 0), Error);
}

TEST_CASE("clipped counts") {
  RougeScore s = RougeN({"a", "a", "a"}, {"a", "b"}, 1);
  CHECK(s.precision == doctest::Approx(1.0 / 3));
  CHECK(s.recall == doctest::Approx(0.5));
}

TEST_CASE("rouge-l hand cases") {
  RougeScore s = RougeL({"a", "x", "b", "y", "c"}, {"a", "b", "c"});
  CHECK(LcsLength({"a", "x", "b", "y", "c"}, {"a", "b", "c"}) == 3);
  CHECK(s.recall == 1.0);
  CHECK(s.precision == doctest::Approx(0.6));
  CHECK(s.f1 == doctest::Approx(0.75));
  CHECK(LcsLength({"c", "b", "a"}, {"a", "b", "c"}) == 1);
  CHECK(oracle::LcsBySubsets({"c", "b", "a"}, {"a", "b", "c"}) == 1);
}

TEST_CASE("random pairs against the oracle") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Tokens a = oracle::RandomTokens(rng, 0, 12, 5);
    Tokens b = oracle::RandomTokens(rng, 0, 12, 5);
    for (int n : {1, 2}) {
      auto [p, r, f] = oracle::RougeN(a, b, n);
      RougeScore s = RougeN(a, b, n);
      CHECK(s.precision == doctest::Approx(p).epsilon(1e-12));
      CHECK(s.recall == doctest::Approx(r).epsilon(1e-12));
      CHECK(s.f1 == doctest::Approx(f).epsilon(1e-12));
    }
    if (a.size() <= 10) {
      CHECK(LcsLength(a, b) == oracle::LcsBySubsets(a, b));
    }
    auto [p, r, f] = oracle::RougeL(a, b);
    CHECK(RougeL(a, b).f1 == doctest::Approx(f).epsilon(1e-12));
  }
}

TEST_CASE("swap symmetry") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    Tokens a = oracle::RandomTokens(rng, 1, 15, 6);
    Tokens b = oracle::RandomTokens(rng, 1, 15, 6);
    for (RougeVariant v : {RougeVariant::kR1, RougeVariant::kR2, RougeVariant::kRL}) {
      RougeScore ab = Rouge(a, b, v), ba = Rouge(b, a, v);
      CHECK(ab.precision == ba.recall);
      CHECK(ab.recall == ba.precision);
      CHECK(ab.f1 == ba.f1);
      CHECK(ab.f1 >= 0.0);
      CHECK(ab.f1 <= 1.0);
    }
  }
}

TEST_CASE("variant names") {
  CHECK(ParseRougeVariant("R1") == RougeVariant::kR1);
  CHECK(ParseRougeVariant("rougeL") == RougeVariant::kRL);
  CHECK(std::string(RougeVariantName(RougeVariant::kR2)) == "R2");
  CHECK_THROWS_AS(ParseRougeVariant("R3"), Error);
}
