#include "doctest.h"

#include "dyndtw/instances.hpp"

using namespace dyndtw;

TEST_CASE("random generator hits the requested length and run count exactly") {
  SUBCASE("forced singleton runs") {
    RleString s = gen_random(RandomSpec{5, 5, 26, 9});
    CHECK(s.length() == 5);
    CHECK(s.run_count() == 5);
    for (std::int64_t r = 0; r + 1 < s.run_count(); ++r) {
      CHECK(s.runs()[static_cast<std::size_t>(r)].ch !=
            s.runs()[static_cast<std::size_t>(r + 1)].ch);
    }
  }
  SUBCASE("single run") {
    RleString s = gen_random(RandomSpec{5, 1, 26, 9});
    CHECK(s.length() == 5);
    CHECK(s.run_count() == 1);
  }
  SUBCASE("larger shape, deterministic per seed") {
    RleString s1 = gen_random(RandomSpec{500, 50, 26, 777});
    RleString s2 = gen_random(RandomSpec{500, 50, 26, 777});
    RleString s3 = gen_random(RandomSpec{500, 50, 26, 778});
    CHECK(s1.length() == 500);
    CHECK(s1.run_count() == 50);
    CHECK(s1 == s2);
    CHECK(!(s1 == s3));
  }
  SUBCASE("sweep of feasible shapes") {
    Rng rng(55);
    for (int iter = 0; iter < 100; ++iter) {
      std::int64_t m = rng.range(1, 60);
      std::int64_t M = rng.range(1, m);
      RleString s = gen_random(RandomSpec{m, M, 4, rng.next()});
      CHECK(s.length() == m);
      CHECK(s.run_count() == M);
    }
  }
  CHECK_THROWS_AS(gen_random(RandomSpec{5, 6, 26, 1}), Error);
  CHECK_THROWS_AS(gen_random(RandomSpec{5, 2, 1, 1}), Error);
}

TEST_CASE("adversarial pairs satisfy the three orderings") {
  auto check_orderings = [](const AdversarialSpec& spec) {
    auto [a, b] = gen_adversarial(spec);
    REQUIRE(a.run_count() == spec.run_count_a);
    REQUIRE(b.run_count() == spec.run_count_b);
    for (std::int64_t i = 0; i + 1 < a.run_count(); ++i) {
      CHECK(a.runs()[static_cast<std::size_t>(i)].ch >
            a.runs()[static_cast<std::size_t>(i + 1)].ch);
      CHECK(a.runs()[static_cast<std::size_t>(i)].exponent == spec.exp_a);
    }
    for (std::int64_t j = 0; j + 1 < b.run_count(); ++j) {
      CHECK(b.runs()[static_cast<std::size_t>(j)].ch <
            b.runs()[static_cast<std::size_t>(j + 1)].ch);
      CHECK(b.runs()[static_cast<std::size_t>(j)].exponent == spec.exp_b);
    }
    CHECK(a.runs().back().ch > b.runs().back().ch);
  };
  check_orderings(AdversarialSpec{2, 2, 1, 1});
  check_orderings(AdversarialSpec{20, 20, 5, 5});
  check_orderings(AdversarialSpec{3, 3, 2, 2});
  auto [a, b] = gen_adversarial(AdversarialSpec{20, 20, 5, 5});
  CHECK(a.length() == 100);
  CHECK(b.length() == 100);
}

TEST_CASE("prepend scripts descend strictly below the first character") {
  auto [a, b] = gen_adversarial(AdversarialSpec{6, 6, 1, 1});
  (void)a;
  SUBCASE("single step") {
    auto script = gen_lemma1_script(b, 1);
    REQUIRE(script.size() == 1);
    CHECK(script[0].kind == EditKind::InsertChar);
    CHECK(script[0].pos == 1);
    CHECK(script[0].ch < b.at(1));
  }
  SUBCASE("three steps strictly decreasing") {
    auto script = gen_lemma1_script(b, 3);
    REQUIRE(script.size() == 3);
    Character prev = b.at(1);
    for (const EditOp& op : script) {
      CHECK(op.ch < prev);
      prev = op.ch;
    }
  }
}
