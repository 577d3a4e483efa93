#include "doctest.h"

#include <algorithm>

#include "dyndtw/instances.hpp"
#include "dyndtw/oracle.hpp"

using namespace dyndtw;

namespace {

RleString seq(std::initializer_list<Character> v) {
  return RleString::from_flat(std::vector<Character>(v));
}

// Exhaustive minimum over all warping paths, independent of the DP route.
Cost enumerate_min_cost(const RleString& a, const RleString& b, std::int64_t i,
                        std::int64_t j) {
  Cost here = sq(a.at(i), b.at(j));
  if (i == 1 && j == 1) return here;
  Cost best = -1;
  auto consider = [&](Cost c) {
    if (c >= 0 && (best < 0 || c < best)) best = c;
  };
  if (i > 1) consider(enumerate_min_cost(a, b, i - 1, j));
  if (j > 1) consider(enumerate_min_cost(a, b, i, j - 1));
  if (i > 1 && j > 1) consider(enumerate_min_cost(a, b, i - 1, j - 1));
  return best + here;
}

RleString random_seq(Rng& rng, std::int64_t max_len, std::int64_t sigma) {
  std::int64_t len = rng.range(1, max_len);
  std::vector<Character> v;
  for (std::int64_t i = 0; i < len; ++i) v.push_back(rng.range(0, sigma - 1));
  return RleString::from_flat(std::move(v));
}

// Lemma-2-style recursion, written independently of dense_dr's subtraction.
DenseDr dr_by_recursion(const RleString& a, const RleString& b) {
  const std::int64_t m = a.length(), n = b.length();
  DenseDr r(m, n);
  for (std::int64_t i = 1; i <= m; ++i) {
    for (std::int64_t j = 1; j <= n; ++j) {
      DrCell& c = r.at(i, j);
      if (i == 1 && j == 1) {
        c = DrCell{0, 0};
      } else if (i == 1) {
        c = DrCell{0, sq(a.at(1), b.at(j))};
      } else if (j == 1) {
        c = DrCell{sq(a.at(i), b.at(1)), 0};
      } else {
        Cost x = r.at(i - 1, j).l;
        Cost y = r.at(i, j - 1).u;
        Cost z = std::min({x, y, Cost{0}}) + sq(a.at(i), b.at(j));
        c = DrCell{z - x, z - y};
      }
    }
  }
  return r;
}

}  // namespace

TEST_CASE("dense table brackets") {
  SUBCASE("identical sequences") {
    DenseDp d = dense_dtw(seq({1, 2}), seq({1, 2}));
    CHECK(d.at(2, 2) == 0);
  }
  SUBCASE("hand-evaluated 2x3") {
    DenseDp d = dense_dtw(seq({0, 2}), seq({0, 1, 2}));
    CHECK(d.at(2, 3) == 1);
  }
  SUBCASE("single cell") {
    DenseDp d = dense_dtw(seq({5}), seq({2}));
    CHECK(d.at(1, 1) == 9);
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(dense_dtw(seq({1}), RleString{}), Error);
  }
}

TEST_CASE("dense equals exhaustive path enumeration on small instances") {
  Rng rng(7);
  for (int iter = 0; iter < 60; ++iter) {
    RleString a = random_seq(rng, 6, 4);
    RleString b = random_seq(rng, 6, 4);
    DenseDp d = dense_dtw(a, b);
    CHECK(d.at(a.length(), b.length()) ==
          enumerate_min_cost(a, b, a.length(), b.length()));
  }
}

TEST_CASE("differential table examples") {
  DenseDr r = dense_dr(dense_dtw(seq({1, 2}), seq({1, 2})));
  CHECK(r.at(2, 2).u == -1);
  CHECK(r.at(2, 2).l == -1);
  DenseDr r2 = dense_dr(dense_dtw(seq({0, 2}), seq({0, 1, 2})));
  CHECK(r2.at(2, 2).u == 0);
  Rng rng(11);
  for (int iter = 0; iter < 20; ++iter) {
    RleString a = random_seq(rng, 8, 3);
    RleString b = random_seq(rng, 8, 3);
    DenseDr r3 = dense_dr(dense_dtw(a, b));
    for (std::int64_t i = 1; i <= a.length(); ++i) CHECK(r3.at(i, 1).l == 0);
    for (std::int64_t j = 1; j <= b.length(); ++j) CHECK(r3.at(1, j).u == 0);
  }
}

TEST_CASE("subtraction and recursion forms of the differential table agree") {
  Rng rng(13);
  for (int iter = 0; iter < 100; ++iter) {
    RleString a = random_seq(rng, 12, 3);
    RleString b = random_seq(rng, 12, 3);
    DenseDr by_sub = dense_dr(dense_dtw(a, b));
    DenseDr by_rec = dr_by_recursion(a, b);
    for (std::int64_t i = 1; i <= a.length(); ++i) {
      for (std::int64_t j = 1; j <= b.length(); ++j) {
        CHECK(by_sub.at(i, j) == by_rec.at(i, j));
      }
    }
  }
}

TEST_CASE("backtracking is deterministic and exact") {
  SUBCASE("diagonal") {
    DenseDp d = dense_dtw(seq({1, 2}), seq({1, 2}));
    WarpingPath p = backtrack_path(d, seq({1, 2}), seq({1, 2}));
    CHECK(p.steps ==
          std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 1}, {2, 2}});
  }
  SUBCASE("single row forces right-moves") {
    RleString a = seq({5}), b = seq({2, 2, 2});
    WarpingPath p = backtrack_path(dense_dtw(a, b), a, b);
    CHECK(p.steps ==
          std::vector<std::pair<std::int64_t, std::int64_t>>{{1, 1}, {1, 2}, {1, 3}});
  }
  SUBCASE("cost-1 instance") {
    RleString a = seq({0, 2}), b = seq({0, 1, 2});
    DenseDp d = dense_dtw(a, b);
    WarpingPath p = backtrack_path(d, a, b);
    CHECK(path_is_valid(p, 2, 3));
    CHECK(path_cost(p, a, b) == 1);
  }
}

TEST_CASE("paths are step-valid with exact cost sums on random instances") {
  Rng rng(17);
  for (int iter = 0; iter < 200; ++iter) {
    RleString a = random_seq(rng, 12, 3);
    RleString b = random_seq(rng, 12, 3);
    DenseDp d = dense_dtw(a, b);
    WarpingPath p = backtrack_path(d, a, b);
    CHECK(path_is_valid(p, a.length(), b.length()));
    CHECK(path_cost(p, a, b) == d.at(a.length(), b.length()));
  }
}

TEST_CASE("dtw_distance is the square root of the exact value") {
  CHECK(dtw_distance(seq({1, 2}), seq({1, 2})) == 0.0);
  CHECK(dtw_distance(seq({5}), seq({2})) == 3.0);
  CHECK(dtw_distance(seq({0, 2}), seq({0, 1, 2})) == 1.0);
}

TEST_CASE("in-box monotonicity, non-negative differences, diagonal constancy and the "
          "interior closed form") {
  Rng rng(23);
  for (int iter = 0; iter < 100; ++iter) {
    std::int64_t sigma = rng.range(2, 3);
    RandomSpec sa{rng.range(2, 14), 0, sigma, rng.next()};
    sa.rle_size = rng.range(1, sa.length);
    RandomSpec sb{rng.range(2, 14), 0, sigma, rng.next()};
    sb.rle_size = rng.range(1, sb.length);
    RleString a = gen_random(sa);
    RleString b = gen_random(sb);
    DenseDp d = dense_dtw(a, b);
    DenseDr r = dense_dr(d);
    const std::int64_t m = a.length(), n = b.length();

    for (std::int64_t i = 1; i <= m; ++i) {
      for (std::int64_t j = 1; j <= n; ++j) {
        std::int64_t bi = a.run_of(i), bj = b.run_of(j);
        std::int64_t it = a.run_first(bi), ib = a.run_last(bi);
        std::int64_t jl = b.run_first(bj), jr = b.run_last(bj);
        // within-run monotonicity and non-negative differences
        if (j > jl) {
          CHECK(d.at(i, j) >= d.at(i, j - 1));
          CHECK(r.at(i, j).l >= 0);
        }
        if (i > it) {
          CHECK(d.at(i, j) >= d.at(i - 1, j));
          CHECK(r.at(i, j).u >= 0);
        }
        // strict-interior diagonal constancy
        if (i > it + 1 && i <= ib && j > jl + 1 && j <= jr) {
          CHECK(r.at(i, j) == r.at(i - 1, j - 1));
        }
        // closed form from the box anchor
        if (i > it && j > jl) {
          std::int64_t s = j - jl, t = i - it;
          Cost anchor = d.at(it + std::max<std::int64_t>(t - s, 0),
                             jl + std::max<std::int64_t>(s - t, 0));
          CHECK(d.at(i, j) == anchor + std::min(s, t) * sq(a.at(i), b.at(j)));
        }
      }
    }
  }
}
