#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "dyndtw/core_types.hpp"
#include "dyndtw/instances.hpp"

using namespace dyndtw;

namespace {

std::vector<Character> str_chars(const char* s) {
  // a=1, b=2, c=3, ...
  std::vector<Character> v;
  for (const char* p = s; *p; ++p) v.push_back(*p - 'a' + 1);
  return v;
}

}  // namespace

TEST_CASE("rle_encode finds the maximal runs of the textbook example") {
  RleString s = rle_encode(str_chars("aacccccccbbabbbb"));
  REQUIRE(s.run_count() == 5);
  CHECK(s.runs()[0] == Run{1, 2});
  CHECK(s.runs()[1] == Run{3, 7});
  CHECK(s.runs()[2] == Run{2, 2});
  CHECK(s.runs()[3] == Run{1, 1});
  CHECK(s.runs()[4] == Run{2, 4});
  CHECK(s.length() == 16);
}

TEST_CASE("rle_encode trivial shapes") {
  CHECK(rle_encode({5}).runs() == std::vector<Run>{Run{5, 1}});
  CHECK(rle_encode({7, 7, 7, 7}).runs() == std::vector<Run>{Run{7, 4}});
}

TEST_CASE("rle_decode expands runs in order") {
  CHECK(rle_decode(RleString::from_runs({{5, 1}})) == std::vector<Character>{5});
  CHECK(rle_decode(RleString::from_runs({{9, 3}})) == std::vector<Character>{9, 9, 9});
  RleString s = RleString::from_runs({{1, 2}, {3, 7}, {2, 2}, {1, 1}, {2, 4}});
  CHECK(rle_decode(s) == str_chars("aacccccccbbabbbb"));
}

TEST_CASE("round trip and maximality over random arrays") {
  Rng rng(42);
  for (int iter = 0; iter < 200; ++iter) {
    std::int64_t len = rng.range(1, 40);
    std::vector<Character> flat;
    for (std::int64_t i = 0; i < len; ++i) flat.push_back(rng.range(0, 3));
    RleString s = rle_encode(flat);
    CHECK(rle_decode(s) == flat);
    CHECK(s.run_count() <= s.length());
    for (std::int64_t r = 0; r + 1 < s.run_count(); ++r) {
      CHECK(s.runs()[static_cast<std::size_t>(r)].ch !=
            s.runs()[static_cast<std::size_t>(r + 1)].ch);
    }
    // offsets are prefix sums
    std::int64_t pos = 1;
    for (std::int64_t r = 0; r < s.run_count(); ++r) {
      CHECK(s.run_first(r) == pos);
      pos += s.runs()[static_cast<std::size_t>(r)].exponent;
      CHECK(s.run_last(r) == pos - 1);
    }
  }
}

TEST_CASE("ingestion errors") {
  CHECK_THROWS_AS(rle_encode({}), Error);
  CHECK_THROWS_AS(rle_encode({(Character{1} << 20) + 1}), Error);
  CHECK_THROWS_AS(rle_encode({-(Character{1} << 20) - 1}), Error);
  CHECK_NOTHROW(rle_encode({Character{1} << 20}));
  CHECK_THROWS_AS(RleString::from_runs({{1, 0}}), Error);
}

TEST_CASE("sequence file text forms") {
  // flat form: one value per line
  RleString flat = parse_sequence_text("# comment\n1\n2\n2\n3\n");
  CHECK(flat.flat() == std::vector<Character>{1, 2, 2, 3});
  // flat form, several per line (first line has 3 tokens)
  RleString flat2 = parse_sequence_text("1 2 2\n3\n");
  CHECK(flat2.flat() == std::vector<Character>{1, 2, 2, 3});
  // RLE form: two integers per line
  RleString rle = parse_sequence_text("5 3\n2 1\n");
  CHECK(rle.flat() == std::vector<Character>{5, 5, 5, 2});
  // non-maximal input runs re-encode canonically
  RleString rle2 = parse_sequence_text("4 2\n4 1\n");
  CHECK(rle2.run_count() == 1);
  CHECK(rle2.length() == 3);
  CHECK_THROWS_AS(parse_sequence_text("# nothing\n"), Error);
  CHECK_THROWS_AS(parse_sequence_text("1 2\n3\n"), Error);
  CHECK_THROWS_AS(parse_sequence_text("zebra\n"), Error);
}

TEST_CASE("sequence file round trip") {
  RleString s = RleString::from_runs({{4, 2}, {-3, 5}, {4, 1}});
  std::string path = "tmp_seq_roundtrip.txt";
  write_sequence_file(path, s, true);
  CHECK(read_sequence_file(path) == s);
  write_sequence_file(path, s, false);
  CHECK(read_sequence_file(path) == s);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_sequence_file("definitely_missing_file.txt"), Error);
}
