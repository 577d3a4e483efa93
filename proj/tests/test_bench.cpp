#include "doctest.h"

#include <sstream>

#include "dyndtw/bench.hpp"

using namespace dyndtw;

namespace {

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (first) {
      csv.header = fields;
      first = false;
    } else {
      csv.rows.push_back(fields);
    }
  }
  return csv;
}

}  // namespace

TEST_CASE("experiment harness emits the stable schema with sane rows") {
  BenchConfig cfg;
  cfg.seed = 3;
  cfg.trials = 3;
  cfg.e1_rle = 5;
  cfg.e1_len_min = 10;
  cfg.e1_len_max = 30;
  cfg.e1_len_step = 10;
  cfg.threads = 2;
  std::string csv_text = run_experiment_1(cfg);
  Csv csv = parse_csv(csv_text);
  REQUIRE(csv.header ==
          std::vector<std::string>{"trial", "m", "n", "M", "N", "edit", "chg", "ds_size",
                                   "cells_touched", "update_ns", "dense_rebuild_ns",
                                   "sparse_rebuild_ns"});
  // 3 points x 3 trials + 3 average rows
  REQUIRE(csv.rows.size() == 12);
  std::int64_t avg_rows = 0;
  for (const auto& row : csv.rows) {
    REQUIRE(row.size() == csv.header.size());
    std::int64_t chg = std::stoll(row[6]);
    std::int64_t ds_size = std::stoll(row[7]);
    CHECK(chg <= ds_size);
    if (row[0] == "avg") ++avg_rows;
  }
  CHECK(avg_rows == 3);
  // determinism under a fixed seed
  CHECK(run_experiment_1(cfg) == csv_text);
}

TEST_CASE("experiment 2 swaps the roles of length and run count") {
  BenchConfig cfg;
  cfg.seed = 5;
  cfg.trials = 2;
  cfg.e2_len = 40;
  cfg.e2_rle_min = 5;
  cfg.e2_rle_max = 15;
  cfg.e2_rle_step = 5;
  cfg.threads = 2;
  Csv csv = parse_csv(run_experiment_2(cfg));
  REQUIRE(csv.rows.size() == 9);
  for (const auto& row : csv.rows) {
    if (row[0] == "avg") continue;
    CHECK(std::stoll(row[1]) == 40);
    CHECK(std::stoll(row[6]) <= std::stoll(row[7]));
  }
}

TEST_CASE("adversarial record meets the closed-form bound") {
  TrialRecord rec = run_adversarial(AdversarialSpec{20, 20, 5, 5});
  CHECK(rec.chg >= 1862);
  CHECK(rec.chg <= rec.ds_size);
  TrialRecord small = run_adversarial(AdversarialSpec{2, 2, 2, 2});
  CHECK(small.chg >= 2);
  CHECK(adversarial_chg_bound(4, 4, 2, 2) == 2);
}
