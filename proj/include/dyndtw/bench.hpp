#ifndef DYNDTW_BENCH_HPP
#define DYNDTW_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dyndtw/dynamic_update.hpp"
#include "dyndtw/instances.hpp"

namespace dyndtw {

struct TrialRecord {
  std::int64_t trial = 0;
  std::int64_t m = 0, n = 0, rle_m = 0, rle_n = 0;
  std::string edit;
  std::int64_t chg = 0;
  std::int64_t ds_size = 0;
  std::int64_t cells_touched = 0;
  std::int64_t update_ns = 0;
  std::int64_t dense_rebuild_ns = 0;
  std::int64_t sparse_rebuild_ns = 0;
};

struct BenchConfig {
  std::uint64_t seed = 1;
  std::int64_t trials = 50;
  // experiment 1: fixed RLE size, varying length
  std::int64_t e1_rle = 50;
  std::int64_t e1_len_min = 50, e1_len_max = 500, e1_len_step = 50;
  // experiment 2: fixed length, varying RLE size
  std::int64_t e2_len = 500;
  std::int64_t e2_rle_min = 10, e2_rle_max = 500, e2_rle_step = 10;
  std::int64_t alphabet = 26;
  EditOp edit = EditOp::delete_char(1);  // the measured edit
  int threads = 0;                       // 0: hardware choice
};

// CSV header shared by both experiments:
//   trial,m,n,M,N,edit,chg,ds_size,cells_touched,update_ns,dense_rebuild_ns,sparse_rebuild_ns
extern const char* kTrialCsvHeader;

std::string trial_csv_row(const TrialRecord& r);

// Per (parameter point, trial): generate a pair, build the sparse table,
// apply the edit, record. Rows sorted by (point, trial); per-point average
// rows appended with trial column "avg".
std::string run_experiment_1(const BenchConfig& cfg);
std::string run_experiment_2(const BenchConfig& cfg);

// Deletes B[1] on the adversarial pair and asserts the lower bound
// ((n-2)(M-1) + (m-2)(N-1)) / 2. Errors: BoundViolated.
TrialRecord run_adversarial(const AdversarialSpec& spec);

Cost adversarial_chg_bound(std::int64_t m, std::int64_t n, std::int64_t M, std::int64_t N);

}  // namespace dyndtw

#endif  // DYNDTW_BENCH_HPP
