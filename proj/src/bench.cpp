#include "dyndtw/bench.hpp"

#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include "dyndtw/oracle.hpp"
#include "dyndtw/sparse_ds.hpp"

namespace dyndtw {

const char* kTrialCsvHeader =
    "trial,m,n,M,N,edit,chg,ds_size,cells_touched,update_ns,dense_rebuild_ns,"
    "sparse_rebuild_ns";

std::string trial_csv_row(const TrialRecord& r) {
  std::ostringstream out;
  out << r.trial << ',' << r.m << ',' << r.n << ',' << r.rle_m << ',' << r.rle_n << ','
      << r.edit << ',' << r.chg << ',' << r.ds_size << ',' << r.cells_touched << ','
      << r.update_ns << ',' << r.dense_rebuild_ns << ',' << r.sparse_rebuild_ns;
  return out.str();
}

namespace {

std::string edit_label(const EditOp& op) {
  std::ostringstream out;
  switch (op.kind) {
    case EditKind::InsertChar: out << "ins " << op.pos << ' ' << op.ch; break;
    case EditKind::DeleteChar: out << "del " << op.pos; break;
    case EditKind::SubstituteChar: out << "sub " << op.pos << ' ' << op.ch; break;
    case EditKind::InsertRun:
      out << "insrun " << op.pos << ' ' << op.ch << ' ' << op.k;
      break;
    case EditKind::DeleteRun: out << "delrun " << op.pos << ' ' << op.k; break;
    case EditKind::SubstituteRun:
      out << "subrun " << op.pos << ' ' << op.k1 << ' ' << op.ch << ' ' << op.k2;
      break;
  }
  std::string s = out.str();
  for (char& c : s) {
    if (c == ' ') c = '_';  // keep the CSV single-token
  }
  return s;
}

// Repeats a timed region until at least ~1 ms has accumulated; reports the
// mean. State is restored per repetition by cloning outside the clock.
template <typename Setup, typename Body>
std::int64_t timed_ns(Setup&& setup, Body&& body, int max_reps = 64) {
  using clock = std::chrono::steady_clock;
  std::int64_t total = 0;
  int reps = 0;
  while (reps < max_reps) {
    auto state = setup();
    auto t0 = clock::now();
    body(state);
    auto t1 = clock::now();
    total += std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    ++reps;
    if (total >= 1'000'000) break;
  }
  return total / reps;
}

TrialRecord run_trial(std::int64_t trial_id, const RleString& a, const RleString& b,
                      const EditOp& edit) {
  TrialRecord rec;
  rec.trial = trial_id;
  rec.m = a.length();
  rec.n = b.length();
  rec.rle_m = a.run_count();
  rec.rle_n = b.run_count();
  rec.edit = edit_label(edit);

  SparseDs ds = build_ds(a, b);
  rec.ds_size = ds.cell_count();

  UpdateStats st;
  rec.update_ns = timed_ns([&] { return ds; },
                           [&](SparseDs& copy) {
                             st = edit.is_run_kind() ? apply_batched_edit(copy, edit)
                                                     : apply_edit(copy, edit);
                           });
  rec.chg = st.chg;
  rec.cells_touched = st.cells_touched;

  rec.dense_rebuild_ns = timed_ns([] { return 0; },
                                  [&](int) {
                                    DenseDp d = dense_dtw(a, b);
                                    DenseDr r = dense_dr(d);
                                    (void)r;
                                  });
  rec.sparse_rebuild_ns = timed_ns([] { return 0; },
                                   [&](int) {
                                     SparseDs s = build_ds(a, b);
                                     (void)s;
                                   });
  return rec;
}

std::string run_points(const BenchConfig& cfg, const std::vector<std::int64_t>& points,
                       bool vary_length) {
  struct Job {
    std::int64_t point;
    std::int64_t trial;
  };
  std::vector<Job> jobs;
  for (std::int64_t p : points) {
    for (std::int64_t t = 0; t < cfg.trials; ++t) jobs.push_back(Job{p, t});
  }
  std::vector<TrialRecord> records(jobs.size());

  int threads = cfg.threads > 0 ? cfg.threads
                                : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t k = next.fetch_add(1);
      if (k >= jobs.size()) return;
      const Job& job = jobs[k];
      std::int64_t len = vary_length ? job.point : cfg.e2_len;
      std::int64_t rle = vary_length ? cfg.e1_rle : job.point;
      RandomSpec sa{len, rle, cfg.alphabet,
                    cfg.seed + 2 * static_cast<std::uint64_t>(k) + 1};
      RandomSpec sb{len, rle, cfg.alphabet,
                    cfg.seed + 2 * static_cast<std::uint64_t>(k) + 2};
      RleString a = gen_random(sa);
      RleString b = gen_random(sb);
      records[k] = run_trial(job.trial, a, b, cfg.edit);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::ostringstream out;
  out << kTrialCsvHeader << '\n';
  for (const TrialRecord& r : records) out << trial_csv_row(r) << '\n';
  // per-point averages
  std::size_t k = 0;
  for (std::int64_t p : points) {
    TrialRecord avg;
    std::int64_t cnt = 0;
    for (std::int64_t t = 0; t < cfg.trials; ++t, ++k) {
      const TrialRecord& r = records[k];
      avg.m += r.m;
      avg.n += r.n;
      avg.rle_m += r.rle_m;
      avg.rle_n += r.rle_n;
      avg.chg += r.chg;
      avg.ds_size += r.ds_size;
      avg.cells_touched += r.cells_touched;
      avg.update_ns += r.update_ns;
      avg.dense_rebuild_ns += r.dense_rebuild_ns;
      avg.sparse_rebuild_ns += r.sparse_rebuild_ns;
      ++cnt;
    }
    (void)p;
    out << "avg," << avg.m / cnt << ',' << avg.n / cnt << ',' << avg.rle_m / cnt << ','
        << avg.rle_n / cnt << ',' << edit_label(cfg.edit) << ',' << avg.chg / cnt << ','
        << avg.ds_size / cnt << ',' << avg.cells_touched / cnt << ',' << avg.update_ns / cnt
        << ',' << avg.dense_rebuild_ns / cnt << ',' << avg.sparse_rebuild_ns / cnt << '\n';
  }
  return out.str();
}

}  // namespace

std::string run_experiment_1(const BenchConfig& cfg) {
  std::vector<std::int64_t> points;
  for (std::int64_t len = cfg.e1_len_min; len <= cfg.e1_len_max; len += cfg.e1_len_step) {
    points.push_back(len);
  }
  return run_points(cfg, points, /*vary_length=*/true);
}

std::string run_experiment_2(const BenchConfig& cfg) {
  std::vector<std::int64_t> points;
  for (std::int64_t r = cfg.e2_rle_min; r <= cfg.e2_rle_max; r += cfg.e2_rle_step) {
    points.push_back(r);
  }
  return run_points(cfg, points, /*vary_length=*/false);
}

Cost adversarial_chg_bound(std::int64_t m, std::int64_t n, std::int64_t M, std::int64_t N) {
  return ((n - 2) * (M - 1) + (m - 2) * (N - 1)) / 2;
}

TrialRecord run_adversarial(const AdversarialSpec& spec) {
  auto [a, b] = gen_adversarial(spec);
  TrialRecord rec = run_trial(0, a, b, EditOp::delete_char(1));
  Cost bound = adversarial_chg_bound(a.length(), b.length(), a.run_count(), b.run_count());
  if (rec.chg < bound) {
    throw Error(Errc::BoundViolated,
                "chg " + std::to_string(rec.chg) + " below the lower bound " +
                    std::to_string(bound));
  }
  return rec;
}

}  // namespace dyndtw
