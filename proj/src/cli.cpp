#include "dyndtw/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "dyndtw/bench.hpp"
#include "dyndtw/edit_script.hpp"
#include "dyndtw/instances.hpp"
#include "dyndtw/oracle.hpp"
#include "dyndtw/sparse_ds.hpp"

namespace dyndtw {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
    s += ".0";
  }
  return s;
}

namespace {

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::EmptyInput:
    case Errc::CharacterOutOfRange:
    case Errc::ParseError:
    case Errc::IoError:
    case Errc::InfeasibleSpec:
      return 2;
    case Errc::PositionOutOfRange:
    case Errc::WouldEmptyString:
    case Errc::NotABoundaryCell:
      return 3;
    case Errc::BoundViolated:
      return 4;
  }
  return 2;
}

void print_path(std::ostream& out, const WarpingPath& p) {
  for (const auto& [i, j] : p.steps) out << i << ' ' << j << '\n';
}

// Verifies every stored cell against the dense oracle; throws BoundViolated
// on the first mismatch.
void verify_against_oracle(const SparseDs& ds) {
  DenseDp d = dense_dtw(ds.a(), ds.b());
  DenseDr r = dense_dr(d);
  for (const DumpCell& c : ds.dump_cells()) {
    const DrCell& want = r.at(c.i, c.j);
    if (want.u != c.u || want.l != c.l) {
      throw Error(Errc::BoundViolated,
                  "verification failed at (" + std::to_string(c.i) + "," +
                      std::to_string(c.j) + ")");
    }
  }
  if (ds.value() != d.at(d.m(), d.n())) {
    throw Error(Errc::BoundViolated, "verification failed at the distance value");
  }
  std::string audit = ds.audit_structure();
  if (!audit.empty()) {
    throw Error(Errc::BoundViolated, "structure audit failed: " + audit);
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("DYNDTW_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "DYNDTW_SEED is not an integer");
    }
  }
  return 1;
}

int cmd_dtw(const std::string& a_path, const std::string& b_path, bool with_path,
            std::ostream& out) {
  RleString a = read_sequence_file(a_path);
  RleString b = read_sequence_file(b_path);
  DenseDp d = dense_dtw(a, b);
  Cost sqdist = d.at(d.m(), d.n());
  out << sqdist << ' ' << format_double(std::sqrt(static_cast<double>(sqdist))) << '\n';
  if (with_path) print_path(out, backtrack_path(d, a, b));
  return 0;
}

int cmd_session(const std::string& a_path, const std::string& b_path,
                const std::string& script_path, bool verify, std::ostream& out) {
  RleString a = read_sequence_file(a_path);
  RleString b = read_sequence_file(b_path);
  std::vector<ScriptLine> script = read_edit_script(script_path);
  SparseDs ds = build_ds(a, b);
  if (verify) verify_against_oracle(ds);
  UpdateStats last{};
  for (const ScriptLine& line : script) {
    switch (line.kind) {
      case ScriptLine::Kind::Edit:
        try {
          last = line.op.is_run_kind() ? apply_batched_edit(ds, line.op)
                                       : apply_edit(ds, line.op);
        } catch (const Error& e) {
          throw Error(e.code(),
                      "line " + std::to_string(line.line_no) + ": " + e.what());
        }
        if (verify) verify_against_oracle(ds);
        break;
      case ScriptLine::Kind::Query: {
        Cost v = ds.value();
        out << v << ' ' << format_double(std::sqrt(static_cast<double>(v))) << '\n';
        break;
      }
      case ScriptLine::Kind::Path:
        print_path(out, ds.path());
        break;
      case ScriptLine::Kind::Stats:
        out << "chg " << last.chg << " touched " << last.cells_touched << " structural "
            << last.structural_cells << '\n';
        break;
    }
  }
  return 0;
}

int cmd_gen(const std::string& mode, std::int64_t len, std::int64_t rle,
            std::int64_t alphabet, std::uint64_t seed, std::int64_t big_m, std::int64_t big_n,
            std::int64_t k, std::int64_t l, const std::string& out_path, std::ostream& out) {
  if (mode == "random") {
    RleString s = gen_random(RandomSpec{len, rle, alphabet, seed});
    write_sequence_file(out_path, s);
    out << "wrote " << out_path << " (m=" << s.length() << " M=" << s.run_count() << ")\n";
    return 0;
  }
  if (mode == "adversarial") {
    auto [a, b] = gen_adversarial(AdversarialSpec{big_m, big_n, k, l});
    write_sequence_file(out_path + ".A", a);
    write_sequence_file(out_path + ".B", b);
    out << "wrote " << out_path << ".A (m=" << a.length() << " M=" << a.run_count() << ")\n";
    out << "wrote " << out_path << ".B (n=" << b.length() << " N=" << b.run_count() << ")\n";
    return 0;
  }
  throw Error(Errc::ParseError, "unknown --mode " + mode);
}

int cmd_bench(const std::string& experiment, BenchConfig cfg, const AdversarialSpec& adv,
              const std::string& edit_str, const std::string& out_path, std::ostream& out) {
  if (!edit_str.empty()) {
    std::vector<ScriptLine> lines = parse_edit_script(edit_str);
    if (lines.size() != 1 || lines[0].kind != ScriptLine::Kind::Edit) {
      throw Error(Errc::ParseError, "--edit expects a single edit command");
    }
    cfg.edit = lines[0].op;
  }
  std::string csv;
  if (experiment == "1") {
    csv = run_experiment_1(cfg);
  } else if (experiment == "2") {
    csv = run_experiment_2(cfg);
  } else if (experiment == "adversarial") {
    TrialRecord rec = run_adversarial(adv);
    std::ostringstream ss;
    ss << kTrialCsvHeader << '\n' << trial_csv_row(rec) << '\n';
    csv = ss.str();
  } else {
    throw Error(Errc::ParseError, "unknown --experiment " + experiment);
  }
  if (out_path.empty()) {
    out << csv;
  } else {
    std::ofstream f(out_path);
    if (!f) throw Error(Errc::IoError, "cannot open " + out_path + " for writing");
    f << csv;
    out << "wrote " << out_path << '\n';
  }
  return 0;
}

int cmd_audit(const std::string& a_path, const std::string& b_path, const std::string& edit_str,
              std::ostream& out) {
  RleString a = read_sequence_file(a_path);
  RleString b = read_sequence_file(b_path);
  std::vector<ScriptLine> lines = parse_edit_script(edit_str);
  if (lines.size() != 1 || lines[0].kind != ScriptLine::Kind::Edit) {
    throw Error(Errc::ParseError, "audit expects a single edit command");
  }
  SparseDs ds = build_ds(a, b);
  std::vector<DumpCell> before = ds.dump_cells();
  UpdateStats st = lines[0].op.is_run_kind() ? apply_batched_edit(ds, lines[0].op)
                                             : apply_edit(ds, lines[0].op);
  std::vector<DumpCell> after = ds.dump_cells();

  std::map<std::pair<std::int64_t, std::int64_t>, DumpCell> old_at;
  for (const DumpCell& c : before) old_at[{c.i, c.j}] = c;
  std::int64_t count = 0;
  for (const DumpCell& c : after) {
    std::int64_t jold = (c.j < st.canonical_pos) ? c.j : c.j + st.ell;
    auto it = (jold >= 1) ? old_at.find({c.i, jold}) : old_at.end();
    if (it == old_at.end()) {
      out << c.i << ',' << c.j << ",new," << c.u << ',' << c.l << '\n';
      ++count;
    } else if (it->second.u != c.u || it->second.l != c.l) {
      out << c.i << ',' << c.j << ',' << it->second.u << ',' << it->second.l << ',' << c.u
          << ',' << c.l << '\n';
      ++count;
    }
  }
  out << "diff " << count << '\n';
  out << "stats_chg " << st.chg << '\n';
  if (count != st.chg) {
    throw Error(Errc::BoundViolated, "audit diff disagrees with stats.chg");
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dynamic time warping under string edits"};
  app.require_subcommand(1);

  // dtw
  std::string a_path, b_path;
  bool with_path = false;
  CLI::App* dtw = app.add_subcommand("dtw", "squared and plain DTW distance of two files");
  dtw->add_option("a", a_path, "sequence file A")->required();
  dtw->add_option("b", b_path, "sequence file B")->required();
  dtw->add_flag("--path", with_path, "also print an optimal warping path");

  // session
  std::string script_path;
  bool verify = false;
  CLI::App* session = app.add_subcommand("session", "apply an edit script to B");
  session->add_option("a", a_path, "sequence file A")->required();
  session->add_option("b", b_path, "sequence file B")->required();
  session->add_option("script", script_path, "edit script file")->required();
  session->add_flag("--verify", verify, "cross-check every step against the dense oracle");

  // gen
  std::string mode = "random", out_path;
  std::int64_t len = 100, rle = 10, alphabet = 26, big_m = 20, big_n = 20, kk = 5, ll = 5;
  std::uint64_t seed = 0;
  bool seed_given = false;
  CLI::App* gen = app.add_subcommand("gen", "generate instance files");
  gen->add_option("--mode", mode, "random|adversarial");
  gen->add_option("--m", len, "length (random mode)");
  gen->add_option("--M", rle, "RLE size (random) / A run count (adversarial)");
  gen->add_option("--alphabet", alphabet, "alphabet size (random mode)");
  gen->add_option("--seed", seed, "seed (default: DYNDTW_SEED or 1)")
      ->each([&](const std::string&) { seed_given = true; });
  gen->add_option("--N", big_n, "B run count (adversarial mode)");
  gen->add_option("--k", kk, "A exponent (adversarial mode)");
  gen->add_option("--l", ll, "B exponent (adversarial mode)");
  gen->add_option("--out", out_path, "output path (adversarial: .A/.B suffixes)")->required();

  // bench
  std::string experiment = "1", edit_str, bench_out;
  BenchConfig cfg;
  AdversarialSpec adv{20, 20, 5, 5};
  CLI::App* bench = app.add_subcommand("bench", "benchmark experiments, CSV output");
  bench->add_option("--experiment", experiment, "1|2|adversarial");
  std::uint64_t bench_seed = 0;
  bool bench_seed_given = false;
  bench->add_option("--seed", bench_seed, "seed")
      ->each([&](const std::string&) { bench_seed_given = true; });
  bench->add_option("--trials", cfg.trials, "trials per parameter point");
  bench->add_option("--alphabet", cfg.alphabet, "alphabet size");
  bench->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
  bench->add_option("--e1-rle", cfg.e1_rle, "experiment 1: fixed RLE size");
  bench->add_option("--e1-len-min", cfg.e1_len_min, "experiment 1: min length");
  bench->add_option("--e1-len-max", cfg.e1_len_max, "experiment 1: max length");
  bench->add_option("--e1-len-step", cfg.e1_len_step, "experiment 1: length step");
  bench->add_option("--e2-len", cfg.e2_len, "experiment 2: fixed length");
  bench->add_option("--e2-rle-min", cfg.e2_rle_min, "experiment 2: min RLE size");
  bench->add_option("--e2-rle-max", cfg.e2_rle_max, "experiment 2: max RLE size");
  bench->add_option("--e2-rle-step", cfg.e2_rle_step, "experiment 2: RLE step");
  bench->add_option("--edit", edit_str, "edit command (default: del 1)");
  bench->add_option("--M", adv.run_count_a, "adversarial: A run count");
  bench->add_option("--N", adv.run_count_b, "adversarial: B run count");
  bench->add_option("--k", adv.exp_a, "adversarial: A exponent");
  bench->add_option("--l", adv.exp_b, "adversarial: B exponent");
  bench->add_option("--out", bench_out, "CSV output path (default: stdout)");

  // audit
  std::string edit_arg;
  CLI::App* audit = app.add_subcommand("audit", "dump-diff change count for one edit");
  audit->add_option("a", a_path, "sequence file A")->required();
  audit->add_option("b", b_path, "sequence file B")->required();
  audit->add_option("edit", edit_arg, "edit command, e.g. 'del 1'")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (dtw->parsed()) return cmd_dtw(a_path, b_path, with_path, out);
    if (session->parsed()) return cmd_session(a_path, b_path, script_path, verify, out);
    if (gen->parsed()) {
      return cmd_gen(mode, len, rle, alphabet, seed_given ? seed : default_seed(), big_m,
                     big_n, kk, ll, out_path, out);
    }
    if (bench->parsed()) {
      cfg.seed = bench_seed_given ? bench_seed : default_seed();
      return cmd_bench(experiment, cfg, adv, edit_str, bench_out, out);
    }
    if (audit->parsed()) return cmd_audit(a_path, b_path, edit_arg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace dyndtw
