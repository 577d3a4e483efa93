// scratch reproducer (not part of the test suite)
#include <iostream>

#include "dyndtw/dynamic_update.hpp"
#include "dyndtw/instances.hpp"
#include "dyndtw/oracle.hpp"
#include "dyndtw/sparse_ds.hpp"

using namespace dyndtw;

namespace {
RleString random_rle(Rng& rng, std::int64_t max_len, std::int64_t sigma) {
  RandomSpec s{rng.range(1, max_len), 0, sigma, rng.next()};
  s.rle_size = rng.range(1, s.length);
  return gen_random(s);
}
EditOp random_edit(Rng& rng, std::int64_t n, std::int64_t sigma) {
  for (;;) {
    switch (rng.range(0, 2)) {
      case 0:
        return EditOp::insert_char(rng.range(1, n + 1), rng.range(0, sigma - 1));
      case 1:
        if (n <= 1) continue;
        return EditOp::delete_char(rng.range(1, n));
      default:
        return EditOp::substitute_char(rng.range(1, n), rng.range(0, sigma - 1));
    }
  }
}
void dump_seq(const char* name, const RleString& s) {
  std::cout << name << " =";
  for (Character c : s.flat()) std::cout << ' ' << c;
  std::cout << '\n';
}
std::string describe(const EditOp& op) {
  switch (op.kind) {
    case EditKind::InsertChar:
      return "ins " + std::to_string(op.pos) + " " + std::to_string(op.ch);
    case EditKind::DeleteChar:
      return "del " + std::to_string(op.pos);
    default:
      return "sub " + std::to_string(op.pos) + " " + std::to_string(op.ch);
  }
}
}  // namespace

int main() {
  Rng rng(101);
  for (int inst = 0; inst < 150; ++inst) {
    std::int64_t sigma = rng.range(2, inst % 3 == 0 ? 2 : 4);
    RleString a = random_rle(rng, 18, sigma);
    RleString b = random_rle(rng, 18, sigma);
    SparseDs ds = build_ds(a, b);
    for (int step = 0; step < 12; ++step) {
      EditOp op = random_edit(rng, ds.n(), sigma);
      RleString b_before = ds.b();
      UpdateStats st = apply_edit(ds, op);
      std::string audit = ds.audit_structure();
      bool value_bad = false;
      std::string value_detail;
      DenseDp d = dense_dtw(ds.a(), ds.b());
      DenseDr r = dense_dr(d);
      for (const DumpCell& c : ds.dump_cells()) {
        if (c.u != r.at(c.i, c.j).u || c.l != r.at(c.i, c.j).l) {
          value_bad = true;
          value_detail += "(" + std::to_string(c.i) + "," + std::to_string(c.j) + ") has (" +
                          std::to_string(c.u) + "," + std::to_string(c.l) + ") want (" +
                          std::to_string(r.at(c.i, c.j).u) + "," +
                          std::to_string(r.at(c.i, c.j).l) + ")\n";
        }
      }
      if (ds.value() != d.at(d.m(), d.n())) value_bad = true;
      if (!audit.empty() || value_bad) {
        std::cout << "FAIL inst " << inst << " step " << step << " op " << describe(op)
                  << " p=" << st.canonical_pos << " ell=" << st.ell << '\n';
        dump_seq("A ", ds.a());
        dump_seq("Bp", b_before);
        dump_seq("B'", ds.b());
        if (value_bad) std::cout << "VALUES WRONG\n" << value_detail;
        std::cout << audit;
        return 1;
      }
    }
  }
  std::cout << "clean\n";
  return 0;
}
