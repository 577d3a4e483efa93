#include "dyndtw/sparse_ds.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace dyndtw {

SparseDs::SparseDs(RleString a, RleString b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.length() == 0 || b_.length() == 0) throw Error(Errc::EmptyInput, "empty input");
  build_row_info();
  build_fresh();
  compute_all_values();
  set_all_diag_links();
}

Handle SparseDs::new_cell() {
  ++live_cells_;
  if (!free_cells_.empty()) {
    Handle h = free_cells_.back();
    free_cells_.pop_back();
    cells_[h] = DsCell{};
    return h;
  }
  cells_.push_back(DsCell{});
  return static_cast<Handle>(cells_.size() - 1);
}

void SparseDs::free_cell(Handle h) {
  --live_cells_;
  cells_[h] = DsCell{};
  cells_[h].row = -1;
  free_cells_.push_back(h);
}

std::int32_t SparseDs::new_col_slot() {
  if (!free_col_slots_.empty()) {
    std::int32_t s = free_col_slots_.back();
    free_col_slots_.pop_back();
    col_slots_[static_cast<std::size_t>(s)] = DsColumn{};
    col_slots_[static_cast<std::size_t>(s)].alive = true;
    return s;
  }
  col_slots_.push_back(DsColumn{});
  col_slots_.back().alive = true;
  return static_cast<std::int32_t>(col_slots_.size() - 1);
}

void SparseDs::free_col_slot(std::int32_t s) {
  col_slots_[static_cast<std::size_t>(s)] = DsColumn{};
  free_col_slots_.push_back(s);
}

Handle SparseDs::cell_at(std::int64_t i, std::int64_t j) const {
  if (i < 1 || i > m() || j < 1 || j > n()) return kNullHandle;
  const DsColumn& c = col_at(j);
  if (c.stored) {
    if (c.cells.size() != static_cast<std::size_t>(m())) return kNullHandle;
    return c.cells[static_cast<std::size_t>(i - 1)];
  }
  std::int32_t ord = row_ord_[static_cast<std::size_t>(i)];
  if (ord < 0 || static_cast<std::size_t>(ord) >= c.cells.size()) return kNullHandle;
  return c.cells[static_cast<std::size_t>(ord)];
}

Handle SparseDs::diag_target(std::int64_t i, std::int64_t j) const {
  if (i >= m() || j >= n()) return kNullHandle;
  std::int64_t gv = bottom_row_at_or_after(i + 1) - i;
  std::int64_t gh = right_col_at_or_after(j + 1) - j;
  std::int64_t g = std::min(gv, gh);
  return cell_at(i + g, j + g);
}

void SparseDs::build_row_info() {
  const std::int64_t m = a_.length();
  stored_rows_.clear();
  row_ord_.assign(static_cast<std::size_t>(m + 1), -1);
  for (std::int64_t r = 0; r < a_.run_count(); ++r) {
    std::int32_t top = static_cast<std::int32_t>(a_.run_first(r));
    std::int32_t bot = static_cast<std::int32_t>(a_.run_last(r));
    stored_rows_.push_back(top);
    if (bot != top) stored_rows_.push_back(bot);
  }
  for (std::size_t k = 0; k < stored_rows_.size(); ++k) {
    row_ord_[static_cast<std::size_t>(stored_rows_[k])] = static_cast<std::int32_t>(k);
  }
}

void SparseDs::build_fresh() {
  const std::int64_t m = a_.length(), n = b_.length();
  cells_.clear();
  free_cells_.clear();
  col_slots_.clear();
  free_col_slots_.clear();
  col_order_.clear();
  live_cells_ = 0;

  std::int64_t prev_stored_j = 0;
  for (std::int64_t j = 1; j <= n; ++j) {
    std::int64_t run = b_.run_of(j);
    bool stored = (j == b_.run_first(run) || j == b_.run_last(run));
    std::int32_t slot = new_col_slot();
    DsColumn& c = col(slot);
    c.index = static_cast<std::int32_t>(j);
    c.run = static_cast<std::int32_t>(run);
    c.stored = stored;
    col_order_.push_back(slot);

    if (stored) {
      c.cells.resize(static_cast<std::size_t>(m));
      for (std::int64_t i = 1; i <= m; ++i) {
        Handle h = new_cell();
        c.cells[static_cast<std::size_t>(i - 1)] = h;
        cell(h).row = static_cast<std::int32_t>(i);
        cell(h).col_slot = slot;
      }
    } else {
      c.cells.resize(stored_rows_.size());
      for (std::size_t k = 0; k < stored_rows_.size(); ++k) {
        Handle h = new_cell();
        c.cells[k] = h;
        cell(h).row = stored_rows_[k];
        cell(h).col_slot = slot;
      }
    }

    // vertical chain
    for (std::size_t k = 1; k < c.cells.size(); ++k) {
      cell(c.cells[k - 1]).down = c.cells[k];
      cell(c.cells[k]).up = c.cells[k - 1];
    }
    // horizontal links to the previous column (per stored row) or previous
    // stored column (cells on non-stored rows)
    if (j > 1) {
      const DsColumn& pc = col_at(j - 1);
      for (Handle h : c.cells) {
        std::int64_t i = cell(h).row;
        Handle lh;
        if (pc.stored) {
          lh = pc.cells[static_cast<std::size_t>(i - 1)];
        } else if (row_ord_[static_cast<std::size_t>(i)] >= 0) {
          lh = pc.cells[static_cast<std::size_t>(row_ord_[static_cast<std::size_t>(i)])];
        } else {
          // non-stored row: nearest stored column to the left
          lh = col_at(prev_stored_j).cells[static_cast<std::size_t>(i - 1)];
        }
        cell(h).left = lh;
        cell(lh).right = h;
      }
    }
    if (stored) prev_stored_j = j;
  }
}

void SparseDs::compute_all_values() {
  const std::int64_t m = a_.length(), n = b_.length();
  const std::int64_t M = a_.run_count(), N = b_.run_count();

  // Transient dense rows/columns of D along every stored row/column.
  std::vector<std::vector<Cost>> row_d(stored_rows_.size());
  for (auto& v : row_d) v.assign(static_cast<std::size_t>(n + 1), 0);
  // colD indexed by stored-column ordinal; build ordinal map per column index
  std::vector<std::int32_t> col_ord(static_cast<std::size_t>(n + 1), -1);
  std::int32_t n_stored_cols = 0;
  for (std::int64_t j = 1; j <= n; ++j) {
    if (col_at(j).stored) col_ord[static_cast<std::size_t>(j)] = n_stored_cols++;
  }
  std::vector<std::vector<Cost>> col_d(static_cast<std::size_t>(n_stored_cols));
  for (auto& v : col_d) v.assign(static_cast<std::size_t>(m + 1), 0);

  auto rd = [&](std::int64_t i, std::int64_t j) -> Cost& {
    return row_d[static_cast<std::size_t>(row_ord_[static_cast<std::size_t>(i)])]
                [static_cast<std::size_t>(j)];
  };
  auto cd = [&](std::int64_t i, std::int64_t j) -> Cost& {
    return col_d[static_cast<std::size_t>(col_ord[static_cast<std::size_t>(j)])]
                [static_cast<std::size_t>(i)];
  };
  auto set_cell = [&](std::int64_t i, std::int64_t j, Cost d, Cost d_up, Cost d_left) {
    Handle h = cell_at(i, j);
    assert(h != kNullHandle);
    cell(h).u = (i > 1) ? d - d_up : 0;
    cell(h).l = (j > 1) ? d - d_left : 0;
    if (row_stored(i)) rd(i, j) = d;
    if (col_at(j).stored) cd(i, j) = d;
  };

  for (std::int64_t bi = 0; bi < M; ++bi) {
    const std::int64_t it = a_.run_first(bi), ib = a_.run_last(bi);
    const Character ca = a_.runs()[static_cast<std::size_t>(bi)].ch;
    for (std::int64_t bj = 0; bj < N; ++bj) {
      const std::int64_t jl = b_.run_first(bj), jr = b_.run_last(bj);
      const Character cb = b_.runs()[static_cast<std::size_t>(bj)].ch;
      const Cost box_sq = sq(ca, cb);

      // In-box closed form for D anchored at this box's top row / left column.
      auto boxD = [&](std::int64_t i, std::int64_t j) -> Cost {
        std::int64_t t = i - it, s = j - jl;
        std::int64_t d = std::min(s, t);
        if (t >= s) return cd(it + (t - s), jl) + d * box_sq;
        return rd(it, jl + (s - t)) + d * box_sq;
      };

      // top row segment
      for (std::int64_t j = jl; j <= jr; ++j) {
        Cost d, du = 0, dl = 0;
        Cost cost = sq(a_.at(it), b_.at(j));
        if (it == 1 && j == 1) {
          d = cost;
        } else if (it == 1) {
          dl = rd(1, j - 1);
          d = dl + cost;
        } else if (j == 1) {
          du = rd(it - 1, 1);
          d = du + cost;
        } else {
          du = rd(it - 1, j);
          dl = rd(it, j - 1);
          Cost ddiag = rd(it - 1, j - 1);
          d = std::min({du, dl, ddiag}) + cost;
        }
        set_cell(it, j, d, du, dl);
      }
      // left column segment
      for (std::int64_t i = it + 1; i <= ib; ++i) {
        Cost d, du, dl = 0;
        Cost cost = sq(a_.at(i), b_.at(jl));
        du = cd(i - 1, jl);
        if (jl == 1) {
          d = du + cost;
        } else {
          dl = cd(i, jl - 1);
          Cost ddiag = cd(i - 1, jl - 1);
          d = std::min({du, dl, ddiag}) + cost;
        }
        set_cell(i, jl, d, du, dl);
      }
      // bottom row segment
      if (ib > it) {
        for (std::int64_t j = jl + 1; j <= jr; ++j) {
          Cost du = boxD(ib - 1, j);
          Cost ddiag = boxD(ib - 1, j - 1);
          Cost dl = rd(ib, j - 1);
          Cost d = std::min({du, dl, ddiag}) + box_sq;
          set_cell(ib, j, d, du, dl);
        }
      }
      // right column segment
      if (jr > jl) {
        for (std::int64_t i = it + 1; i <= ib; ++i) {
          Cost dl = boxD(i, jr - 1);
          Cost ddiag = boxD(i - 1, jr - 1);
          Cost du = cd(i - 1, jr);
          Cost d = std::min({du, dl, ddiag}) + box_sq;
          set_cell(i, jr, d, du, dl);
        }
      }
    }
  }
}

void SparseDs::set_all_diag_links() {
  for (std::int64_t j = 1; j <= n(); ++j) {
    const DsColumn& c = col_at(j);
    for (Handle h : c.cells) {
      cell(h).diag = diag_target(cell(h).row, j);
    }
  }
}

Cost SparseDs::value() const {
  Cost d = sq(a_.at(1), b_.at(1));
  Handle h = cell_at(1, 1);
  for (std::int64_t j = 2; j <= n(); ++j) {
    h = cell(h).right;
    d += cell(h).l;
  }
  for (std::int64_t i = 2; i <= m(); ++i) {
    h = cell(h).down;
    d += cell(h).u;
  }
  return d;
}

DrCell SparseDs::cell_values_at(std::int64_t i, std::int64_t j) const {
  if (i < 1 || i > m() || j < 1 || j > n()) {
    throw Error(Errc::PositionOutOfRange, "cell out of range");
  }
  Handle h = cell_at(i, j);
  if (h == kNullHandle) throw Error(Errc::NotABoundaryCell, "interior cell");
  return DrCell{cell(h).u, cell(h).l};
}

bool SparseDs::is_stored(std::int64_t i, std::int64_t j) const {
  if (i < 1 || i > m() || j < 1 || j > n()) return false;
  return cell_at(i, j) != kNullHandle;
}

WarpingPath SparseDs::path() const {
  WarpingPath p;
  std::int64_t i = m(), j = n();
  p.steps.emplace_back(i, j);
  while (i > 1 || j > 1) {
    if (i == 1) {
      --j;
    } else if (j == 1) {
      --i;
    } else {
      std::int64_t it = a_.run_first(a_.run_of(i));
      std::int64_t jl = b_.run_first(b_.run_of(j));
      if (i > it && j > jl) {
        // strictly inside a box both ways: the diagonal predecessor is optimal
        --i;
        --j;
      } else {
        // on a top row or left column: all three predecessor values are
        // recoverable from stored differences
        Handle h = cell_at(i, j);
        assert(h != kNullHandle);
        Cost rel_up = -cell(h).u;     // D[i-1,j] - D[i,j]
        Cost rel_left = -cell(h).l;   // D[i,j-1] - D[i,j]
        Cost rel_diag;
        if (i == it) {
          Handle hu = cell(h).up;  // (i-1, j), stored: i-1 is a bottom row
          assert(hu != kNullHandle && cell(hu).row == i - 1);
          rel_diag = rel_up - cell(hu).l;
        } else {
          Handle hl = cell(h).left;  // (i, j-1), stored: j-1 is a right column
          assert(hl != kNullHandle);
          rel_diag = rel_left - cell(hl).u;
        }
        Cost best = std::min({rel_diag, rel_left, rel_up});
        if (rel_diag == best) {
          --i;
          --j;
        } else if (rel_left == best) {
          --j;
        } else {
          --i;
        }
      }
    }
    p.steps.emplace_back(i, j);
  }
  std::reverse(p.steps.begin(), p.steps.end());
  return p;
}

std::vector<DumpCell> SparseDs::dump_cells() const {
  std::vector<DumpCell> out;
  out.reserve(static_cast<std::size_t>(live_cells_));
  for (std::int64_t j = 1; j <= n(); ++j) {
    const DsColumn& c = col_at(j);
    for (Handle h : c.cells) {
      out.push_back(DumpCell{cell(h).row, j, cell(h).u, cell(h).l});
    }
  }
  std::sort(out.begin(), out.end(), [](const DumpCell& x, const DumpCell& y) {
    return std::tie(x.i, x.j) < std::tie(y.i, y.j);
  });
  return out;
}

std::string SparseDs::dump_csv() const {
  std::ostringstream out;
  out << "i,j,U,L\n";
  for (const DumpCell& c : dump_cells()) {
    out << c.i << ',' << c.j << ',' << c.u << ',' << c.l << '\n';
  }
  return out.str();
}

std::string SparseDs::audit_structure() const {
  std::ostringstream err;
  const std::int64_t m = a_.length(), n = b_.length();
  if (static_cast<std::int64_t>(col_order_.size()) != n) {
    return "column order size mismatch";
  }
  // storedness and stamps per column
  std::int64_t expected = 0, r_rows = static_cast<std::int64_t>(stored_rows_.size());
  std::int64_t c_cols = 0;
  for (std::int64_t j = 1; j <= n; ++j) {
    const DsColumn& c = col_at(j);
    std::int64_t run = b_.run_of(j);
    bool stored = (j == b_.run_first(run) || j == b_.run_last(run));
    if (!c.alive) err << "dead column at j=" << j << "\n";
    if (c.index != j) err << "bad index stamp at j=" << j << " (" << c.index << ")\n";
    if (c.run != run) err << "bad run stamp at j=" << j << "\n";
    if (c.stored != stored) err << "bad storedness at j=" << j << "\n";
    if (stored) ++c_cols;
    std::size_t want = stored ? static_cast<std::size_t>(m) : stored_rows_.size();
    if (c.cells.size() != want) err << "bad cell vector size at j=" << j << "\n";
    for (std::size_t k = 0; k < c.cells.size(); ++k) {
      Handle h = c.cells[k];
      if (h == kNullHandle || h >= cells_.size()) {
        err << "bad handle at j=" << j << "\n";
        continue;
      }
      const DsCell& cc = cell(h);
      std::int64_t want_row = stored ? static_cast<std::int64_t>(k + 1) : stored_rows_[k];
      if (cc.row != want_row) err << "bad row backref at (" << want_row << "," << j << ")\n";
      if (col_order_[static_cast<std::size_t>(j - 1)] != cc.col_slot) {
        err << "bad col backref at (" << cc.row << "," << j << ")\n";
      }
    }
  }
  expected = r_rows * n + c_cols * m - r_rows * c_cols;
  if (live_cells_ != expected) {
    err << "cell count " << live_cells_ << " != expected " << expected << "\n";
  }
  // links
  for (std::int64_t j = 1; j <= n; ++j) {
    const DsColumn& c = col_at(j);
    for (Handle h : c.cells) {
      const DsCell& cc = cell(h);
      std::int64_t i = cc.row;
      // expected neighbors
      auto expect_left = [&]() -> Handle {
        if (row_stored(i)) return j > 1 ? cell_at(i, j - 1) : kNullHandle;
        for (std::int64_t q = j - 1; q >= 1; --q) {
          if (col_at(q).stored) return cell_at(i, q);
        }
        return kNullHandle;
      };
      auto expect_right = [&]() -> Handle {
        if (row_stored(i)) return j < n ? cell_at(i, j + 1) : kNullHandle;
        for (std::int64_t q = j + 1; q <= n; ++q) {
          if (col_at(q).stored) return cell_at(i, q);
        }
        return kNullHandle;
      };
      auto expect_up = [&]() -> Handle {
        if (c.stored) return i > 1 ? cell_at(i - 1, j) : kNullHandle;
        std::int32_t ord = row_ord_[static_cast<std::size_t>(i)];
        return ord > 0 ? cell_at(stored_rows_[static_cast<std::size_t>(ord - 1)], j)
                       : kNullHandle;
      };
      auto expect_down = [&]() -> Handle {
        if (c.stored) return i < m ? cell_at(i + 1, j) : kNullHandle;
        std::int32_t ord = row_ord_[static_cast<std::size_t>(i)];
        return static_cast<std::size_t>(ord + 1) < stored_rows_.size()
                   ? cell_at(stored_rows_[static_cast<std::size_t>(ord + 1)], j)
                   : kNullHandle;
      };
      if (cc.left != expect_left()) err << "bad left link at (" << i << "," << j << ")\n";
      if (cc.right != expect_right()) err << "bad right link at (" << i << "," << j << ")\n";
      if (cc.up != expect_up()) err << "bad up link at (" << i << "," << j << ")\n";
      if (cc.down != expect_down()) err << "bad down link at (" << i << "," << j << ")\n";
      if (cc.diag != diag_target(i, j)) err << "bad diag link at (" << i << "," << j << ")\n";
      // reciprocity
      if (cc.left != kNullHandle && cell(cc.left).right != h) {
        err << "left reciprocity broken at (" << i << "," << j << ")\n";
      }
      if (cc.right != kNullHandle && cell(cc.right).left != h) {
        err << "right reciprocity broken at (" << i << "," << j << ")\n";
      }
      if (cc.up != kNullHandle && cell(cc.up).down != h) {
        err << "up reciprocity broken at (" << i << "," << j << ")\n";
      }
      if (cc.down != kNullHandle && cell(cc.down).up != h) {
        err << "down reciprocity broken at (" << i << "," << j << ")\n";
      }
    }
  }
  return err.str();
}

}  // namespace dyndtw
