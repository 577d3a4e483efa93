#include "dyndtw/dynamic_update.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <unordered_set>
#include <vector>

namespace dyndtw {

namespace {

struct DeltaEntry {
  std::int64_t idx = 0;  // column (top/bottom lists) or row (left/right lists)
  Cost dprime = 0;       // new dense value at that boundary cell
};

using DeltaList = std::vector<DeltaEntry>;

struct PendingWrite {
  Handle h = kNullHandle;
  Cost u = 0, l = 0;
};

void sort_delta(DeltaList& d) {
  std::sort(d.begin(), d.end(),
            [](const DeltaEntry& x, const DeltaEntry& y) { return x.idx < y.idx; });
}

}  // namespace

// One edit as a normalized splice B' = B[1..p-1] + c^ins_len + B[p+del..n].
// Stages: structural column ops; full value sweep of the changed middle
// columns and of the first surviving column; then box-by-box delta
// propagation rightwards.
class Updater {
 public:
  Updater(SparseDs& ds, std::int64_t pos, std::int64_t del, Character ins_ch,
          std::int64_t ins_len)
      : ds_(ds), p_(pos), del_(del), ins_ch_(ins_ch), ins_len_(ins_len), n_old_(ds.n()) {}

  UpdateStats run();

 private:
  std::int64_t m() const { return ds_.m(); }
  std::int64_t a_runs() const { return ds_.a_.run_count(); }
  bool row_stored(std::int64_t i) const { return ds_.row_stored(i); }
  std::int64_t row_ord(std::int64_t i) const {
    return ds_.row_ord_[static_cast<std::size_t>(i)];
  }

  Cost cell_u(std::int64_t i, std::int64_t j) {
    Handle h = ds_.cell_at(i, j);
    assert(h != kNullHandle);
    ++st_.cells_touched;
    return ds_.cell(h).u;
  }
  Cost cell_l(std::int64_t i, std::int64_t j) {
    Handle h = ds_.cell_at(i, j);
    assert(h != kNullHandle);
    ++st_.cells_touched;
    return ds_.cell(h).l;
  }

  void write_cell(Handle h, Cost u, Cost l) {
    ++st_.cells_touched;
    DsCell& c = ds_.cell(h);
    if (!chg_counted_.count(h) && (c.u != u || c.l != l)) {
      ++st_.chg;
      chg_counted_.insert(h);
    }
    c.u = u;
    c.l = l;
  }

  // ---------- old-geometry access ----------
  bool old_col_stored(std::int64_t jold) const {
    return old_col_stored_[static_cast<std::size_t>(jold)];
  }
  std::int64_t translate_old(std::int64_t jold) const {
    if (jold < p_) return jold;
    if (!middle_in_place_ && jold < p_ + del_) return -1;
    return jold - delta_;
  }
  DrCell old_dr(std::int64_t i, std::int64_t jold) const;

  // ---------- stages ----------
  void normalize();
  bool is_noop() const { return del_ == 0 && ins_len_ == 0; }
  void capture_old();
  void restructure();
  void fill_created_column_values(std::int64_t j);
  void fix_diag_links();
  void compute_values();

  void splice_cell_into_row(Handle h, std::int64_t i, std::int64_t j, std::int64_t left_j,
                            std::int64_t right_j);
  void find_stored_neighbors(std::int64_t j, std::int64_t& left_j, std::int64_t& right_j);
  void create_column(std::int64_t j, bool stored);
  void stitch_middle_rows();
  void destroy_column(std::int64_t j);
  void promote_column(std::int64_t j);
  void demote_column(std::int64_t j);
  void snapshot_column_as_old(std::int64_t jcur, std::int64_t jold);
  void unlink_cell(Handle h);
  void relink_column_diags(std::int64_t j);

  // ---------- value machinery ----------
  struct ColArrays {
    std::vector<Cost> u, l, d;
    std::vector<std::uint8_t> changed;
    void init(std::int64_t m) {
      u.assign(static_cast<std::size_t>(m + 1), 0);
      l.assign(static_cast<std::size_t>(m + 1), 0);
      d.assign(static_cast<std::size_t>(m + 1), 0);
      changed.assign(static_cast<std::size_t>(m + 1), 0);
    }
  };

  static void dr_step(Cost up_l, Cost left_u, Cost cost, std::int64_t i, std::int64_t j,
                      Cost& out_u, Cost& out_l) {
    if (i == 1 && j == 1) {
      out_u = 0;
      out_l = 0;
    } else if (i == 1) {
      out_u = 0;
      out_l = cost;
    } else if (j == 1) {
      out_u = cost;
      out_l = 0;
    } else {
      Cost z = std::min({up_l, left_u, Cost{0}}) + cost;
      out_u = z - up_l;
      out_l = z - left_u;
    }
  }

  void build_row1_d();
  Cost d_row1(std::int64_t x);
  const std::vector<Cost>& prefix_col_d(std::int64_t j);
  Cost left_of_p_u(std::int64_t i) { return old_dr(i, p_ - 1).u; }

  void sweep_col_p();
  void fill_zone_interior_rows();
  void build_zone_last();
  void sweep_seam();

  Cost zone_u(std::int64_t ord, std::int64_t x) const {
    return zone_u_[static_cast<std::size_t>(ord)][static_cast<std::size_t>(x - p_)];
  }
  Cost zone_l(std::int64_t ord, std::int64_t x) const {
    return zone_l_[static_cast<std::size_t>(ord)][static_cast<std::size_t>(x - p_)];
  }
  Cost zone_d(std::int64_t ord, std::int64_t x) const {
    return zone_d_[static_cast<std::size_t>(ord)][static_cast<std::size_t>(x - p_)];
  }

  struct BoxGeom {
    std::int64_t bi = 0, bj = 0;
    std::int64_t it = 0, ib = 0, jl = 0, jr = 0;
    Cost box_sq = 0;
  };
  BoxGeom box_geom(std::int64_t bi, std::int64_t bj) const {
    BoxGeom g;
    g.bi = bi;
    g.bj = bj;
    g.it = ds_.a_.run_first(bi);
    g.ib = ds_.a_.run_last(bi);
    g.jl = ds_.b_.run_first(bj);
    g.jr = ds_.b_.run_last(bj);
    g.box_sq = sq(ds_.a_.runs()[static_cast<std::size_t>(bi)].ch,
                  ds_.b_.runs()[static_cast<std::size_t>(bj)].ch);
    return g;
  }

  // D' anchors inside the zone-run box (used while filling created columns)
  struct Anchors {
    BoxGeom g;
    std::int64_t lo = 0;
    std::vector<Cost> top_prefix;               // D'[it, x], x in [lo .. p-1]
    const std::vector<Cost>* left_d = nullptr;  // D'[., jl] when jl < p
  };
  Anchors make_anchors(const BoxGeom& g);
  Cost anchor_top_d(const Anchors& a, std::int64_t x);
  Cost anchor_left_d(const Anchors& a, std::int64_t i);
  Cost anchor_box_d(const Anchors& a, std::int64_t i, std::int64_t x);

  void process_seam_band();
  void seam_box_pass(const BoxGeom& g, const DeltaList& delta_b_above, DeltaList& delta_b_out,
                     DeltaList& delta_r_out);
  void standard_box_pass(const BoxGeom& g, const DeltaList& delta_b_above,
                         const DeltaList& delta_r_in, DeltaList& delta_b_out,
                         DeltaList& delta_r_out);
  void propagate_right(std::int64_t first_bj);

  SparseDs& ds_;
  UpdateStats st_;

  std::int64_t p_;
  std::int64_t del_;
  Character ins_ch_;
  std::int64_t ins_len_;
  std::int64_t delta_ = 0;
  std::int64_t n_old_;
  std::int64_t n_new_ = 0;
  std::int64_t q0_ = 0;    // first surviving column right of the middle
  std::int64_t zend_ = 0;  // last middle column
  bool middle_in_place_ = false;

  RleString b_old_;
  RleString b_new_;
  std::vector<bool> old_col_stored_;

  struct Snapshot {
    bool full = false;
    std::vector<Cost> u, l;
  };
  std::map<std::int64_t, Snapshot> snapshots_;  // keyed by OLD column index

  std::unordered_set<Handle> chg_counted_;
  std::unordered_set<Handle> fresh_handles_;

  std::vector<Cost> row1_d_;
  ColArrays col_p_;
  ColArrays zone_last_;
  ColArrays seam_;
  bool have_seam_ = false;

  std::vector<std::vector<Cost>> zone_u_, zone_l_, zone_d_;

  std::map<std::int64_t, std::vector<Cost>> prefix_col_d_cache_;

  std::vector<DeltaList> delta_r_;  // per A-run, carried across box columns
};

// -------------------- old values --------------------

DrCell Updater::old_dr(std::int64_t i, std::int64_t jold) const {
  assert(jold >= 1 && jold <= n_old_);
  auto it = snapshots_.find(jold);
  if (it != snapshots_.end()) {
    const Snapshot& s = it->second;
    if (s.full) {
      return DrCell{s.u[static_cast<std::size_t>(i - 1)],
                    s.l[static_cast<std::size_t>(i - 1)]};
    }
    std::int64_t ord = row_ord(i);
    if (ord >= 0) {
      return DrCell{s.u[static_cast<std::size_t>(ord)], s.l[static_cast<std::size_t>(ord)]};
    }
  } else if (row_stored(i) || old_col_stored(jold)) {
    std::int64_t jnew = translate_old(jold);
    assert(jnew >= 1);
    Handle h = ds_.cell_at(i, jnew);
    assert(h != kNullHandle);
    const DsCell& c = ds_.cell(h);
    return DrCell{c.u, c.l};
  }
  std::int64_t gv = ds_.bottom_row_at_or_after(i + 1) - i;
  std::int64_t gh = b_old_.run_last(b_old_.run_of(jold + 1)) - jold;
  std::int64_t g = std::min(gv, gh);
  assert(g >= 1);
  return old_dr(i + g, jold + g);
}

// -------------------- normalization --------------------

void Updater::normalize() {
  const std::vector<Character>& b = ds_.b_.flat();
  if (ins_len_ > 0 && del_ > 0) {
    while (del_ > 0 && ins_len_ > 0 && b[static_cast<std::size_t>(p_ - 1)] == ins_ch_) {
      ++p_;
      --del_;
      --ins_len_;
    }
    while (del_ > 0 && ins_len_ > 0 &&
           b[static_cast<std::size_t>(p_ + del_ - 2)] == ins_ch_) {
      --del_;
      --ins_len_;
    }
  }
  if (ins_len_ > 0 && del_ == 0) {
    while (p_ <= n_old_ && b[static_cast<std::size_t>(p_ - 1)] == ins_ch_) ++p_;
  } else if (ins_len_ == 0 && del_ > 0) {
    while (p_ + del_ <= n_old_ &&
           b[static_cast<std::size_t>(p_ - 1)] == b[static_cast<std::size_t>(p_ + del_ - 1)]) {
      ++p_;
    }
  }
  delta_ = del_ - ins_len_;
  n_new_ = n_old_ - delta_;
  q0_ = p_ + ins_len_;
  zend_ = p_ + ins_len_ - 1;
  middle_in_place_ = (delta_ == 0) && ins_len_ > 0;
  st_.canonical_pos = p_;
  st_.ell = delta_;
}

void Updater::capture_old() {
  b_old_ = ds_.b_;
  old_col_stored_.assign(static_cast<std::size_t>(n_old_ + 1), false);
  for (std::int64_t j = 1; j <= n_old_; ++j) {
    old_col_stored_[static_cast<std::size_t>(j)] = ds_.col_at(j).stored;
  }
  std::vector<Character> nb;
  nb.reserve(static_cast<std::size_t>(n_new_));
  const std::vector<Character>& b = ds_.b_.flat();
  nb.insert(nb.end(), b.begin(), b.begin() + (p_ - 1));
  nb.insert(nb.end(), static_cast<std::size_t>(ins_len_), ins_ch_);
  nb.insert(nb.end(), b.begin() + (p_ - 1 + del_), b.end());
  b_new_ = RleString::from_flat(std::move(nb));
}

// -------------------- structure --------------------

void Updater::snapshot_column_as_old(std::int64_t jcur, std::int64_t jold) {
  if (snapshots_.count(jold)) return;
  const DsColumn& c = ds_.col_at(jcur);
  Snapshot s;
  s.full = c.stored;
  s.u.reserve(c.cells.size());
  s.l.reserve(c.cells.size());
  for (Handle h : c.cells) {
    s.u.push_back(ds_.cell(h).u);
    s.l.push_back(ds_.cell(h).l);
  }
  snapshots_.emplace(jold, std::move(s));
}

void Updater::unlink_cell(Handle h) {
  DsCell& c = ds_.cell(h);
  if (c.left != kNullHandle) ds_.cell(c.left).right = c.right;
  if (c.right != kNullHandle) ds_.cell(c.right).left = c.left;
  if (c.up != kNullHandle) ds_.cell(c.up).down = c.down;
  if (c.down != kNullHandle) ds_.cell(c.down).up = c.up;
}

void Updater::find_stored_neighbors(std::int64_t j, std::int64_t& left_j,
                                    std::int64_t& right_j) {
  left_j = 0;
  right_j = 0;
  for (std::int64_t q = j - 1; q >= 1; --q) {
    if (ds_.col_at(q).stored) {
      left_j = q;
      break;
    }
  }
  if (left_j == 0) {
    for (std::int64_t q = j + 1; q <= ds_.n(); ++q) {
      if (ds_.col_at(q).stored) {
        right_j = q;
        break;
      }
    }
  }
}

void Updater::splice_cell_into_row(Handle h, std::int64_t i, std::int64_t j,
                                   std::int64_t left_j, std::int64_t right_j) {
  Handle lh = kNullHandle, rh = kNullHandle;
  if (row_stored(i)) {
    lh = (j > 1) ? ds_.cell_at(i, j - 1) : kNullHandle;
    if (lh != kNullHandle) {
      rh = ds_.cell(lh).right;
    } else if (j < ds_.n()) {
      rh = ds_.cell_at(i, j + 1);
    }
  } else {
    lh = (left_j >= 1) ? ds_.cell_at(i, left_j) : kNullHandle;
    if (lh != kNullHandle) {
      rh = ds_.cell(lh).right;
    } else if (right_j >= 1) {
      rh = ds_.cell_at(i, right_j);
    }
  }
  DsCell& c = ds_.cell(h);
  c.left = lh;
  c.right = rh;
  if (lh != kNullHandle) ds_.cell(lh).right = h;
  if (rh != kNullHandle) ds_.cell(rh).left = h;
}

void Updater::create_column(std::int64_t j, bool stored) {
  std::int32_t slot = ds_.col_order_[static_cast<std::size_t>(j - 1)];
  std::vector<std::int64_t> rows;
  if (stored) {
    for (std::int64_t i = 1; i <= m(); ++i) rows.push_back(i);
  } else {
    for (std::int32_t r : ds_.stored_rows_) rows.push_back(r);
  }
  {
    DsColumn& c = ds_.col(slot);
    c.stored = stored;
    c.cells.assign(rows.size(), kNullHandle);
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    Handle h = ds_.new_cell();
    ++st_.structural_cells;
    fresh_handles_.insert(h);
    DsCell& cc = ds_.cell(h);
    cc.row = static_cast<std::int32_t>(rows[k]);
    cc.col_slot = slot;
    ds_.col(slot).cells[k] = h;
  }
  DsColumn& c = ds_.col(slot);
  for (std::size_t k = 0; k < c.cells.size(); ++k) {
    ds_.cell(c.cells[k]).up = (k > 0) ? c.cells[k - 1] : kNullHandle;
    ds_.cell(c.cells[k]).down = (k + 1 < c.cells.size()) ? c.cells[k + 1] : kNullHandle;
  }
  // row links are stitched by the caller once every middle column exists
}

// Rebuilds the horizontal links across [p-1 .. q0] after the middle columns
// have been materialized.
void Updater::stitch_middle_rows() {
  const std::int64_t n = ds_.n();
  const std::int64_t lo = std::max<std::int64_t>(1, p_ - 1);
  const std::int64_t hi = std::min(q0_, n);
  // stored rows have a cell at every column
  for (std::int32_t r : ds_.stored_rows_) {
    for (std::int64_t j = lo; j < hi; ++j) {
      Handle a = ds_.cell_at(r, j);
      Handle b = ds_.cell_at(r, j + 1);
      assert(a != kNullHandle && b != kNullHandle);
      ds_.cell(a).right = b;
      ds_.cell(b).left = a;
    }
    if (p_ == 1 && hi >= 1) {
      Handle first = ds_.cell_at(r, 1);
      ds_.cell(first).left = kNullHandle;
    }
    if (hi == n && hi >= 1) {
      Handle last = ds_.cell_at(r, n);
      ds_.cell(last).right = kNullHandle;
    }
  }
  // cells on non-stored rows exist only in stored columns: chain the nearest
  // stored column left of the middle, the created stored middles, and the
  // nearest stored column at or right of q0
  std::vector<std::int64_t> chain;
  for (std::int64_t j = std::min(p_ - 1, n); j >= 1; --j) {
    if (ds_.col_at(j).stored) {
      chain.push_back(j);
      break;
    }
  }
  std::reverse(chain.begin(), chain.end());
  for (std::int64_t j = p_; j <= std::min(zend_, n); ++j) {
    if (ds_.col_at(j).stored) chain.push_back(j);
  }
  std::int64_t right_stored = 0;
  for (std::int64_t j = q0_; j <= n; ++j) {
    if (ds_.col_at(j).stored) {
      right_stored = j;
      break;
    }
  }
  if (right_stored > 0) chain.push_back(right_stored);
  if (chain.empty()) return;
  for (std::int64_t i = 1; i <= ds_.m(); ++i) {
    if (row_stored(i)) continue;
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      Handle a = ds_.cell_at(i, chain[k]);
      Handle b = ds_.cell_at(i, chain[k + 1]);
      assert(a != kNullHandle && b != kNullHandle);
      ds_.cell(a).right = b;
      ds_.cell(b).left = a;
    }
    if (chain.front() >= p_) {
      ds_.cell(ds_.cell_at(i, chain.front())).left = kNullHandle;
    }
    if (right_stored == 0) {
      ds_.cell(ds_.cell_at(i, chain.back())).right = kNullHandle;
    }
  }
}

void Updater::destroy_column(std::int64_t j) {
  DsColumn& c = ds_.col_at(j);
  for (Handle h : c.cells) {
    unlink_cell(h);
    chg_counted_.erase(h);
    fresh_handles_.erase(h);
    ds_.free_cell(h);
    ++st_.structural_cells;
  }
  c.cells.clear();
}

void Updater::promote_column(std::int64_t j) {
  std::int32_t slot = ds_.col_order_[static_cast<std::size_t>(j - 1)];
  std::vector<Handle> full(static_cast<std::size_t>(m()), kNullHandle);
  for (Handle h : ds_.col(slot).cells) {
    full[static_cast<std::size_t>(ds_.cell(h).row - 1)] = h;
  }
  std::int64_t left_j, right_j;
  find_stored_neighbors(j, left_j, right_j);
  for (std::int64_t i = 1; i <= m(); ++i) {
    if (full[static_cast<std::size_t>(i - 1)] != kNullHandle) continue;
    Handle h = ds_.new_cell();
    ++st_.structural_cells;
    fresh_handles_.insert(h);
    ds_.cell(h).row = static_cast<std::int32_t>(i);
    ds_.cell(h).col_slot = slot;
    full[static_cast<std::size_t>(i - 1)] = h;
    splice_cell_into_row(h, i, j, left_j, right_j);
  }
  DsColumn& c = ds_.col(slot);
  c.cells = std::move(full);
  c.stored = true;
  for (std::size_t k = 0; k < c.cells.size(); ++k) {
    ds_.cell(c.cells[k]).up = (k > 0) ? c.cells[k - 1] : kNullHandle;
    ds_.cell(c.cells[k]).down = (k + 1 < c.cells.size()) ? c.cells[k + 1] : kNullHandle;
  }
}

void Updater::demote_column(std::int64_t j) {
  std::int32_t slot = ds_.col_order_[static_cast<std::size_t>(j - 1)];
  std::vector<Handle> kept, doomed;
  kept.reserve(ds_.stored_rows_.size());
  for (std::int64_t i = 1; i <= m(); ++i) {
    Handle h = ds_.col(slot).cells[static_cast<std::size_t>(i - 1)];
    if (row_stored(i)) {
      kept.push_back(h);
    } else {
      doomed.push_back(h);
    }
  }
  for (Handle h : doomed) {
    unlink_cell(h);
    chg_counted_.erase(h);
    fresh_handles_.erase(h);
    ds_.free_cell(h);
    ++st_.structural_cells;
  }
  DsColumn& c = ds_.col(slot);
  c.cells = std::move(kept);
  c.stored = false;
  for (std::size_t k = 0; k < c.cells.size(); ++k) {
    ds_.cell(c.cells[k]).up = (k > 0) ? c.cells[k - 1] : kNullHandle;
    ds_.cell(c.cells[k]).down = (k + 1 < c.cells.size()) ? c.cells[k + 1] : kNullHandle;
  }
}

// Fresh cells (created or added by promotion) take the value the old table
// held at the corresponding coordinate; cells the old dump did not cover are
// counted as changed once, here.
void Updater::fill_created_column_values(std::int64_t j) {
  const DsColumn& c = ds_.col_at(j);
  std::int64_t jold = (j < p_) ? j : j + delta_;
  for (Handle h : c.cells) {
    if (!fresh_handles_.count(h)) continue;
    DsCell& cc = ds_.cell(h);
    std::int64_t i = cc.row;
    bool covered = jold >= 1 && jold <= n_old_ && (row_stored(i) || old_col_stored(jold));
    if (jold >= 1 && jold <= n_old_) {
      DrCell v = old_dr(i, jold);
      cc.u = v.u;
      cc.l = v.l;
    }
    if (!covered) {
      ++st_.chg;
      chg_counted_.insert(h);
    }
    ++st_.cells_touched;
  }
}

void Updater::restructure() {
  // snapshots of the vanishing middle, keyed by old index
  if (middle_in_place_) {
    for (std::int64_t j = p_; j <= zend_; ++j) snapshot_column_as_old(j, j);
  } else {
    for (std::int64_t j = p_; j < p_ + del_; ++j) snapshot_column_as_old(j, j);
  }

  if (!middle_in_place_) {
    for (std::int64_t j = p_ + del_ - 1; j >= p_; --j) {
      destroy_column(j);
      std::int32_t slot = ds_.col_order_[static_cast<std::size_t>(j - 1)];
      ds_.free_col_slot(slot);
      ds_.col_order_.erase(ds_.col_order_.begin() + (j - 1));
    }
    for (std::int64_t j = p_; j <= zend_; ++j) {
      std::int32_t slot = ds_.new_col_slot();
      ds_.col_order_.insert(ds_.col_order_.begin() + (j - 1), slot);
    }
  }

  ds_.b_ = b_new_;
  for (std::int64_t j = 1; j <= n_new_; ++j) {
    DsColumn& c = ds_.col_at(j);
    c.index = static_cast<std::int32_t>(j);
    c.run = static_cast<std::int32_t>(b_new_.run_of(j));
  }

  if (!middle_in_place_) {
    for (std::int64_t j = p_; j <= zend_; ++j) {
      std::int64_t r = b_new_.run_of(j);
      bool stored = (j == b_new_.run_first(r) || j == b_new_.run_last(r));
      create_column(j, stored);
    }
    if (ins_len_ > 0) stitch_middle_rows();
  }

  // storedness flips among survivors: confined to the runs overlapping
  // [p-1 .. q0] in the new indexing
  std::int64_t lo = std::max<std::int64_t>(1, p_ - 1);
  std::int64_t hi = std::min(n_new_, q0_);
  if (lo <= n_new_ && lo <= hi) {
    lo = b_new_.run_first(b_new_.run_of(lo));
    hi = b_new_.run_last(b_new_.run_of(hi));
    for (std::int64_t j = lo; j <= hi; ++j) {
      if (!middle_in_place_ && j >= p_ && j <= zend_) continue;
      std::int64_t r = b_new_.run_of(j);
      bool want = (j == b_new_.run_first(r) || j == b_new_.run_last(r));
      if (ds_.col_at(j).stored == want) continue;
      if (want) {
        promote_column(j);
      } else {
        std::int64_t jold = (j < p_) ? j : j + delta_;
        if (jold >= 1 && jold <= n_old_) snapshot_column_as_old(j, jold);
        demote_column(j);
      }
    }
    for (std::int64_t j = lo; j <= hi; ++j) {
      if (ds_.col_at(j).stored || (j >= p_ && j <= zend_)) {
        fill_created_column_values(j);
      }
    }
  } else if (!middle_in_place_ && p_ <= zend_) {
    for (std::int64_t j = p_; j <= std::min(zend_, n_new_); ++j) {
      fill_created_column_values(j);
    }
  }
}

void Updater::relink_column_diags(std::int64_t j) {
  const DsColumn& c = ds_.col_at(j);
  for (Handle h : c.cells) {
    DsCell& cc = ds_.cell(h);
    cc.diag = ds_.diag_target(cc.row, j);
    ++st_.cells_touched;
  }
}

void Updater::fix_diag_links() {
  const std::int64_t n = n_new_;
  std::int64_t lo = std::max<std::int64_t>(1, std::min(p_ - 1, n));
  std::int64_t hi = std::min(n, q0_ + 1);
  if (hi >= 1 && lo <= hi) {
    lo = b_new_.run_first(b_new_.run_of(lo));
    hi = b_new_.run_last(b_new_.run_of(hi));
    for (std::int64_t j = lo; j <= hi; ++j) {
      const DsColumn& c = ds_.col_at(j);
      if (c.stored || (j >= p_ && j <= zend_)) relink_column_diags(j);
    }
    for (std::int64_t j = lo - 1; j >= 1; --j) {
      if (ds_.col_at(j).stored) {
        relink_column_diags(j);
        break;
      }
    }
  }
  // Left of the splice, a link can only be stale if its diagonal reaches the
  // splice region, which limits it to the next bottom row's distance below
  // its row. Recompute that whole range per stored row.
  std::int64_t jhi = std::min(p_ - 1, n);
  for (std::int32_t r : ds_.stored_rows_) {
    if (r >= ds_.m()) continue;  // last row: diagonal link is always null
    std::int64_t reach = ds_.bottom_row_at_or_after(r + 1) - r;
    std::int64_t jlo = std::max<std::int64_t>(1, p_ - reach - 2);
    for (std::int64_t j = jhi; j >= jlo; --j) {
      Handle h = ds_.cell_at(r, j);
      DsCell& cc = ds_.cell(h);
      cc.diag = ds_.diag_target(r, j);
      ++st_.cells_touched;
    }
  }
}

// -------------------- values --------------------

void Updater::build_row1_d() {
  std::int64_t upto = std::min(p_ - 1, n_new_);
  row1_d_.assign(static_cast<std::size_t>(std::max<std::int64_t>(upto, 0)) + 1, 0);
  if (upto < 1) return;
  Cost d = sq(ds_.a_.at(1), ds_.b_.at(1));
  row1_d_[1] = d;
  Handle h = ds_.cell_at(1, 1);
  for (std::int64_t x = 2; x <= upto; ++x) {
    h = ds_.cell(h).right;
    ++st_.cells_touched;
    d += ds_.cell(h).l;
    row1_d_[static_cast<std::size_t>(x)] = d;
  }
}

Cost Updater::d_row1(std::int64_t x) {
  assert(x >= 1);
  if (x < p_) return row1_d_[static_cast<std::size_t>(x)];
  if (x <= zend_) {
    if (x == p_) return col_p_.d[1];
    return zone_d(0, x);  // row 1 is stored (ordinal 0)
  }
  assert(x == q0_ && have_seam_);
  return seam_.d[1];
}

const std::vector<Cost>& Updater::prefix_col_d(std::int64_t j) {
  auto it = prefix_col_d_cache_.find(j);
  if (it != prefix_col_d_cache_.end()) return it->second;
  assert(j < p_ && ds_.col_at(j).stored);
  std::vector<Cost> v(static_cast<std::size_t>(m() + 1), 0);
  Cost d = d_row1(j);
  v[1] = d;
  for (std::int64_t i = 2; i <= m(); ++i) {
    d += cell_u(i, j);
    v[static_cast<std::size_t>(i)] = d;
  }
  return prefix_col_d_cache_.emplace(j, std::move(v)).first->second;
}

void Updater::sweep_col_p() {
  col_p_.init(m());
  const std::int64_t j = p_;
  const Character cb = ds_.b_.at(j);
  Cost prev_l = 0, prev_d = 0;
  for (std::int64_t i = 1; i <= m(); ++i) {
    Cost cost = sq(ds_.a_.at(i), cb);
    Cost left_u = (j > 1) ? left_of_p_u(i) : 0;
    Cost u, l;
    dr_step(prev_l, left_u, cost, i, j, u, l);
    Cost d = (i == 1) ? ((j == 1) ? cost : d_row1(j - 1) + cost) : prev_d + u;
    col_p_.u[static_cast<std::size_t>(i)] = u;
    col_p_.l[static_cast<std::size_t>(i)] = l;
    col_p_.d[static_cast<std::size_t>(i)] = d;
    Handle h = ds_.cell_at(i, j);
    if (h != kNullHandle) write_cell(h, u, l);
    prev_l = l;
    prev_d = d;
  }
}

Updater::Anchors Updater::make_anchors(const BoxGeom& g) {
  Anchors a;
  a.g = g;
  a.lo = std::max(g.jl, p_ - (g.ib - g.it) - 2);
  if (a.lo < p_) {
    a.top_prefix.assign(static_cast<std::size_t>(p_ - a.lo), 0);
    Cost d = col_p_.d[static_cast<std::size_t>(g.it)] -
             col_p_.l[static_cast<std::size_t>(g.it)];  // D'[it, p-1]
    for (std::int64_t x = p_ - 1; x >= a.lo; --x) {
      a.top_prefix[static_cast<std::size_t>(x - a.lo)] = d;
      if (x > a.lo) d -= cell_l(g.it, x);
    }
  }
  if (g.jl < p_) a.left_d = &prefix_col_d(g.jl);
  return a;
}

Cost Updater::anchor_top_d(const Anchors& a, std::int64_t x) {
  assert(x >= a.lo && x <= zend_);
  if (x < p_) return a.top_prefix[static_cast<std::size_t>(x - a.lo)];
  if (x == p_) return col_p_.d[static_cast<std::size_t>(a.g.it)];
  return zone_d(row_ord(a.g.it), x);
}

Cost Updater::anchor_left_d(const Anchors& a, std::int64_t i) {
  if (a.g.jl < p_) return (*a.left_d)[static_cast<std::size_t>(i)];
  assert(a.g.jl == p_);
  return col_p_.d[static_cast<std::size_t>(i)];
}

Cost Updater::anchor_box_d(const Anchors& a, std::int64_t i, std::int64_t x) {
  std::int64_t t = i - a.g.it, s = x - a.g.jl;
  std::int64_t dd = std::min(s, t);
  if (t >= s) return anchor_left_d(a, a.g.it + (t - s)) + dd * a.g.box_sq;
  return anchor_top_d(a, a.g.jl + (s - t)) + dd * a.g.box_sq;
}

void Updater::fill_zone_interior_rows() {
  const std::int64_t zlo = p_, zhi = zend_;
  const std::int64_t width = zhi - zlo + 1;
  const std::size_t rcount = ds_.stored_rows_.size();
  zone_u_.assign(rcount, std::vector<Cost>(static_cast<std::size_t>(width), 0));
  zone_l_.assign(rcount, std::vector<Cost>(static_cast<std::size_t>(width), 0));
  zone_d_.assign(rcount, std::vector<Cost>(static_cast<std::size_t>(width), 0));
  for (std::size_t k = 0; k < rcount; ++k) {
    std::int64_t r = ds_.stored_rows_[k];
    zone_u_[k][0] = col_p_.u[static_cast<std::size_t>(r)];
    zone_l_[k][0] = col_p_.l[static_cast<std::size_t>(r)];
    zone_d_[k][0] = col_p_.d[static_cast<std::size_t>(r)];
  }
  if (width <= 1) return;
  const std::int64_t zrun = b_new_.run_of(zlo + 1);
  for (std::int64_t bi = 0; bi < a_runs(); ++bi) {
    BoxGeom g = box_geom(bi, zrun);
    Anchors anch = make_anchors(g);
    auto scan_row = [&](std::int64_t r) {
      std::int64_t ord = row_ord(r);
      for (std::int64_t x = zlo + 1; x <= zhi; ++x) {
        Cost up_l = 0;
        if (r > 1) {
          if (row_stored(r - 1)) {
            up_l = zone_l(row_ord(r - 1), x);
          } else {
            Cost d_up = anchor_box_d(anch, r - 1, x);
            Cost d_up_left = anchor_box_d(anch, r - 1, x - 1);
            up_l = d_up - d_up_left;
          }
        }
        Cost u, l;
        dr_step(up_l, zone_u(ord, x - 1), sq(ds_.a_.at(r), ins_ch_), r, x, u, l);
        zone_u_[static_cast<std::size_t>(ord)][static_cast<std::size_t>(x - zlo)] = u;
        zone_l_[static_cast<std::size_t>(ord)][static_cast<std::size_t>(x - zlo)] = l;
        zone_d_[static_cast<std::size_t>(ord)][static_cast<std::size_t>(x - zlo)] =
            zone_d(ord, x - 1) + l;
        Handle h = ds_.cell_at(r, x);
        if (h != kNullHandle) write_cell(h, u, l);
      }
    };
    scan_row(g.it);
    if (g.ib != g.it) scan_row(g.ib);
  }
}

void Updater::build_zone_last() {
  zone_last_.init(m());
  const std::int64_t x = zend_;
  if (x == p_) {
    zone_last_ = col_p_;
    return;
  }
  const std::int64_t zrun = b_new_.run_of(x);
  const bool zend_stored = ds_.col_at(x).stored;
  for (std::int64_t bi = 0; bi < a_runs(); ++bi) {
    BoxGeom g = box_geom(bi, zrun);
    Anchors anch = make_anchors(g);
    for (std::int64_t i = g.it; i <= g.ib; ++i) {
      Cost u, l, d;
      if (row_stored(i)) {
        std::int64_t ord = row_ord(i);
        u = zone_u(ord, x);
        l = zone_l(ord, x);
        d = zone_d(ord, x);
      } else {
        d = anchor_box_d(anch, i, x);
        Cost d_up = anchor_box_d(anch, i - 1, x);
        Cost d_left = anchor_box_d(anch, i, x - 1);
        u = d - d_up;
        l = d - d_left;
        if (zend_stored) {
          Handle h = ds_.cell_at(i, x);
          if (h != kNullHandle) write_cell(h, u, l);
        }
      }
      zone_last_.u[static_cast<std::size_t>(i)] = u;
      zone_last_.l[static_cast<std::size_t>(i)] = l;
      zone_last_.d[static_cast<std::size_t>(i)] = d;
    }
  }
}

void Updater::sweep_seam() {
  seam_.init(m());
  const std::int64_t j = q0_;
  const Character cb = ds_.b_.at(j);
  Cost prev_l = 0, prev_d = 0;
  for (std::int64_t i = 1; i <= m(); ++i) {
    Cost cost = sq(ds_.a_.at(i), cb);
    Cost left_u;
    if (j == 1) {
      left_u = 0;
    } else if (ins_len_ > 0) {
      left_u = zone_last_.u[static_cast<std::size_t>(i)];
    } else {
      left_u = left_of_p_u(i);
    }
    Cost u, l;
    dr_step(prev_l, left_u, cost, i, j, u, l);
    Cost d = (i == 1) ? ((j == 1) ? cost : d_row1(j - 1) + cost) : prev_d + u;
    seam_.u[static_cast<std::size_t>(i)] = u;
    seam_.l[static_cast<std::size_t>(i)] = l;
    seam_.d[static_cast<std::size_t>(i)] = d;
    Handle h = ds_.cell_at(i, j);
    if (h != kNullHandle) {
      const DsCell& c = ds_.cell(h);
      if (c.u != u || c.l != l) seam_.changed[static_cast<std::size_t>(i)] = 1;
      write_cell(h, u, l);
    } else {
      DrCell ov = old_dr(i, j + delta_);
      if (ov.u != u || ov.l != l) seam_.changed[static_cast<std::size_t>(i)] = 1;
    }
    prev_l = l;
    prev_d = d;
  }
  have_seam_ = true;
}

void Updater::compute_values() {
  build_row1_d();
  if (ins_len_ > 0) {
    sweep_col_p();
    if (zend_ > p_) fill_zone_interior_rows();
    build_zone_last();
  }
  if (q0_ <= n_new_) {
    sweep_seam();
    process_seam_band();
    propagate_right(b_new_.run_of(q0_) + 1);
  }
}

void Updater::process_seam_band() {
  const std::int64_t bj = b_new_.run_of(q0_);
  const std::int64_t jr = b_new_.run_last(bj);
  delta_r_.assign(static_cast<std::size_t>(a_runs()), DeltaList{});
  if (q0_ == jr) {
    for (std::int64_t bi = 0; bi < a_runs(); ++bi) {
      std::int64_t it = ds_.a_.run_first(bi), ib = ds_.a_.run_last(bi);
      for (std::int64_t i = it; i <= ib; ++i) {
        if (seam_.changed[static_cast<std::size_t>(i)]) {
          delta_r_[static_cast<std::size_t>(bi)].push_back(
              DeltaEntry{i, seam_.d[static_cast<std::size_t>(i)]});
        }
      }
    }
    return;
  }
  DeltaList delta_b_above;
  for (std::int64_t bi = 0; bi < a_runs(); ++bi) {
    BoxGeom g = box_geom(bi, bj);
    DeltaList delta_b_out, delta_r_out;
    seam_box_pass(g, delta_b_above, delta_b_out, delta_r_out);
    delta_r_[static_cast<std::size_t>(bi)] = std::move(delta_r_out);
    delta_b_above = std::move(delta_b_out);
  }
}

// Band box containing the seam column q0 (swept already); repairs the cells
// in columns (q0 .. jr]. Diagonals crossing the seam column are re-checked
// against the seam arrays; the first post-seam diagonal is always examined.
void Updater::seam_box_pass(const BoxGeom& g, const DeltaList& delta_b_above,
                            DeltaList& delta_b_out, DeltaList& delta_r_out) {
  const std::int64_t it = g.it, ib = g.ib, jr = g.jr;
  std::vector<PendingWrite> pending;

  // ---- top row scan over (q0 .. jr] ----
  DeltaList delta_t;
  {
    bool chain = seam_.changed[static_cast<std::size_t>(it)] != 0;
    Cost chain_d = seam_.d[static_cast<std::size_t>(it)];
    std::size_t bi_idx = 0;
    std::int64_t w = q0_ + 1;
    while (w <= jr) {
      if (!chain) {
        while (bi_idx < delta_b_above.size() && delta_b_above[bi_idx].idx < w) ++bi_idx;
        if (bi_idx >= delta_b_above.size()) break;
        w = delta_b_above[bi_idx].idx;
        if (w > jr) break;
      }
      bool is_seed =
          bi_idx < delta_b_above.size() && delta_b_above[bi_idx].idx == w;
      Cost seed_dup = 0;
      if (is_seed) {
        seed_dup = delta_b_above[bi_idx].dprime;
        ++bi_idx;
      }
      Handle h = ds_.cell_at(it, w);
      assert(h != kNullHandle);
      Cost up_l = (it > 1) ? cell_l(it - 1, w) : 0;
      Cost left_u = (w - 1 == q0_) ? seam_.u[static_cast<std::size_t>(it)]
                                   : cell_u(it, w - 1);
      Cost u, l;
      dr_step(up_l, left_u, sq(ds_.a_.at(it), ds_.b_.at(w)), it, w, u, l);
      const DsCell& c = ds_.cell(h);
      bool changed = (c.u != u || c.l != l);
      if (changed) {
        Cost dpr = (is_seed && it > 1) ? seed_dup + u : chain_d + l;
        write_cell(h, u, l);
        delta_t.push_back(DeltaEntry{w, dpr});
        chain = true;
        chain_d = dpr;
      } else {
        chain = false;
      }
      ++w;
    }
  }

  if (ib == it) {
    delta_b_out = delta_t;
    for (const DeltaEntry& e : delta_t) {
      if (e.idx == jr) delta_r_out.push_back(DeltaEntry{it, e.dprime});
    }
    return;
  }

  std::vector<DeltaEntry> bottom_hits, right_hits;

  if (g.jl < q0_) {
    // The seam column lies strictly inside the box: its cells are interior
    // rows of the box, so values stay constant along each down-right
    // diagonal; check the diagonal exits directly against the seam arrays.
    for (std::int64_t v = it + 1; v <= ib; ++v) {
      std::int64_t gd = std::min(ib - v, jr - q0_);
      std::int64_t ei = v + gd, ex = q0_ + gd;
      if (ex <= q0_) continue;  // v == ib: the seam cell itself
      Handle h = ds_.cell_at(ei, ex);
      assert(h != kNullHandle);
      Cost nu = seam_.u[static_cast<std::size_t>(v)];
      Cost nl = seam_.l[static_cast<std::size_t>(v)];
      const DsCell& c = ds_.cell(h);
      ++st_.cells_touched;
      if (c.u != nu || c.l != nl) {
        Cost dpr = seam_.d[static_cast<std::size_t>(v)] + gd * g.box_sq;
        pending.push_back(PendingWrite{h, nu, nl});
        if (ei == ib) bottom_hits.push_back(DeltaEntry{ex, dpr});
        if (ex == jr) right_hits.push_back(DeltaEntry{ei, dpr});
      }
    }
  }

  bool spine_changed = false;
  Cost spine_l_val = 0;
  bool have_spine = false;

  // ---- top-entry diagonals: (it+1, w) for w in (q0 .. jr] ----
  {
    bool prev_changed = false;
    Cost prev_u = 0;
    bool have_prev = false;
    Cost anchor_d = 0;  // D'[it, w]
    bool have_anchor = false;
    std::size_t ti = 0;
    std::int64_t w = q0_ + 1;
    while (w <= jr) {
      while (ti < delta_t.size() && delta_t[ti].idx < w) ++ti;
      bool is_seed = ti < delta_t.size() && delta_t[ti].idx == w;
      bool forced = (w == q0_ + 1);
      if (!forced && !prev_changed && !is_seed) {
        have_prev = false;
        have_anchor = false;
        if (ti >= delta_t.size()) break;
        w = delta_t[ti].idx;
        continue;
      }
      if (is_seed) {
        anchor_d = delta_t[ti].dprime;
        have_anchor = true;
      } else if (have_anchor) {
        anchor_d += cell_l(it, w);
      } else {
        assert(w == q0_ + 1);
        anchor_d = seam_.d[static_cast<std::size_t>(it)] + cell_l(it, w);
        have_anchor = true;
      }
      Cost up_l = cell_l(it, w);
      Cost left_u;
      if (w - 1 == q0_) {
        left_u = seam_.u[static_cast<std::size_t>(it + 1)];
      } else if (have_prev) {
        left_u = prev_u;
      } else {
        Cost d_it_w1 = anchor_d - cell_l(it, w);
        Cost d_it_w2 = d_it_w1 - cell_l(it, w - 1);
        Cost d_below_w1 = d_it_w2 + g.box_sq;
        left_u = d_below_w1 - d_it_w1;
      }
      Cost nu, nl;
      dr_step(up_l, left_u, g.box_sq, it + 1, w, nu, nl);
      std::int64_t gd = std::min(ib - (it + 1), jr - w);
      std::int64_t ei = it + 1 + gd, ex = w + gd;
      Handle h = ds_.cell_at(ei, ex);
      assert(h != kNullHandle);
      const DsCell& c = ds_.cell(h);
      ++st_.cells_touched;
      bool changed = (c.u != nu || c.l != nl);
      if (changed) {
        Cost d_it_w1 = anchor_d - cell_l(it, w);
        Cost dpr = d_it_w1 + (gd + 1) * g.box_sq;
        pending.push_back(PendingWrite{h, nu, nl});
        if (ei == ib) bottom_hits.push_back(DeltaEntry{ex, dpr});
        if (ex == jr) right_hits.push_back(DeltaEntry{ei, dpr});
      }
      if (w == q0_ + 1) {
        spine_changed = changed;
        spine_l_val = nl;
        have_spine = true;
      }
      prev_changed = changed;
      prev_u = nu;
      have_prev = true;
      ++w;
    }
  }

  if (g.jl == q0_ && ib > it + 1) {
    // The seam column is the box's left column: process the classic
    // left-entry diagonals at (v, jl+1), chained down from the spine; the
    // seam arrays provide the left inputs and dense anchors.
    (void)spine_changed;
    assert(have_spine);
    Cost prev_l_val = spine_l_val;
    for (std::int64_t v = it + 2; v <= ib; ++v) {
      Cost left_u = seam_.u[static_cast<std::size_t>(v)];
      Cost nu, nl;
      dr_step(prev_l_val, left_u, g.box_sq, v, q0_ + 1, nu, nl);
      std::int64_t gd = std::min(ib - v, jr - (q0_ + 1));
      std::int64_t ei = v + gd, ex = q0_ + 1 + gd;
      Handle h = ds_.cell_at(ei, ex);
      assert(h != kNullHandle);
      const DsCell& c = ds_.cell(h);
      ++st_.cells_touched;
      if (c.u != nu || c.l != nl) {
        Cost dpr = seam_.d[static_cast<std::size_t>(v - 1)] + (gd + 1) * g.box_sq;
        pending.push_back(PendingWrite{h, nu, nl});
        if (ei == ib) bottom_hits.push_back(DeltaEntry{ex, dpr});
        if (ex == jr) right_hits.push_back(DeltaEntry{ei, dpr});
      }
      prev_l_val = nl;
    }
  }

  for (const PendingWrite& pw : pending) write_cell(pw.h, pw.u, pw.l);

  sort_delta(bottom_hits);
  delta_b_out = std::move(bottom_hits);
  for (const DeltaEntry& e : delta_t) {
    if (e.idx == jr) right_hits.push_back(DeltaEntry{it, e.dprime});
  }
  sort_delta(right_hits);
  delta_r_out = std::move(right_hits);
}

void Updater::standard_box_pass(const BoxGeom& g, const DeltaList& delta_b_above,
                                const DeltaList& delta_r_in, DeltaList& delta_b_out,
                                DeltaList& delta_r_out) {
  const std::int64_t it = g.it, ib = g.ib, jl = g.jl, jr = g.jr;

  // ---- top row scan (row it, cols [jl .. jr]) ----
  DeltaList delta_t;
  {
    bool corner_seed = false;
    Cost corner_dleft = 0;
    for (const DeltaEntry& e : delta_r_in) {
      if (e.idx == it) {
        corner_seed = true;
        corner_dleft = e.dprime;
      }
      if (e.idx >= it) break;
    }
    bool chain = false;
    Cost chain_d = 0;
    std::size_t bi_idx = 0;
    std::int64_t w = jl;
    bool at_corner = true;
    while (w <= jr) {
      bool corner_here = at_corner && corner_seed;
      if (!chain && !corner_here) {
        while (bi_idx < delta_b_above.size() && delta_b_above[bi_idx].idx < w) ++bi_idx;
        if (bi_idx >= delta_b_above.size()) break;
        w = delta_b_above[bi_idx].idx;
        if (w > jr) break;
        at_corner = (w == jl);
        corner_here = at_corner && corner_seed;
      }
      bool is_seed = bi_idx < delta_b_above.size() && delta_b_above[bi_idx].idx == w;
      Cost seed_dup = 0;
      if (is_seed) {
        seed_dup = delta_b_above[bi_idx].dprime;
        ++bi_idx;
      }
      Handle h = ds_.cell_at(it, w);
      assert(h != kNullHandle);
      Cost up_l = (it > 1) ? cell_l(it - 1, w) : 0;
      Cost left_u = (w > 1) ? cell_u(it, w - 1) : 0;
      Cost u, l;
      dr_step(up_l, left_u, sq(ds_.a_.at(it), ds_.b_.at(w)), it, w, u, l);
      const DsCell& c = ds_.cell(h);
      bool changed = (c.u != u || c.l != l);
      if (changed) {
        Cost dpr;
        if (is_seed && it > 1) {
          dpr = seed_dup + u;
        } else if (corner_here) {
          dpr = corner_dleft + l;
        } else {
          assert(chain);
          dpr = chain_d + l;
        }
        write_cell(h, u, l);
        delta_t.push_back(DeltaEntry{w, dpr});
        chain = true;
        chain_d = dpr;
      } else {
        chain = false;
      }
      at_corner = false;
      ++w;
    }
  }

  // ---- left column scan (col jl, rows (it .. ib]) ----
  DeltaList delta_l;
  {
    bool corner_changed = !delta_t.empty() && delta_t.front().idx == jl;
    Cost corner_d = corner_changed ? delta_t.front().dprime : 0;
    bool chain = corner_changed;
    Cost chain_d = corner_d;
    std::size_t ri = 0;
    std::int64_t v = it + 1;
    while (v <= ib) {
      if (!chain) {
        while (ri < delta_r_in.size() && delta_r_in[ri].idx < v) ++ri;
        if (ri >= delta_r_in.size()) break;
        v = delta_r_in[ri].idx;
        if (v > ib) break;
        if (v <= it) {  // corner entry: already consumed by the top scan
          ++ri;
          v = it + 1;
          continue;
        }
      }
      bool is_seed = ri < delta_r_in.size() && delta_r_in[ri].idx == v;
      Cost seed_dleft = 0;
      if (is_seed) {
        seed_dleft = delta_r_in[ri].dprime;
        ++ri;
      }
      Handle h = ds_.cell_at(v, jl);
      assert(h != kNullHandle);
      Cost up_l = cell_l(v - 1, jl);
      Cost left_u = (jl > 1) ? cell_u(v, jl - 1) : 0;
      Cost u, l;
      dr_step(up_l, left_u, sq(ds_.a_.at(v), ds_.b_.at(jl)), v, jl, u, l);
      const DsCell& c = ds_.cell(h);
      bool changed = (c.u != u || c.l != l);
      if (changed) {
        Cost dpr = (is_seed && jl > 1) ? seed_dleft + l : chain_d + u;
        write_cell(h, u, l);
        delta_l.push_back(DeltaEntry{v, dpr});
        chain = true;
        chain_d = dpr;
      } else {
        chain = false;
      }
      ++v;
    }
  }

  // ---- degenerate shapes ----
  if (jl == jr) {
    delta_r_out = delta_l;
    if (!delta_t.empty() && delta_t.front().idx == jl) {
      delta_r_out.insert(delta_r_out.begin(), DeltaEntry{it, delta_t.front().dprime});
    }
    for (const DeltaEntry& e : delta_r_out) {
      if (e.idx == ib) delta_b_out.push_back(DeltaEntry{jl, e.dprime});
    }
    return;
  }
  if (it == ib) {
    delta_b_out = delta_t;
    for (const DeltaEntry& e : delta_t) {
      if (e.idx == jr) delta_r_out.push_back(DeltaEntry{it, e.dprime});
    }
    return;
  }

  std::vector<PendingWrite> pending;
  std::vector<DeltaEntry> bottom_hits, right_hits;

  bool spine_changed = false;
  Cost spine_l = 0;
  Cost spine_left_col_d = 0;  // D'[it+1, jl] when the spine ran
  bool have_spine_d = false;

  // ---- top-entry diagonals: (it+1, w), w in [jl+1 .. jr] ----
  {
    bool left_neigh_changed = false;
    Cost left_neigh_d = 0;
    for (const DeltaEntry& e : delta_l) {
      if (e.idx == it + 1) {
        left_neigh_changed = true;
        left_neigh_d = e.dprime;
      }
      if (e.idx >= it + 1) break;
    }
    bool prev_changed = false;
    Cost prev_u = 0;
    bool have_prev = false;
    Cost anchor_d = 0;
    bool have_anchor = false;
    std::size_t ti = 0;
    std::int64_t w = jl + 1;
    bool spine_pending = left_neigh_changed;
    while (w <= jr) {
      while (ti < delta_t.size() && delta_t[ti].idx < w) ++ti;
      bool is_seed = ti < delta_t.size() && delta_t[ti].idx == w;
      bool active = is_seed || prev_changed || (w == jl + 1 && spine_pending);
      if (!active) {
        have_prev = false;
        have_anchor = false;
        if (ti >= delta_t.size()) break;
        w = delta_t[ti].idx;
        continue;
      }
      if (is_seed) {
        anchor_d = delta_t[ti].dprime;
        have_anchor = true;
      } else if (have_anchor) {
        anchor_d += cell_l(it, w);
      } else {
        // spine activated from the left column
        assert(w == jl + 1 && left_neigh_changed);
        Cost d_corner = left_neigh_d - cell_u(it + 1, jl);  // D'[it, jl]
        anchor_d = d_corner + cell_l(it, jl + 1);           // D'[it, jl+1]
        have_anchor = true;
      }
      Cost up_l = cell_l(it, w);
      Cost left_u;
      if (w == jl + 1) {
        left_u = cell_u(it + 1, jl);
      } else if (have_prev) {
        left_u = prev_u;
      } else {
        Cost d_it_w1 = anchor_d - cell_l(it, w);
        Cost d_it_w2 = d_it_w1 - cell_l(it, w - 1);
        Cost d_below_w1 = d_it_w2 + g.box_sq;
        left_u = d_below_w1 - d_it_w1;
      }
      Cost nu, nl;
      dr_step(up_l, left_u, g.box_sq, it + 1, w, nu, nl);
      std::int64_t gd = std::min(ib - (it + 1), jr - w);
      std::int64_t ei = it + 1 + gd, ex = w + gd;
      Handle h = ds_.cell_at(ei, ex);
      assert(h != kNullHandle);
      const DsCell& c = ds_.cell(h);
      ++st_.cells_touched;
      bool changed = (c.u != nu || c.l != nl);
      if (changed) {
        Cost d_it_w1 = anchor_d - cell_l(it, w);
        Cost dpr = d_it_w1 + (gd + 1) * g.box_sq;
        pending.push_back(PendingWrite{h, nu, nl});
        if (ei == ib) bottom_hits.push_back(DeltaEntry{ex, dpr});
        if (ex == jr) right_hits.push_back(DeltaEntry{ei, dpr});
      }
      if (w == jl + 1) {
        spine_changed = changed;
        spine_l = nl;
        spine_left_col_d = anchor_d - cell_l(it, jl + 1) + cell_u(it + 1, jl);
        // D'[it+1, jl] = D'[it, jl] + U'[it+1, jl]
        have_spine_d = true;
      }
      prev_changed = changed;
      prev_u = nu;
      have_prev = true;
      ++w;
    }
  }

  // ---- left-entry diagonals: (v, jl+1), v in [it+2 .. ib] ----
  {
    bool prev_changed = spine_changed;
    Cost prev_l_val = spine_l;
    bool have_prev = spine_changed || have_spine_d;
    Cost left_col_d = spine_left_col_d;  // D'[v-1, jl] rolling
    bool have_left_d = have_spine_d;
    std::size_t li = 0;
    std::int64_t v = it + 2;
    while (v <= ib) {
      while (li < delta_l.size() && delta_l[li].idx < v) ++li;
      bool is_seed = li < delta_l.size() && delta_l[li].idx == v;
      bool active = is_seed || prev_changed;
      if (!active) {
        have_prev = false;
        have_left_d = false;
        if (li >= delta_l.size()) break;
        v = delta_l[li].idx;
        continue;
      }
      Cost cur_left_d;  // D'[v, jl]
      if (is_seed) {
        cur_left_d = delta_l[li].dprime;
      } else {
        assert(have_left_d);
        cur_left_d = left_col_d + cell_u(v, jl);
      }
      Cost left_u = cell_u(v, jl);
      Cost up_l;
      if (have_prev) {
        up_l = prev_l_val;
      } else {
        Cost d_v1_jl = cur_left_d - cell_u(v, jl);
        Cost d_v2_jl = d_v1_jl - cell_u(v - 1, jl);
        Cost d_v1_jl1 = d_v2_jl + g.box_sq;  // D'[v-1, jl+1]
        up_l = d_v1_jl1 - d_v1_jl;
      }
      Cost nu, nl;
      dr_step(up_l, left_u, g.box_sq, v, jl + 1, nu, nl);
      std::int64_t gd = std::min(ib - v, jr - (jl + 1));
      std::int64_t ei = v + gd, ex = jl + 1 + gd;
      Handle h = ds_.cell_at(ei, ex);
      assert(h != kNullHandle);
      const DsCell& c = ds_.cell(h);
      ++st_.cells_touched;
      bool changed = (c.u != nu || c.l != nl);
      if (changed) {
        Cost d_v1_jl = cur_left_d - cell_u(v, jl);
        Cost dpr = d_v1_jl + (gd + 1) * g.box_sq;
        pending.push_back(PendingWrite{h, nu, nl});
        if (ei == ib) bottom_hits.push_back(DeltaEntry{ex, dpr});
        if (ex == jr) right_hits.push_back(DeltaEntry{ei, dpr});
      }
      prev_changed = changed;
      prev_l_val = nl;
      have_prev = true;
      left_col_d = cur_left_d;
      have_left_d = true;
      ++v;
    }
  }

  for (const PendingWrite& pw : pending) write_cell(pw.h, pw.u, pw.l);

  for (const DeltaEntry& e : delta_l) {
    if (e.idx == ib) bottom_hits.push_back(DeltaEntry{jl, e.dprime});
  }
  for (const DeltaEntry& e : delta_t) {
    if (e.idx == jr) right_hits.push_back(DeltaEntry{it, e.dprime});
  }
  sort_delta(bottom_hits);
  sort_delta(right_hits);
  delta_b_out = std::move(bottom_hits);
  delta_r_out = std::move(right_hits);
}

void Updater::propagate_right(std::int64_t first_bj) {
  const std::int64_t n_runs = ds_.b_.run_count();
  if (delta_r_.empty()) return;
  // rows with pending right-deltas, kept sorted
  std::vector<std::int64_t> active;
  for (std::int64_t bi = 0; bi < a_runs(); ++bi) {
    if (!delta_r_[static_cast<std::size_t>(bi)].empty()) active.push_back(bi);
  }
  for (std::int64_t bj = first_bj; bj < n_runs && !active.empty(); ++bj) {
    std::vector<std::int64_t> next_active;
    DeltaList delta_b_above;
    std::int64_t cascade_from = -1;  // box row whose delta_b_above is pending
    std::size_t ai = 0;
    std::int64_t bi = -1;
    while (true) {
      // next box row to process: smallest among pending cascade and active list
      std::int64_t cand = -1;
      if (ai < active.size()) cand = active[ai];
      if (cascade_from >= 0 && (cand < 0 || cascade_from < cand)) cand = cascade_from;
      if (cand < 0) break;
      if (cand <= bi) {  // already processed (cascade target == active row)
        if (ai < active.size() && active[ai] == cand) ++ai;
        if (cascade_from == cand) cascade_from = -1;
        continue;
      }
      bi = cand;
      if (bi >= a_runs()) break;
      DeltaList dr_in;
      if (ai < active.size() && active[ai] == bi) {
        dr_in = std::move(delta_r_[static_cast<std::size_t>(bi)]);
        delta_r_[static_cast<std::size_t>(bi)].clear();
        ++ai;
      }
      DeltaList db_in;
      if (cascade_from == bi) {
        db_in = std::move(delta_b_above);
        cascade_from = -1;
      }
      delta_b_above.clear();
      if (dr_in.empty() && db_in.empty()) continue;
      BoxGeom g = box_geom(bi, bj);
      DeltaList delta_b_out, delta_r_out;
      standard_box_pass(g, db_in, dr_in, delta_b_out, delta_r_out);
      if (!delta_r_out.empty()) {
        delta_r_[static_cast<std::size_t>(bi)] = std::move(delta_r_out);
        next_active.push_back(bi);
      }
      if (!delta_b_out.empty() && bi + 1 < a_runs()) {
        delta_b_above = std::move(delta_b_out);
        cascade_from = bi + 1;
      }
    }
    active = std::move(next_active);
  }
  for (DeltaList& dl : delta_r_) dl.clear();
}

// -------------------- driver --------------------

UpdateStats Updater::run() {
  auto t0 = std::chrono::steady_clock::now();
  normalize();
  if (is_noop()) {
    st_.elapsed =
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0);
    return st_;
  }
  capture_old();
  restructure();
  fix_diag_links();
  compute_values();
  st_.elapsed =
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0);
  return st_;
}

// -------------------- public API --------------------

namespace {

void to_splice(const EditOp& op, std::int64_t n, std::int64_t& pos, std::int64_t& del,
               Character& ch, std::int64_t& ins) {
  switch (op.kind) {
    case EditKind::InsertChar:
      if (op.pos < 1 || op.pos > n + 1) throw Error(Errc::PositionOutOfRange, "insert pos");
      check_character(op.ch);
      pos = op.pos;
      del = 0;
      ch = op.ch;
      ins = 1;
      break;
    case EditKind::DeleteChar:
      if (op.pos < 1 || op.pos > n) throw Error(Errc::PositionOutOfRange, "delete pos");
      if (n == 1) throw Error(Errc::WouldEmptyString, "deleting the last character");
      pos = op.pos;
      del = 1;
      ch = 0;
      ins = 0;
      break;
    case EditKind::SubstituteChar:
      if (op.pos < 1 || op.pos > n) throw Error(Errc::PositionOutOfRange, "substitute pos");
      check_character(op.ch);
      pos = op.pos;
      del = 1;
      ch = op.ch;
      ins = 1;
      break;
    case EditKind::InsertRun:
      if (op.pos < 1 || op.pos > n + 1) throw Error(Errc::PositionOutOfRange, "insrun pos");
      if (op.k < 1) throw Error(Errc::PositionOutOfRange, "insrun length");
      check_character(op.ch);
      pos = op.pos;
      del = 0;
      ch = op.ch;
      ins = op.k;
      break;
    case EditKind::DeleteRun:
      if (op.k < 1 || op.pos < 1 || op.pos + op.k - 1 > n) {
        throw Error(Errc::PositionOutOfRange, "delrun range");
      }
      if (op.k >= n) throw Error(Errc::WouldEmptyString, "delrun empties the string");
      pos = op.pos;
      del = op.k;
      ch = 0;
      ins = 0;
      break;
    case EditKind::SubstituteRun:
      if (op.k1 < 1 || op.k2 < 1 || op.pos < 1 || op.pos + op.k1 - 1 > n) {
        throw Error(Errc::PositionOutOfRange, "subrun range");
      }
      check_character(op.ch);
      pos = op.pos;
      del = op.k1;
      ch = op.ch;
      ins = op.k2;
      break;
  }
  if (n - del + ins > kMaxLength) {
    throw Error(Errc::CharacterOutOfRange, "edited string longer than 2^20");
  }
}

UpdateStats run_edit(SparseDs& ds, const EditOp& op) {
  std::int64_t pos, del, ins;
  Character ch;
  to_splice(op, ds.n(), pos, del, ch, ins);
  Updater u(ds, pos, del, ch, ins);
  return u.run();
}

}  // namespace

UpdateStats apply_edit(SparseDs& ds, const EditOp& op) {
  assert(!op.is_run_kind());
  return run_edit(ds, op);
}

UpdateStats apply_batched_edit(SparseDs& ds, const EditOp& op) {
  assert(op.is_run_kind());
  return run_edit(ds, op);
}

UpdateStats right_end_fastpath(SparseDs& ds, const EditOp& op) {
  std::int64_t n = ds.n();
  bool at_end = (op.kind == EditKind::InsertChar && op.pos == n + 1) ||
                ((op.kind == EditKind::DeleteChar || op.kind == EditKind::SubstituteChar) &&
                 op.pos == n);
  if (!at_end) throw Error(Errc::PositionOutOfRange, "not a right-end edit");
  return run_edit(ds, op);
}

std::int64_t dump_diff_chg(const std::vector<DumpCell>& old_dump,
                           const std::vector<DumpCell>& new_dump, std::int64_t canonical_pos,
                           std::int64_t ell) {
  std::map<std::pair<std::int64_t, std::int64_t>, std::pair<Cost, Cost>> old_at;
  std::int64_t n_old = 0;
  for (const DumpCell& c : old_dump) {
    old_at[{c.i, c.j}] = {c.u, c.l};
    n_old = std::max(n_old, c.j);
  }
  std::int64_t count = 0;
  for (const DumpCell& c : new_dump) {
    std::int64_t jold = (c.j < canonical_pos) ? c.j : c.j + ell;
    if (jold < 1 || jold > n_old) {
      ++count;
      continue;
    }
    auto it = old_at.find({c.i, jold});
    if (it == old_at.end() || it->second.first != c.u || it->second.second != c.l) ++count;
  }
  return count;
}

}  // namespace dyndtw
