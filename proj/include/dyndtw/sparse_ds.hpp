#ifndef DYNDTW_SPARSE_DS_HPP
#define DYNDTW_SPARSE_DS_HPP

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "dyndtw/core_types.hpp"
#include "dyndtw/oracle.hpp"

namespace dyndtw {

using Handle = std::uint32_t;
inline constexpr Handle kNullHandle = 0xffffffffu;

// One boundary cell of the sparse differential table: the two difference
// fields plus neighbor links within the stored grid and the lower-right
// diagonal link.
struct DsCell {
  std::int32_t row = 0;       // i, 1-based; rows never shift (edits hit B only)
  std::int32_t col_slot = -1; // arena slot of the owning column
  Cost u = 0;
  Cost l = 0;
  Handle up = kNullHandle;
  Handle down = kNullHandle;
  Handle left = kNullHandle;
  Handle right = kNullHandle;
  Handle diag = kNullHandle;
};

struct DsColumn {
  std::int32_t index = 0;  // current 1-based j, restamped after edits
  std::int32_t run = 0;    // current 0-based run of B
  bool stored = false;     // full column of m cells iff true
  bool alive = false;
  // stored: handle per row (size m); else handle per stored-row ordinal
  std::vector<Handle> cells;
};

struct DumpCell {
  std::int64_t i, j;
  Cost u, l;
  bool operator==(const DumpCell& o) const {
    return i == o.i && j == o.j && u == o.u && l == o.l;
  }
};

// Sparse differential table over the run-intersection boxes of A and B:
// stores exactly the rows/columns on run borders, doubly linked through the
// cells, with stable handles so edits can splice columns without invalidating
// the rest of the structure.
class SparseDs {
 public:
  SparseDs(RleString a, RleString b);

  const RleString& a() const { return a_; }
  const RleString& b() const { return b_; }
  std::int64_t m() const { return a_.length(); }
  std::int64_t n() const { return b_.length(); }

  // Exact squared distance D[m,n], accumulated along a boundary walk.
  Cost value() const;

  // Stored differences at (i,j); throws NotABoundaryCell for interior cells.
  DrCell cell_values_at(std::int64_t i, std::int64_t j) const;

  // Cost-optimal warping path recovered from boundary cells in O(m+n).
  WarpingPath path() const;

  std::int64_t cell_count() const { return live_cells_; }

  // All stored cells as (i, j, U, L), sorted by (i, j).
  std::vector<DumpCell> dump_cells() const;
  // CSV with header "i,j,U,L".
  std::string dump_csv() const;

  // Structural self-check (links, storedness, diagonal rule, cell count).
  // Returns an empty string when consistent, else a description.
  std::string audit_structure() const;

  bool is_stored(std::int64_t i, std::int64_t j) const;

 private:
  friend class Updater;

  // --- arena ---
  Handle new_cell();
  void free_cell(Handle h);
  DsCell& cell(Handle h) { return cells_[h]; }
  const DsCell& cell(Handle h) const { return cells_[h]; }

  std::int32_t new_col_slot();
  void free_col_slot(std::int32_t s);
  DsColumn& col(std::int32_t slot) { return col_slots_[static_cast<std::size_t>(slot)]; }
  const DsColumn& col(std::int32_t slot) const {
    return col_slots_[static_cast<std::size_t>(slot)];
  }
  DsColumn& col_at(std::int64_t j) { return col(col_order_[static_cast<std::size_t>(j - 1)]); }
  const DsColumn& col_at(std::int64_t j) const {
    return col(col_order_[static_cast<std::size_t>(j - 1)]);
  }

  Handle cell_at(std::int64_t i, std::int64_t j) const;
  std::int64_t col_index_of(const DsCell& c) const { return col(c.col_slot).index; }

  // Diagonal-link target by the structural rule: smallest g >= 1 with i+g on
  // a bottom row or j+g on a right column; null on the last row/column.
  Handle diag_target(std::int64_t i, std::int64_t j) const;

  void build_row_info();
  void build_fresh();            // columns, cells, neighbor links
  void compute_all_values();     // box-frame wavefront
  void set_all_diag_links();

  bool row_stored(std::int64_t i) const { return row_ord_[static_cast<std::size_t>(i)] >= 0; }
  std::int64_t bottom_row_at_or_after(std::int64_t i) const {
    return a_.run_last(a_.run_of(i));
  }
  std::int64_t right_col_at_or_after(std::int64_t j) const {
    return b_.run_last(b_.run_of(j));
  }

  RleString a_;
  RleString b_;

  std::vector<DsCell> cells_;
  std::vector<Handle> free_cells_;
  std::vector<DsColumn> col_slots_;
  std::vector<std::int32_t> free_col_slots_;
  std::vector<std::int32_t> col_order_;  // position j-1 -> slot
  std::int64_t live_cells_ = 0;

  // static row geometry of A
  std::vector<std::int32_t> stored_rows_;  // sorted, 1-based
  std::vector<std::int32_t> row_ord_;      // size m+1; ordinal in stored_rows_ or -1
};

inline SparseDs build_ds(const RleString& a, const RleString& b) { return SparseDs(a, b); }

}  // namespace dyndtw

#endif  // DYNDTW_SPARSE_DS_HPP
