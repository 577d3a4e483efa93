#ifndef DYNDTW_DYNAMIC_UPDATE_HPP
#define DYNDTW_DYNAMIC_UPDATE_HPP

#include <chrono>
#include <cstdint>

#include "dyndtw/core_types.hpp"
#include "dyndtw/sparse_ds.hpp"

namespace dyndtw {

enum class EditKind {
  InsertChar,
  DeleteChar,
  SubstituteChar,
  InsertRun,
  DeleteRun,
  SubstituteRun,
};

struct EditOp {
  EditKind kind = EditKind::SubstituteChar;
  std::int64_t pos = 0;  // j*, 1-based
  Character ch = 0;
  std::int64_t k = 0;        // InsertRun / DeleteRun length
  std::int64_t k1 = 0;       // SubstituteRun: replaced length
  std::int64_t k2 = 0;       // SubstituteRun: replacement length

  static EditOp insert_char(std::int64_t j, Character c) {
    return EditOp{EditKind::InsertChar, j, c, 0, 0, 0};
  }
  static EditOp delete_char(std::int64_t j) {
    return EditOp{EditKind::DeleteChar, j, 0, 0, 0, 0};
  }
  static EditOp substitute_char(std::int64_t j, Character c) {
    return EditOp{EditKind::SubstituteChar, j, c, 0, 0, 0};
  }
  static EditOp insert_run(std::int64_t j, Character c, std::int64_t k) {
    return EditOp{EditKind::InsertRun, j, c, k, 0, 0};
  }
  static EditOp delete_run(std::int64_t j, std::int64_t k) {
    return EditOp{EditKind::DeleteRun, j, 0, k, 0, 0};
  }
  static EditOp substitute_run(std::int64_t j, std::int64_t k1, Character c, std::int64_t k2) {
    return EditOp{EditKind::SubstituteRun, j, c, 0, k1, k2};
  }

  bool is_run_kind() const {
    return kind == EditKind::InsertRun || kind == EditKind::DeleteRun ||
           kind == EditKind::SubstituteRun;
  }
};

struct UpdateStats {
  // Cells whose stored values differ under the column correspondence
  // j <-> j+ell (canonical edit position), plus cells created at coordinates
  // the old table did not cover.
  std::int64_t chg = 0;
  std::int64_t cells_touched = 0;
  std::int64_t structural_cells = 0;  // created + destroyed
  std::chrono::nanoseconds elapsed{0};

  // Canonical edit position and offset actually used (run-extending inserts
  // and in-run deletes slide to the right end of the run).
  std::int64_t canonical_pos = 0;
  std::int64_t ell = 0;  // n_old - n_new
};

// Applies a single-character edit to B and repairs the sparse table in
// O(m + n + #chg). Errors: WouldEmptyString, PositionOutOfRange,
// CharacterOutOfRange.
UpdateStats apply_edit(SparseDs& ds, const EditOp& op);

// Run-wise batched edit; final state identical to a rebuild from scratch.
UpdateStats apply_batched_edit(SparseDs& ds, const EditOp& op);

// Edit at the right end (pos = n or n+1); reuses the general path, with no
// propagation beyond the last box column.
UpdateStats right_end_fastpath(SparseDs& ds, const EditOp& op);

// Independent #chg oracle: diffs two dumps under the column correspondence
// j <-> j + ell for j >= canonical_pos. A new cell counts when the old dump
// lacks the corresponding coordinate or holds different values.
std::int64_t dump_diff_chg(const std::vector<DumpCell>& old_dump,
                           const std::vector<DumpCell>& new_dump, std::int64_t canonical_pos,
                           std::int64_t ell);

}  // namespace dyndtw

#endif  // DYNDTW_DYNAMIC_UPDATE_HPP
