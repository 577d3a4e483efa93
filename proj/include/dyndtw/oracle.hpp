#ifndef DYNDTW_ORACLE_HPP
#define DYNDTW_ORACLE_HPP

#include <utility>
#include <vector>

#include "dyndtw/core_types.hpp"

namespace dyndtw {

inline Cost sq(Character a, Character b) {
  Cost d = a - b;
  return d * d;
}

// Full m x n table of squared-DTW prefix costs. Desk-scale verification only.
class DenseDp {
 public:
  DenseDp(std::int64_t m, std::int64_t n)
      : m_(m), n_(n), cells_(static_cast<std::size_t>(m * n), 0) {}

  std::int64_t m() const { return m_; }
  std::int64_t n() const { return n_; }

  Cost& at(std::int64_t i, std::int64_t j) {
    return cells_[static_cast<std::size_t>((i - 1) * n_ + (j - 1))];
  }
  Cost at(std::int64_t i, std::int64_t j) const {
    return cells_[static_cast<std::size_t>((i - 1) * n_ + (j - 1))];
  }

 private:
  std::int64_t m_, n_;
  std::vector<Cost> cells_;
};

struct DrCell {
  Cost u = 0;  // D[i,j] - D[i-1,j], 0 on row 1
  Cost l = 0;  // D[i,j] - D[i,j-1], 0 on column 1
  bool operator==(const DrCell& o) const { return u == o.u && l == o.l; }
};

class DenseDr {
 public:
  DenseDr(std::int64_t m, std::int64_t n)
      : m_(m), n_(n), cells_(static_cast<std::size_t>(m * n)) {}

  std::int64_t m() const { return m_; }
  std::int64_t n() const { return n_; }

  DrCell& at(std::int64_t i, std::int64_t j) {
    return cells_[static_cast<std::size_t>((i - 1) * n_ + (j - 1))];
  }
  const DrCell& at(std::int64_t i, std::int64_t j) const {
    return cells_[static_cast<std::size_t>((i - 1) * n_ + (j - 1))];
  }

 private:
  std::int64_t m_, n_;
  std::vector<DrCell> cells_;
};

struct WarpingPath {
  std::vector<std::pair<std::int64_t, std::int64_t>> steps;
};

DenseDp dense_dtw(const RleString& a, const RleString& b);
DenseDr dense_dr(const DenseDp& d);

// Deterministic backtracking; ties broken diagonal, then left, then up.
WarpingPath backtrack_path(const DenseDp& d, const RleString& a, const RleString& b);

double dtw_distance(const RleString& a, const RleString& b);

Cost path_cost(const WarpingPath& p, const RleString& a, const RleString& b);
bool path_is_valid(const WarpingPath& p, std::int64_t m, std::int64_t n);

}  // namespace dyndtw

#endif  // DYNDTW_ORACLE_HPP
