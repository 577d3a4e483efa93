#include "dyndtw/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace dyndtw {

DenseDp dense_dtw(const RleString& a, const RleString& b) {
  if (a.length() == 0 || b.length() == 0) throw Error(Errc::EmptyInput, "empty input");
  const std::int64_t m = a.length(), n = b.length();
  DenseDp d(m, n);
  d.at(1, 1) = sq(a.at(1), b.at(1));
  for (std::int64_t i = 2; i <= m; ++i) d.at(i, 1) = d.at(i - 1, 1) + sq(a.at(i), b.at(1));
  for (std::int64_t j = 2; j <= n; ++j) d.at(1, j) = d.at(1, j - 1) + sq(a.at(1), b.at(j));
  for (std::int64_t i = 2; i <= m; ++i) {
    for (std::int64_t j = 2; j <= n; ++j) {
      Cost best = std::min({d.at(i, j - 1), d.at(i - 1, j), d.at(i - 1, j - 1)});
      d.at(i, j) = best + sq(a.at(i), b.at(j));
    }
  }
  return d;
}

DenseDr dense_dr(const DenseDp& d) {
  DenseDr r(d.m(), d.n());
  for (std::int64_t i = 1; i <= d.m(); ++i) {
    for (std::int64_t j = 1; j <= d.n(); ++j) {
      DrCell& c = r.at(i, j);
      c.u = (i > 1) ? d.at(i, j) - d.at(i - 1, j) : 0;
      c.l = (j > 1) ? d.at(i, j) - d.at(i, j - 1) : 0;
    }
  }
  return r;
}

WarpingPath backtrack_path(const DenseDp& d, const RleString& a, const RleString& b) {
  (void)a;
  (void)b;
  WarpingPath p;
  std::int64_t i = d.m(), j = d.n();
  p.steps.emplace_back(i, j);
  while (i > 1 || j > 1) {
    if (i == 1) {
      --j;
    } else if (j == 1) {
      --i;
    } else {
      Cost diag = d.at(i - 1, j - 1), left = d.at(i, j - 1), up = d.at(i - 1, j);
      Cost best = std::min({diag, left, up});
      if (diag == best) {
        --i;
        --j;
      } else if (left == best) {
        --j;
      } else {
        --i;
      }
    }
    p.steps.emplace_back(i, j);
  }
  std::reverse(p.steps.begin(), p.steps.end());
  return p;
}

double dtw_distance(const RleString& a, const RleString& b) {
  DenseDp d = dense_dtw(a, b);
  return std::sqrt(static_cast<double>(d.at(d.m(), d.n())));
}

Cost path_cost(const WarpingPath& p, const RleString& a, const RleString& b) {
  Cost total = 0;
  for (const auto& [i, j] : p.steps) total += sq(a.at(i), b.at(j));
  return total;
}

bool path_is_valid(const WarpingPath& p, std::int64_t m, std::int64_t n) {
  if (p.steps.empty()) return false;
  if (p.steps.front() != std::pair<std::int64_t, std::int64_t>{1, 1}) return false;
  if (p.steps.back() != std::pair<std::int64_t, std::int64_t>{m, n}) return false;
  for (std::size_t k = 1; k < p.steps.size(); ++k) {
    std::int64_t di = p.steps[k].first - p.steps[k - 1].first;
    std::int64_t dj = p.steps[k].second - p.steps[k - 1].second;
    bool ok = (di == 1 && dj == 0) || (di == 0 && dj == 1) || (di == 1 && dj == 1);
    if (!ok) return false;
  }
  return true;
}

}  // namespace dyndtw
