#include "dyndtw/instances.hpp"

#include <algorithm>
#include <unordered_set>

namespace dyndtw {

RleString gen_random(const RandomSpec& spec) {
  const std::int64_t m = spec.length, M = spec.rle_size, sigma = spec.alphabet_size;
  if (m < 1 || M < 1 || M > m) {
    throw Error(Errc::InfeasibleSpec, "need 1 <= M <= m");
  }
  if (sigma < 2 && M >= 2) {
    throw Error(Errc::InfeasibleSpec, "alphabet too small for M >= 2");
  }
  if (sigma < 1 || sigma > kMaxAbsCharacter) {
    throw Error(Errc::InfeasibleSpec, "alphabet size out of range");
  }
  Rng rng(spec.seed);

  // M-1 distinct cut points among the m-1 gaps (Floyd's sampling), sorted
  std::unordered_set<std::int64_t> cut_set;
  for (std::int64_t t = m - 1 - (M - 1) + 1; t <= m - 1; ++t) {
    std::int64_t v = rng.range(1, t);
    if (cut_set.count(v)) {
      cut_set.insert(t);
    } else {
      cut_set.insert(v);
    }
  }
  std::vector<std::int64_t> cuts(cut_set.begin(), cut_set.end());
  std::sort(cuts.begin(), cuts.end());

  std::vector<Run> runs;
  runs.reserve(static_cast<std::size_t>(M));
  std::int64_t prev = 0;
  Character prev_ch = -1;
  for (std::int64_t r = 0; r < M; ++r) {
    std::int64_t end = (r + 1 < M) ? cuts[static_cast<std::size_t>(r)] : m;
    Character ch;
    if (r == 0) {
      ch = static_cast<Character>(rng.below(static_cast<std::uint64_t>(sigma)));
    } else {
      ch = static_cast<Character>(rng.below(static_cast<std::uint64_t>(sigma - 1)));
      if (ch >= prev_ch) ++ch;  // skip the previous character
    }
    runs.push_back(Run{ch, end - prev});
    prev = end;
    prev_ch = ch;
  }
  return RleString::from_runs(runs);
}

std::pair<RleString, RleString> gen_adversarial(const AdversarialSpec& spec) {
  const std::int64_t M = spec.run_count_a, N = spec.run_count_b;
  const std::int64_t k = spec.exp_a, l = spec.exp_b;
  if (M < 1 || N < 1 || k < 1 || l < 1) {
    throw Error(Errc::InfeasibleSpec, "run counts and exponents must be >= 1");
  }
  if (M + N + 1 > kMaxAbsCharacter) {
    throw Error(Errc::CharacterOutOfRange, "M + N exceeds the character bound");
  }
  std::vector<Run> ra, rb;
  for (std::int64_t i = 1; i <= M; ++i) {
    ra.push_back(Run{M - i + N + 1, k});  // strictly decreasing, all > N
  }
  for (std::int64_t j = 1; j <= N; ++j) {
    rb.push_back(Run{j, l});  // strictly increasing
  }
  return {RleString::from_runs(ra), RleString::from_runs(rb)};
}

std::vector<EditOp> gen_lemma1_script(const RleString& b, std::int64_t steps) {
  if (steps < 1) throw Error(Errc::InfeasibleSpec, "steps must be >= 1");
  Character first = b.at(1);
  if (first - steps < -kMaxAbsCharacter) {
    throw Error(Errc::CharacterOutOfRange, "prepend characters would leave the bound");
  }
  std::vector<EditOp> script;
  for (std::int64_t i = 1; i <= steps; ++i) {
    script.push_back(EditOp::insert_char(1, first - i));
  }
  return script;
}

}  // namespace dyndtw
