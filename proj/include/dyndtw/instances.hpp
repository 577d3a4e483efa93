#ifndef DYNDTW_INSTANCES_HPP
#define DYNDTW_INSTANCES_HPP

#include <cstdint>
#include <vector>

#include "dyndtw/core_types.hpp"
#include "dyndtw/dynamic_update.hpp"

namespace dyndtw {

// Deterministic 64-bit generator (splitmix64); sampling avoids
// std::uniform_int_distribution so identical seeds reproduce across
// platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, bound)
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

struct RandomSpec {
  std::int64_t length = 0;         // m
  std::int64_t rle_size = 0;       // M <= m
  std::int64_t alphabet_size = 26;
  std::uint64_t seed = 0;
};

struct AdversarialSpec {
  std::int64_t run_count_a = 0;  // M
  std::int64_t run_count_b = 0;  // N
  std::int64_t exp_a = 1;        // k
  std::int64_t exp_b = 1;        // l
};

// Exact length and RLE size: M-1 distinct cut points over the m-1 gaps fix
// the run lengths; characters walk the alphabet, never repeating the
// previous run's character. Errors: InfeasibleSpec.
RleString gen_random(const RandomSpec& spec);

// Decreasing runs in A, increasing runs in B, with A's last run above B's:
// A_I = M - I + N + 1 (1-based I), B_J = J.
std::pair<RleString, RleString> gen_adversarial(const AdversarialSpec& spec);

// Prepend script for the non-amortization scenario: k insertions at position
// 1 with strictly decreasing fresh characters below B[1]. Requires B built by
// gen_adversarial with all exponents 1.
std::vector<EditOp> gen_lemma1_script(const RleString& b, std::int64_t steps);

}  // namespace dyndtw

#endif  // DYNDTW_INSTANCES_HPP
