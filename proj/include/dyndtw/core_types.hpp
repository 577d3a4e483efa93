#ifndef DYNDTW_CORE_TYPES_HPP
#define DYNDTW_CORE_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dyndtw {

// Sample values are exact signed integers; squared-distance arithmetic is
// closed over int64 as long as |value| stays within kMaxAbsCharacter and
// sequence lengths stay within kMaxLength (any path cost then fits in 63 bits).
using Character = std::int64_t;
using Cost = std::int64_t;

inline constexpr Character kMaxAbsCharacter = Character{1} << 20;
inline constexpr std::int64_t kMaxLength = std::int64_t{1} << 20;

enum class Errc {
  EmptyInput,
  CharacterOutOfRange,
  PositionOutOfRange,
  WouldEmptyString,
  NotABoundaryCell,
  InfeasibleSpec,
  BoundViolated,
  ParseError,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

const char* errc_name(Errc c);

struct Run {
  Character ch = 0;
  std::int64_t exponent = 0;  // always >= 1
};

inline bool operator==(const Run& a, const Run& b) {
  return a.ch == b.ch && a.exponent == b.exponent;
}

// A sequence kept both flat and as maximal runs. Positions are 1-based
// throughout; run indices are 0-based in code.
class RleString {
 public:
  RleString() = default;

  static RleString from_flat(std::vector<Character> flat);
  static RleString from_runs(const std::vector<Run>& runs);

  const std::vector<Character>& flat() const { return flat_; }
  const std::vector<Run>& runs() const { return runs_; }

  std::int64_t length() const { return static_cast<std::int64_t>(flat_.size()); }
  std::int64_t run_count() const { return static_cast<std::int64_t>(runs_.size()); }

  Character at(std::int64_t pos) const { return flat_[static_cast<std::size_t>(pos - 1)]; }

  // First and last positions covered by run r (0-based run index).
  std::int64_t run_first(std::int64_t r) const { return starts_[static_cast<std::size_t>(r)]; }
  std::int64_t run_last(std::int64_t r) const {
    return starts_[static_cast<std::size_t>(r)] + runs_[static_cast<std::size_t>(r)].exponent - 1;
  }
  // Run index (0-based) containing position pos.
  std::int64_t run_of(std::int64_t pos) const { return run_of_[static_cast<std::size_t>(pos - 1)]; }

  bool operator==(const RleString& o) const { return flat_ == o.flat_; }

 private:
  void rebuild_index();

  std::vector<Character> flat_;
  std::vector<Run> runs_;
  std::vector<std::int64_t> starts_;   // per run: first position
  std::vector<std::int64_t> run_of_;   // per position (0-based): run index
};

// Maximal-run encoding of a flat array. Errors: EmptyInput, CharacterOutOfRange.
RleString rle_encode(const std::vector<Character>& flat);

// Expansion of runs in order; inverse of rle_encode.
std::vector<Character> rle_decode(const RleString& r);

void check_character(Character c);

// Sequence file format: UTF-8 text, '#' comments. Auto-detected by the first
// non-comment line: exactly two integers means RLE lines "c e", anything else
// means whitespace-separated flat values.
RleString read_sequence_file(const std::string& path);
RleString parse_sequence_text(const std::string& text);
void write_sequence_file(const std::string& path, const RleString& s, bool rle_form = true);
std::string format_sequence_text(const RleString& s, bool rle_form = true);

}  // namespace dyndtw

#endif  // DYNDTW_CORE_TYPES_HPP
