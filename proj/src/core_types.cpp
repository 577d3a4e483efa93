#include "dyndtw/core_types.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dyndtw {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::CharacterOutOfRange: return "CharacterOutOfRange";
    case Errc::PositionOutOfRange: return "PositionOutOfRange";
    case Errc::WouldEmptyString: return "WouldEmptyString";
    case Errc::NotABoundaryCell: return "NotABoundaryCell";
    case Errc::InfeasibleSpec: return "InfeasibleSpec";
    case Errc::BoundViolated: return "BoundViolated";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

void check_character(Character c) {
  if (c < -kMaxAbsCharacter || c > kMaxAbsCharacter) {
    throw Error(Errc::CharacterOutOfRange,
                "character " + std::to_string(c) + " outside +-2^20");
  }
}

void RleString::rebuild_index() {
  starts_.clear();
  run_of_.clear();
  starts_.reserve(runs_.size());
  run_of_.reserve(flat_.size());
  std::int64_t pos = 1;
  for (std::size_t r = 0; r < runs_.size(); ++r) {
    starts_.push_back(pos);
    for (std::int64_t k = 0; k < runs_[r].exponent; ++k) {
      run_of_.push_back(static_cast<std::int64_t>(r));
    }
    pos += runs_[r].exponent;
  }
}

RleString RleString::from_flat(std::vector<Character> flat) {
  if (flat.empty()) throw Error(Errc::EmptyInput, "empty sequence");
  if (static_cast<std::int64_t>(flat.size()) > kMaxLength) {
    throw Error(Errc::CharacterOutOfRange, "sequence longer than 2^20");
  }
  for (Character c : flat) check_character(c);
  RleString s;
  s.flat_ = std::move(flat);
  for (Character c : s.flat_) {
    if (s.runs_.empty() || s.runs_.back().ch != c) {
      s.runs_.push_back(Run{c, 1});
    } else {
      ++s.runs_.back().exponent;
    }
  }
  s.rebuild_index();
  return s;
}

RleString RleString::from_runs(const std::vector<Run>& runs) {
  if (runs.empty()) throw Error(Errc::EmptyInput, "empty sequence");
  std::vector<Character> flat;
  for (const Run& r : runs) {
    if (r.exponent < 1) throw Error(Errc::ParseError, "run exponent must be >= 1");
    check_character(r.ch);
    if (static_cast<std::int64_t>(flat.size()) + r.exponent > kMaxLength) {
      throw Error(Errc::CharacterOutOfRange, "sequence longer than 2^20");
    }
    flat.insert(flat.end(), static_cast<std::size_t>(r.exponent), r.ch);
  }
  return from_flat(std::move(flat));
}

RleString rle_encode(const std::vector<Character>& flat) { return RleString::from_flat(flat); }

std::vector<Character> rle_decode(const RleString& r) { return r.flat(); }

namespace {

// Strips '#' comments, returns whitespace-separated tokens per line.
std::vector<std::vector<std::string>> tokenize_lines(const std::string& text) {
  std::vector<std::vector<std::string>> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  return lines;
}

std::int64_t parse_int(const std::string& s) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw Error(Errc::ParseError, "not an integer: '" + s + "'");
  }
  if (used != s.size()) throw Error(Errc::ParseError, "not an integer: '" + s + "'");
  return v;
}

}  // namespace

RleString parse_sequence_text(const std::string& text) {
  auto lines = tokenize_lines(text);
  if (lines.empty()) throw Error(Errc::EmptyInput, "no data in sequence file");
  if (lines.front().size() == 2) {
    std::vector<Run> runs;
    for (const auto& toks : lines) {
      if (toks.size() != 2) {
        throw Error(Errc::ParseError, "RLE form requires two integers per line");
      }
      runs.push_back(Run{parse_int(toks[0]), parse_int(toks[1])});
    }
    // Input runs may be non-maximal; from_runs re-encodes canonically.
    return RleString::from_runs(runs);
  }
  std::vector<Character> flat;
  for (const auto& toks : lines) {
    for (const auto& t : toks) flat.push_back(parse_int(t));
  }
  return RleString::from_flat(std::move(flat));
}

RleString read_sequence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_sequence_text(ss.str());
}

std::string format_sequence_text(const RleString& s, bool rle_form) {
  std::ostringstream out;
  if (rle_form) {
    for (const Run& r : s.runs()) out << r.ch << ' ' << r.exponent << '\n';
  } else {
    for (Character c : s.flat()) out << c << '\n';
  }
  return out.str();
}

void write_sequence_file(const std::string& path, const RleString& s, bool rle_form) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot open " + path + " for writing");
  out << format_sequence_text(s, rle_form);
  if (!out) throw Error(Errc::IoError, "write failed: " + path);
}

}  // namespace dyndtw
