#include "dyndtw/edit_script.hpp"

#include <fstream>
#include <sstream>

namespace dyndtw {

namespace {

std::int64_t want_int(std::istringstream& in, int line_no, const char* what) {
  std::string tok;
  if (!(in >> tok)) {
    throw Error(Errc::ParseError,
                "line " + std::to_string(line_no) + ": missing " + what);
  }
  try {
    std::size_t used = 0;
    std::int64_t v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::ParseError,
                "line " + std::to_string(line_no) + ": bad integer '" + tok + "'");
  }
}

void want_end(std::istringstream& in, int line_no) {
  std::string tok;
  if (in >> tok) {
    throw Error(Errc::ParseError,
                "line " + std::to_string(line_no) + ": trailing token '" + tok + "'");
  }
}

}  // namespace

std::vector<ScriptLine> parse_edit_script(const std::string& text) {
  std::vector<ScriptLine> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string cmd;
    if (!(ls >> cmd)) continue;
    ScriptLine sl;
    sl.line_no = line_no;
    if (cmd == "query") {
      sl.kind = ScriptLine::Kind::Query;
      want_end(ls, line_no);
    } else if (cmd == "path") {
      sl.kind = ScriptLine::Kind::Path;
      want_end(ls, line_no);
    } else if (cmd == "stats") {
      sl.kind = ScriptLine::Kind::Stats;
      want_end(ls, line_no);
    } else if (cmd == "ins") {
      std::int64_t j = want_int(ls, line_no, "position");
      std::int64_t c = want_int(ls, line_no, "character");
      want_end(ls, line_no);
      sl.kind = ScriptLine::Kind::Edit;
      sl.op = EditOp::insert_char(j, c);
    } else if (cmd == "del") {
      std::int64_t j = want_int(ls, line_no, "position");
      want_end(ls, line_no);
      sl.kind = ScriptLine::Kind::Edit;
      sl.op = EditOp::delete_char(j);
    } else if (cmd == "sub") {
      std::int64_t j = want_int(ls, line_no, "position");
      std::int64_t c = want_int(ls, line_no, "character");
      want_end(ls, line_no);
      sl.kind = ScriptLine::Kind::Edit;
      sl.op = EditOp::substitute_char(j, c);
    } else if (cmd == "insrun") {
      std::int64_t j = want_int(ls, line_no, "position");
      std::int64_t c = want_int(ls, line_no, "character");
      std::int64_t k = want_int(ls, line_no, "length");
      want_end(ls, line_no);
      sl.kind = ScriptLine::Kind::Edit;
      sl.op = EditOp::insert_run(j, c, k);
    } else if (cmd == "delrun") {
      std::int64_t j = want_int(ls, line_no, "position");
      std::int64_t k = want_int(ls, line_no, "length");
      want_end(ls, line_no);
      sl.kind = ScriptLine::Kind::Edit;
      sl.op = EditOp::delete_run(j, k);
    } else if (cmd == "subrun") {
      std::int64_t j = want_int(ls, line_no, "position");
      std::int64_t k1 = want_int(ls, line_no, "replaced length");
      std::int64_t c = want_int(ls, line_no, "character");
      std::int64_t k2 = want_int(ls, line_no, "replacement length");
      want_end(ls, line_no);
      sl.kind = ScriptLine::Kind::Edit;
      sl.op = EditOp::substitute_run(j, k1, c, k2);
    } else {
      throw Error(Errc::ParseError,
                  "line " + std::to_string(line_no) + ": unknown command '" + cmd + "'");
    }
    out.push_back(sl);
  }
  return out;
}

std::vector<ScriptLine> read_edit_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_edit_script(ss.str());
}

}  // namespace dyndtw
