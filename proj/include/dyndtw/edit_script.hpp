#ifndef DYNDTW_EDIT_SCRIPT_HPP
#define DYNDTW_EDIT_SCRIPT_HPP

#include <string>
#include <vector>

#include "dyndtw/dynamic_update.hpp"

namespace dyndtw {

// One line of a session script: an edit, or a query/path/stats command.
struct ScriptLine {
  enum class Kind { Edit, Query, Path, Stats } kind = Kind::Query;
  EditOp op;
  int line_no = 0;
};

// Script grammar, one command per line, '#' comments:
//   ins <j> <c> | del <j> | sub <j> <c>
//   insrun <j> <c> <k> | delrun <j> <k> | subrun <j> <k1> <c> <k2>
//   query | path | stats
std::vector<ScriptLine> parse_edit_script(const std::string& text);
std::vector<ScriptLine> read_edit_script(const std::string& path);

}  // namespace dyndtw

#endif  // DYNDTW_EDIT_SCRIPT_HPP
