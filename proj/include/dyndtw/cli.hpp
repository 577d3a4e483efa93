#ifndef DYNDTW_CLI_HPP
#define DYNDTW_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace dyndtw {

// Exit codes: 0 success, 2 input error, 3 script/precondition error,
// 4 internal verification failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Locale-independent float formatting: shortest round-trip, always with a
// decimal point ("0.0", "3.0", "1.4142135623730951").
std::string format_double(double v);

}  // namespace dyndtw

#endif  // DYNDTW_CLI_HPP
