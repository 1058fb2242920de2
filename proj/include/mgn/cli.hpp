#ifndef MGN_CLI_HPP
#define MGN_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace mgn {

// Runs the full command line (without argv[0]). Results go to out,
// diagnostics to err. Exit codes: 0 success, 1 verification failure,
// 2 usage or parse error.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mgn

#endif
