/*
 * cli.hpp
 * -------
 * Command line front end. run_cli drives every subcommand against the
 * given streams and returns the process exit code: 0 on success, 1 on
 * validation or input errors, 2 when a resource cap is exceeded.
 */
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mcstat {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mcstat
