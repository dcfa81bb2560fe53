#ifndef LOPOS_CLI_CLI_HPP_
#define LOPOS_CLI_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "lopos/cli/io.hpp"

namespace lopos::cli {

  inline constexpr char const* kSchemaVersion = "lopos-report/1";

  enum ExitCode : int { pass = 0, failed = 1, invalid_input = 2, not_converged = 3 };

  struct Verdict {
    std::string check;
    bool        pass = false;
    io::json    witness;
  };

  // Everything but `seconds` is serialized, so identical inputs and
  // options give identical bytes.
  struct RunReport {
    std::string          command;
    io::json             inputs = io::json::array();
    io::json             configuration = io::json::object();
    std::vector<Verdict> verdicts;
    io::json             result = io::json::object();
    std::string          error;
    int                  exit_code = ExitCode::pass;
    double               seconds   = 0;

    void add_input(std::string const& role, io::Document const& doc);
    void check(std::string name, bool pass, io::json witness = nullptr);
    bool all_pass() const;

    io::json    to_json() const;
    std::string dump() const;
    std::string summary() const;
  };

  // argv without the program name. Writes the text summary to `out`,
  // diagnostics to `err`, and returns the exit code.
  int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

}  // namespace lopos::cli

#endif  // LOPOS_CLI_CLI_HPP_
