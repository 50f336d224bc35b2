#ifndef QMDOS_TOOLS_COMMANDS_HPP
#define QMDOS_TOOLS_COMMANDS_HPP

#include "qmdos/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qmdos::cli {

enum class Format { csv, json };

/// Exit statuses of the command-line tool.
enum ExitCode : int { exit_ok = 0, exit_verification_failed = 1, exit_usage = 2 };

struct RunConfig {
   std::string command;
   unsigned n = 3;
   std::string alpha = "2";
   unsigned jmax = 64;
   unsigned jstep = 0; // 0: command default
   unsigned order = 4;
   unsigned max_n = 60;
   unsigned points = 0; // 0: command default (101, figure1 501)
   std::uint64_t samples = 1000000;
   unsigned bins = 100;
   std::uint64_t seed = 42;
   int precision_digits = 30;
   double tolerance = 0.05;
   double richardson_tolerance = 1e-6;
   std::string output_path;
   Format format = Format::csv;
};

/// Rows of rendered cells with named columns; serialised as CSV or JSON.
struct Table {
   std::vector<std::string> columns;
   std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& out, const Table& table);
nlohmann::json table_to_json(const Table& table);

/// Result of one command: data for the output sink plus the exit status.
struct CommandResult {
   Table table;
   nlohmann::json extra = nlohmann::json::object();
   int status = exit_ok;
};

CommandResult cmd_density(const RunConfig& cfg);
CommandResult cmd_figure1(const RunConfig& cfg);
CommandResult cmd_normalize(const RunConfig& cfg);
CommandResult cmd_identity(const RunConfig& cfg);
CommandResult cmd_omega_series(const RunConfig& cfg);
CommandResult cmd_richardson(const RunConfig& cfg);
CommandResult cmd_saddle(const RunConfig& cfg);
CommandResult cmd_montecarlo(const RunConfig& cfg);
CommandResult cmd_verify_all(const RunConfig& cfg);

CommandResult dispatch(const RunConfig& cfg);

/// JSON echo of the configuration, included in every JSON document.
nlohmann::json config_echo(const RunConfig& cfg);

/// Full command-line entry point. Writes data to the configured sink (stdout
/// when neither --output nor QMDOS_OUTPUT_DIR is set), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qmdos::cli

#endif // QMDOS_TOOLS_COMMANDS_HPP
