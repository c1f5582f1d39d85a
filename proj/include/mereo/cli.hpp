// Command-line front end as a library: run() takes a parsed configuration and
// the input text, and returns what the tool would print plus its exit code.

#ifndef MEREO_CLI_HPP
#define MEREO_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mereo::cli {

enum class Command { Decide, Eliminate, OracleCompare, HfVerify };
enum class Format { Text, Json };

// Exit codes: a stable contract.
inline constexpr int kExitTrue = 0;
inline constexpr int kExitOk = 0;
inline constexpr int kExitFalse = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCheckFailed = 3;
inline constexpr int kExitBudget = 4;

inline constexpr const char* kSchema = "mereo/1";

struct RunConfig {
  Command command = Command::Decide;
  // Unset: text for decide and eliminate, json for the report commands.
  std::optional<Format> format;
  bool trace = false;
  // Node budget for elimination; pair budget for hf-verify sweeps.
  std::uint64_t budget = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t count = 500;
  std::uint64_t universe_size = 8;
  std::uint64_t max_rank = 3;
  std::string z_spec = "{}";
  // Assignments sampled per formula by oracle-compare.
  std::uint64_t samples = 20;
};

struct RunResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command c);
std::optional<Format> parse_format(std::string_view name);

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "-" reads `stdin_stream`, "@path" reads a file, anything else is the text itself.
std::string resolve_input(const std::string& arg, std::istream& stdin_stream);

// Never throws; every failure becomes an exit code and a message on `err`.
RunResult run(const RunConfig& config, std::string_view input);

}  // namespace mereo::cli

#endif  // MEREO_CLI_HPP
