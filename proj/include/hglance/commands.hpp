#ifndef HGLANCE_COMMANDS_HPP_
#define HGLANCE_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <string>

namespace hglance {

struct TrainArgs {
  std::string config_path;
  std::optional<int> steps;
  std::optional<int> batch;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> variant;    // fc | nclass
  std::optional<std::string> advantage;  // reward | return
  std::string out_dir = "out";
};

struct EvalArgs {
  std::string checkpoint;
  int episodes = 2000;
  std::string split = "test";  // train | test
  std::uint64_t seed = 1234;
  std::string out_dir = ".";
  bool deterministic = false;
};

struct DumpArgs {
  std::string checkpoint;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

// Command bodies; they throw (ConfigError for bad configuration, Error for
// runtime failures) and the CLI maps exceptions to exit codes.
void cmd_train(const TrainArgs& args);
void cmd_eval(const EvalArgs& args);
void cmd_dump_episode(const DumpArgs& args);

// write-temp-then-rename
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace hglance

#endif  // HGLANCE_COMMANDS_HPP_
