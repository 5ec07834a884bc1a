#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "hglance/commands.hpp"
#include "hglance/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hglance: haptic-glance exploration trainer"};
  app.require_subcommand(1);

  hglance::TrainArgs train_args;
  int train_steps = 0, train_batch = 0;
  std::uint64_t train_seed = 0;
  std::string train_variant, train_advantage;
  auto* train = app.add_subcommand("train", "train a model");
  train->add_option("--config", train_args.config_path, "config file (key = value lines)")
      ->required();
  auto* opt_steps = train->add_option("--steps", train_steps, "override steps");
  auto* opt_batch = train->add_option("--batch", train_batch, "override batch size");
  auto* opt_seed = train->add_option("--seed", train_seed, "override seed");
  auto* opt_variant =
      train->add_option("--variant", train_variant, "classifier variant (fc|nclass)");
  auto* opt_advantage =
      train->add_option("--advantage", train_advantage, "advantage mode (reward|return)");
  train->add_option("--out", train_args.out_dir, "output directory (default: out)");

  hglance::EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "per-probe accuracy of a checkpoint");
  eval->add_option("--checkpoint", eval_args.checkpoint, "checkpoint file")->required();
  eval->add_option("--episodes", eval_args.episodes, "episode count (default 2000)");
  eval->add_option("--split", eval_args.split, "train|test (default test)");
  eval->add_option("--seed", eval_args.seed, "evaluation seed (default 1234)");
  eval->add_option("--out", eval_args.out_dir, "directory for eval.csv (default .)");
  eval->add_flag("--deterministic", eval_args.deterministic,
                 "take mu instead of sampling (non-standard eval mode)");

  hglance::DumpArgs dump_args;
  auto* dump = app.add_subcommand("dump-episode", "dump one episode as text");
  dump->add_option("--checkpoint", dump_args.checkpoint, "checkpoint file")->required();
  dump->add_option("--seed", dump_args.seed, "episode seed")->required();
  dump->add_option("--out", dump_args.out_dir, "directory for episode.txt (default .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (train->parsed()) {
      if (*opt_steps) train_args.steps = train_steps;
      if (*opt_batch) train_args.batch = train_batch;
      if (*opt_seed) train_args.seed = train_seed;
      if (*opt_variant) train_args.variant = train_variant;
      if (*opt_advantage) train_args.advantage = train_advantage;
      hglance::cmd_train(train_args);
    } else if (eval->parsed()) {
      hglance::cmd_eval(eval_args);
    } else if (dump->parsed()) {
      hglance::cmd_dump_episode(dump_args);
    }
  } catch (const hglance::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
