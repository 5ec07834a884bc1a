#include "hglance/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hglance/config.hpp"
#include "hglance/errors.hpp"
#include "hglance/trainer.hpp"

namespace hglance {

namespace fs = std::filesystem;

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open for write: " + tmp);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw Error("write failed: " + tmp);
  }
  fs::rename(tmp, path);
}

void cmd_train(const TrainArgs& args) {
  TrainConfig cfg = parse_config_file(args.config_path);
  if (args.steps) apply_config_entry(cfg, "steps", std::to_string(*args.steps), "flag --steps");
  if (args.batch) apply_config_entry(cfg, "batch", std::to_string(*args.batch), "flag --batch");
  if (args.seed) apply_config_entry(cfg, "seed", std::to_string(*args.seed), "flag --seed");
  if (args.variant) apply_config_entry(cfg, "variant", *args.variant, "flag --variant");
  if (args.advantage)
    apply_config_entry(cfg, "advantage", *args.advantage, "flag --advantage");
  validate_config(cfg);
  cfg.threads = threads_from_env();

  std::error_code ec;
  fs::create_directories(args.out_dir, ec);
  if (ec || !fs::is_directory(args.out_dir))
    throw Error("cannot create output directory: " + args.out_dir);

  write_file_atomic(args.out_dir + "/manifest.txt",
                    "# hglance run manifest (format 1)\n" + config_to_text(cfg));

  TrainResult res = train(cfg, args.out_dir);
  write_file_atomic(args.out_dir + "/metrics.csv", metrics_to_csv(res.metrics));

  std::printf("trained %d steps (batch %d); final batch accuracy %.3f\n", cfg.steps,
              cfg.batch, res.metrics.empty() ? 0.0 : res.metrics.back().accuracy);
  std::printf("checkpoint: %s/checkpoint.hglc\n", args.out_dir.c_str());
}

namespace {

Split parse_split(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "test") return Split::Test;
  throw ConfigError("split must be train or test");
}

}  // namespace

void cmd_eval(const EvalArgs& args) {
  const ParameterStore store = load_checkpoint(args.checkpoint);
  const Model model = Model::from_store(store);
  const World world(Model::sim_from_store(store));
  const Split split = parse_split(args.split);
  const int threads = threads_from_env();

  const std::vector<double> acc = evaluate(store, model, world, args.episodes, split,
                                           args.seed, threads, args.deterministic);

  std::printf("per-probe accuracy (%s split, %d episodes)\n", args.split.c_str(),
              args.episodes);
  std::printf("%6s  %8s\n", "probe", "accuracy");
  std::string csv = "probe,accuracy\n";
  char buf[64];
  for (std::size_t k = 1; k < acc.size(); ++k) {  // report starts at probe 2
    std::printf("%6zu  %8.4f\n", k + 1, acc[k]);
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", k + 1, acc[k]);
    csv += buf;
  }
  std::error_code ec;
  fs::create_directories(args.out_dir, ec);
  write_file_atomic(args.out_dir + "/eval.csv", csv);
}

void cmd_dump_episode(const DumpArgs& args) {
  const ParameterStore store = load_checkpoint(args.checkpoint);
  const Model model = Model::from_store(store);
  const World world(Model::sim_from_store(store));

  Rng rng = Rng::stream(args.seed, 0);
  const Scene scene = world.sample_scene(rng, Split::Test);
  const Trajectory traj =
      rollout(world, scene, store, model, model.cfg.n_probes, rng);

  std::string out = scene_to_record(scene) + "\n";
  char buf[400];
  for (std::size_t k = 0; k < traj.steps.size(); ++k) {
    const StepRecord& s = traj.steps[k];
    std::snprintf(buf, sizeof(buf), "%zu %.9g %.9g %.9g %.9g %.9g %.9g %.9g %d %d %d\n",
                  k + 1, s.probe.py, s.probe.u.x, s.probe.u.y, s.probe.u.z, s.point.x,
                  s.point.y, s.point.z, s.point.touched, s.predicted, traj.truth);
    out += buf;
  }
  std::error_code ec;
  fs::create_directories(args.out_dir, ec);
  write_file_atomic(args.out_dir + "/episode.txt", out);
  std::printf("wrote %s/episode.txt (%zu probes, object %d)\n", args.out_dir.c_str(),
              traj.steps.size(), traj.truth);
}

}  // namespace hglance
