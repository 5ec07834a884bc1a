#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "hglance/commands.hpp"
#include "hglance/config.hpp"
#include "hglance/errors.hpp"

using namespace hglance;

namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("empty config yields the documented defaults") {
  const TrainConfig cfg = parse_config_text("");
  CHECK(cfg.steps == 8000);
  CHECK(cfg.batch == 64);
  CHECK(cfg.n_probes == 10);
  CHECK(cfg.gamma == 0.9);
  CHECK(cfg.alpha == 1e-3);
  CHECK(cfg.beta == 1.0);
  CHECK(cfg.sigma_min == 0.01);
  CHECK(cfg.variant == Variant::Fc);
  CHECK(cfg.advantage == AdvantageMode::Reward);
  CHECK(cfg.d_f == 64);
  CHECK(cfg.d_rep == 64);
  CHECK(cfg.d_attn == 64);
  CHECK(cfg.sim.u_len_max == 3.0);
  CHECK(cfg.sim.test_rz_min == 30.0);
  CHECK(cfg.sim.test_x_min == 0.2);
}

TEST_CASE("config validation: ranges, types, unknown keys, comments") {
  CHECK_THROWS_AS(parse_config_text("gamma = 1.5\n"), RangeError);
  CHECK_THROWS_AS(parse_config_text("gamma = fast\n"), TypeError);
  CHECK_THROWS_AS(parse_config_text("velocity = 3\n"), UnknownKey);
  CHECK_THROWS_AS(parse_config_text("steps 3\n"), TypeError);
  CHECK_THROWS_AS(parse_config_text("variant = lstm\n"), TypeError);
  CHECK_THROWS_AS(parse_config_text("steps = 0\n"), RangeError);
  CHECK_THROWS_AS(parse_config_text("probes = 11\n"), RangeError);
  CHECK_THROWS_AS(parse_config_text("z_init_min = -0.5\nz_init_max = -0.9\n"), RangeError);

  // line numbers appear in messages
  try {
    parse_config_text("steps = 10\ngamma = 2\n");
    FAIL("expected RangeError");
  } catch (const RangeError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  const TrainConfig cfg = parse_config_text(
      "# comment line\n"
      "steps = 12   # trailing comment\n"
      "\n"
      "variant = nclass\n"
      "advantage = return\n");
  CHECK(cfg.steps == 12);
  CHECK(cfg.variant == Variant::NClass);
  CHECK(cfg.advantage == AdvantageMode::Return);
}

TEST_CASE("config echo round-trips and flags override the file") {
  TrainConfig cfg = parse_config_text("steps = 17\nseed = 99\n");
  apply_config_entry(cfg, "steps", "10", "flag --steps");
  CHECK(cfg.steps == 10);

  const std::string echoed = config_to_text(cfg);
  const TrainConfig back = parse_config_text(echoed);
  CHECK(config_to_text(back) == echoed);
  CHECK(back.steps == 10);
  CHECK(back.seed == 99);
}

TEST_CASE("threads_from_env parses and validates") {
  ::setenv("HGLANCE_THREADS", "3", 1);
  CHECK(threads_from_env() == 3);
  ::setenv("HGLANCE_THREADS", "0", 1);
  CHECK(threads_from_env() == 0);
  ::setenv("HGLANCE_THREADS", "many", 1);
  CHECK_THROWS_AS(threads_from_env(), ConfigError);
  ::unsetenv("HGLANCE_THREADS");
  CHECK(threads_from_env() == 0);
}

TEST_CASE("cmd_train writes manifest, metrics and checkpoints; reruns match") {
  TempDir dir("hglance_cmd_train");
  const std::string cfg_path = dir.str() + "/run.cfg";
  {
    std::ofstream f(cfg_path);
    f << "steps = 5\nbatch = 2\nprobes = 3\nd_feature = 8\nd_rep = 8\nd_attn = 8\n"
         "checkpoint_every = 5\n";
  }

  TrainArgs args;
  args.config_path = cfg_path;
  args.out_dir = dir.str() + "/run1";
  cmd_train(args);
  CHECK(fs::exists(args.out_dir + "/manifest.txt"));
  CHECK(fs::exists(args.out_dir + "/metrics.csv"));
  CHECK(fs::exists(args.out_dir + "/checkpoint.hglc"));

  const std::string metrics1 = slurp(args.out_dir + "/metrics.csv");
  CHECK(std::count(metrics1.begin(), metrics1.end(), '\n') == 6);  // header + 5 rows
  CHECK(metrics1.rfind("step,episodes,probe,accuracy,mean_reward,mean_sigma_py,", 0) == 0);

  TrainArgs again = args;
  again.out_dir = dir.str() + "/run2";
  cmd_train(again);
  CHECK(slurp(again.out_dir + "/metrics.csv") == metrics1);
  CHECK(slurp(again.out_dir + "/checkpoint.hglc") == slurp(args.out_dir + "/checkpoint.hglc"));
  CHECK(slurp(again.out_dir + "/manifest.txt") == slurp(args.out_dir + "/manifest.txt"));

  // flag override lands in the manifest echo
  TrainArgs flagged = args;
  flagged.out_dir = dir.str() + "/run3";
  flagged.steps = 2;
  cmd_train(flagged);
  CHECK(slurp(flagged.out_dir + "/manifest.txt").find("steps = 2") != std::string::npos);
  const std::string m3 = slurp(flagged.out_dir + "/metrics.csv");
  CHECK(std::count(m3.begin(), m3.end(), '\n') == 3);
}

TEST_CASE("cmd_train on an unwritable output path fails without partial files") {
  TempDir dir("hglance_cmd_badout");
  const std::string cfg_path = dir.str() + "/run.cfg";
  {
    std::ofstream f(cfg_path);
    f << "steps = 1\nbatch = 1\nprobes = 2\nd_feature = 4\nd_rep = 4\nd_attn = 4\n";
  }
  TrainArgs args;
  args.config_path = cfg_path;
  args.out_dir = dir.str() + "/file_in_the_way/run";
  {
    std::ofstream f(dir.str() + "/file_in_the_way");  // a file, not a directory
    f << "x";
  }
  CHECK_THROWS_AS(cmd_train(args), Error);
  CHECK_FALSE(fs::exists(args.out_dir));
}

TEST_CASE("cmd_eval and cmd_dump_episode round-trip a trained checkpoint") {
  TempDir dir("hglance_cmd_eval");
  const std::string cfg_path = dir.str() + "/run.cfg";
  {
    std::ofstream f(cfg_path);
    f << "steps = 3\nbatch = 2\nprobes = 4\nd_feature = 8\nd_rep = 8\nd_attn = 8\n";
  }
  TrainArgs targs;
  targs.config_path = cfg_path;
  targs.out_dir = dir.str() + "/run";
  cmd_train(targs);

  EvalArgs eargs;
  eargs.checkpoint = targs.out_dir + "/checkpoint.hglc";
  eargs.episodes = 50;
  eargs.split = "test";
  eargs.seed = 7;
  eargs.out_dir = dir.str() + "/eval1";
  cmd_eval(eargs);
  const std::string csv1 = slurp(eargs.out_dir + "/eval.csv");
  CHECK(csv1.rfind("probe,accuracy\n", 0) == 0);
  CHECK(std::count(csv1.begin(), csv1.end(), '\n') == 4);  // header + probes 2..4

  EvalArgs eagain = eargs;
  eagain.out_dir = dir.str() + "/eval2";
  cmd_eval(eagain);
  CHECK(slurp(eagain.out_dir + "/eval.csv") == csv1);

  EvalArgs etrain = eargs;
  etrain.split = "train";
  etrain.out_dir = dir.str() + "/eval3";
  cmd_eval(etrain);  // both splits work against one checkpoint

  DumpArgs dargs;
  dargs.checkpoint = eargs.checkpoint;
  dargs.seed = 3;
  dargs.out_dir = dir.str() + "/dump1";
  cmd_dump_episode(dargs);
  const std::string episode = slurp(dargs.out_dir + "/episode.txt");
  CHECK(std::count(episode.begin(), episode.end(), '\n') == 5);  // scene + 4 probes

  // T column is 0/1 and the scene line parses back
  std::istringstream lines(episode);
  std::string scene_line;
  std::getline(lines, scene_line);
  const Scene scene = scene_from_record(scene_line);
  CHECK(scene.object_id >= 0);
  CHECK(scene.object_id < 4);
  std::string row;
  while (std::getline(lines, row)) {
    std::istringstream rs(row);
    int k, t_flag, pred, truth;
    double py, ux, uy, uz, x, y, z;
    REQUIRE((rs >> k >> py >> ux >> uy >> uz >> x >> y >> z >> t_flag >> pred >> truth));
    CHECK((t_flag == 0 || t_flag == 1));
    CHECK(truth == scene.object_id);
  }

  DumpArgs dagain = dargs;
  dagain.out_dir = dir.str() + "/dump2";
  cmd_dump_episode(dagain);
  CHECK(slurp(dagain.out_dir + "/episode.txt") == episode);

  // corrupting the checkpoint surfaces ChecksumMismatch
  std::string bytes = slurp(eargs.checkpoint);
  bytes[bytes.size() / 3] = static_cast<char>(bytes[bytes.size() / 3] ^ 0x40);
  const std::string bad = dir.str() + "/bad.hglc";
  {
    std::ofstream f(bad, std::ios::binary);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  EvalArgs ebad = eargs;
  ebad.checkpoint = bad;
  CHECK_THROWS_AS(cmd_eval(ebad), ChecksumMismatch);
}
