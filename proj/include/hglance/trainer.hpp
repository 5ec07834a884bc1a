#ifndef HGLANCE_TRAINER_HPP_
#define HGLANCE_TRAINER_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hglance/episode.hpp"
#include "hglance/model.hpp"
#include "hglance/param_store.hpp"
#include "hglance/sim.hpp"

namespace hglance {

enum class AdvantageMode { Reward, Return };
enum class OptKind { Adam, Sgd };

struct TrainConfig {
  int steps = 8000;
  int batch = 64;
  int n_probes = 10;
  double gamma = 0.9;
  double alpha = 1e-3;
  double beta = 1.0;
  double sigma_min = 0.01;
  std::uint64_t seed = 1;
  Variant variant = Variant::Fc;
  AdvantageMode advantage = AdvantageMode::Reward;
  OptKind optimizer = OptKind::Adam;
  int d_f = 64;
  int d_rep = 64;
  int d_attn = 64;
  int checkpoint_every = 500;
  int threads = 0;  // 0 = single-threaded; concurrent mode matches it bitwise
  SimConfig sim;

  ModelConfig model_config() const;
};

// G_k = sum_{j=k+1..N} gamma^{j-k+1} r_j, exactly as printed (the immediate
// next reward is discounted by gamma^2); G_N = 0.
std::vector<double> discounted_returns(const std::vector<double>& rewards, double gamma);

struct BatchStats {
  double final_accuracy = 0.0;  // batch accuracy at the last probe
  double mean_reward = 0.0;
  std::array<double, 4> mean_sigma{};
  double clip_rate = 0.0;
};

// Replays each trajectory through a fresh tape, accumulates the hybrid loss
// (cross-entropy every step, advantage-weighted Gaussian log-density when
// beta > 0, baseline squared error on a detached trunk), merges per-episode
// gradients in episode order and applies one optimizer step.
BatchStats hybrid_update(const std::vector<Trajectory>& batch, ParameterStore& store,
                         const Model& model, const TrainConfig& cfg);

struct MetricsRow {
  int step = 0;
  long long episodes = 0;  // cumulative episodes after this step
  int probe = 0;           // probe index the accuracy column refers to (= N)
  double accuracy = 0.0;
  double mean_reward = 0.0;
  std::array<double, 4> mean_sigma{};
  double clip_rate = 0.0;
};

std::string metrics_to_csv(const std::vector<MetricsRow>& rows);

struct TrainResult {
  ParameterStore store;
  Model model;
  std::vector<MetricsRow> metrics;
};

// Full training loop; checkpoints go to out_dir every checkpoint_every steps
// and at the end (skipped when out_dir is empty).
TrainResult train(const TrainConfig& cfg, const std::string& out_dir = "");

// Per-probe accuracy over freshly sampled episodes of a split, stochastic
// policy unless deterministic is set. Index 0 is probe 1.
std::vector<double> evaluate(const ParameterStore& store, const Model& model,
                             const World& world, int episodes, Split split,
                             std::uint64_t seed, int threads = 0,
                             bool deterministic = false, int n_probes = 0);

// Runs fn(0..n-1); threads <= 1 executes inline. Worker exceptions are
// rethrown on the calling thread.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace hglance

#endif  // HGLANCE_TRAINER_HPP_
