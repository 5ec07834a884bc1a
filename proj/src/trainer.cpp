#include "hglance/trainer.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include "hglance/errors.hpp"
#include "hglance/optimizer.hpp"

namespace hglance {

ModelConfig TrainConfig::model_config() const {
  ModelConfig mc;
  mc.d_f = d_f;
  mc.d_rep = d_rep;
  mc.d_attn = d_attn;
  mc.n_probes = n_probes;
  mc.variant = variant;
  mc.sigma_min = sigma_min;
  return mc;
}

std::vector<double> discounted_returns(const std::vector<double>& rewards, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw RangeError("gamma must be in [0,1)");
  const int n = static_cast<int>(rewards.size());
  std::vector<double> g(static_cast<std::size_t>(n), 0.0);
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (int j = k + 1; j <= n; ++j)
      acc += std::pow(gamma, j - k + 1) * rewards[static_cast<std::size_t>(j - 1)];
    g[static_cast<std::size_t>(k - 1)] = acc;
  }
  return g;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads > n) threads = n;
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

struct ReplayActions final : ActionSource {
  const Trajectory* traj;
  double draw(int k, int comp, double, double) override {
    return traj->steps[static_cast<std::size_t>(k - 1)].policy.raw[static_cast<std::size_t>(comp)];
  }
};

struct ReplayPoints final : PointSource {
  const Trajectory* traj;
  CollectedPoint sense(int k, const ProbeRequest&) override {
    return traj->steps[static_cast<std::size_t>(k - 1)].point;
  }
};

struct EpisodeResult {
  std::map<std::string, Tensor> grads;
  double final_correct = 0.0;
  double reward_sum = 0.0;
  std::array<double, 4> sigma_sum{};
  int clip_count = 0;
};

EpisodeResult episode_gradients(const Trajectory& traj, const ParameterStore& store,
                                const Model& model, const TrainConfig& cfg) {
  Tape tape(&store);
  ReplayActions actions;
  actions.traj = &traj;
  ReplayPoints points;
  points.traj = &traj;

  Trajectory replayed;
  replayed.scene = traj.scene;
  replayed.truth = traj.truth;
  EpisodeNodes nodes;
  drive_episode(tape, model, static_cast<int>(traj.steps.size()), actions, points,
                replayed, &nodes);

  const int n = static_cast<int>(replayed.steps.size());
  std::vector<double> rewards(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) rewards[static_cast<std::size_t>(k)] = replayed.steps[static_cast<std::size_t>(k)].reward;
  const std::vector<double> returns = discounted_returns(rewards, cfg.gamma);

  Tape::Id total = -1;
  for (int k = 0; k < n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    Tape::Id ce = tape.softmax_cross_entropy(nodes.logits[ku], traj.truth);
    Tape::Id loss_k = ce;

    const double target = cfg.advantage == AdvantageMode::Reward ? rewards[ku] : returns[ku];
    if (cfg.beta > 0.0) {
      const double advantage = target - tape.scalar(nodes.baseline[ku]);
      Tape::Id logp = -1;
      for (int c = 0; c < kComponents; ++c) {
        const auto cu = static_cast<std::size_t>(c);
        Tape::Id lp = tape.gaussian_log_density(replayed.steps[ku].policy.raw[cu],
                                                nodes.mu[ku][cu], nodes.sigma[ku][cu],
                                                cfg.sigma_min);
        logp = (c == 0) ? lp : tape.add(logp, lp);
      }
      loss_k = tape.add(loss_k, tape.mul_scalar(logp, -cfg.beta * advantage));
    }
    loss_k = tape.add(loss_k, tape.squared_error(nodes.baseline[ku], target));
    total = (k == 0) ? loss_k : tape.add(total, loss_k);
  }
  tape.backward(total);

  EpisodeResult res;
  res.grads = tape.param_grads();
  res.final_correct = replayed.steps.back().reward;
  for (int k = 0; k < n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    res.reward_sum += replayed.steps[ku].reward;
    for (int c = 0; c < 4; ++c) {
      res.sigma_sum[static_cast<std::size_t>(c)] +=
          replayed.steps[ku].policy.sigma[static_cast<std::size_t>(c)];
      if (replayed.steps[ku].policy.clip_hit[static_cast<std::size_t>(c)]) ++res.clip_count;
    }
  }
  return res;
}

}  // namespace

BatchStats hybrid_update(const std::vector<Trajectory>& batch, ParameterStore& store,
                         const Model& model, const TrainConfig& cfg) {
  if (batch.empty()) throw EmptyInput("hybrid_update: empty batch");
  const int b = static_cast<int>(batch.size());

  std::vector<EpisodeResult> results(static_cast<std::size_t>(b));
  parallel_for(b, cfg.threads, [&](int i) {
    results[static_cast<std::size_t>(i)] =
        episode_gradients(batch[static_cast<std::size_t>(i)], store, model, cfg);
  });

  store.zero_grads();
  const double scale = 1.0 / static_cast<double>(b);
  BatchStats stats;
  long long step_count = 0;
  for (const EpisodeResult& r : results) {  // fixed episode order
    for (const auto& [name, g] : r.grads) {
      Tensor& dst = store.grad(name);
      for (std::size_t i = 0; i < g.data.size(); ++i) dst.data[i] += scale * g.data[i];
    }
    stats.final_accuracy += r.final_correct;
    stats.mean_reward += r.reward_sum;
    for (int c = 0; c < 4; ++c)
      stats.mean_sigma[static_cast<std::size_t>(c)] += r.sigma_sum[static_cast<std::size_t>(c)];
    stats.clip_rate += r.clip_count;
    step_count += static_cast<long long>(batch[0].steps.size());
  }

  for (const auto& [name, e] : store) {
    if (!e.trainable) continue;
    if (!e.grad.all_finite()) throw NonFiniteGradient("non-finite gradient in " + name);
  }

  if (cfg.optimizer == OptKind::Adam) {
    AdamConfig ac;
    ac.lr = cfg.alpha;
    adam_step(store, ac);
  } else {
    sgd_step(store, cfg.alpha);
  }

  const double denom = static_cast<double>(step_count);
  stats.final_accuracy /= static_cast<double>(b);
  stats.mean_reward /= denom;
  for (auto& s : stats.mean_sigma) s /= denom;
  stats.clip_rate /= denom * 4.0;
  return stats;
}

std::string metrics_to_csv(const std::vector<MetricsRow>& rows) {
  std::string out =
      "step,episodes,probe,accuracy,mean_reward,mean_sigma_py,mean_sigma_ux,"
      "mean_sigma_uy,mean_sigma_uz,clip_rate\n";
  char buf[320];
  for (const MetricsRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%lld,%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                  r.step, r.episodes, r.probe, r.accuracy, r.mean_reward, r.mean_sigma[0],
                  r.mean_sigma[1], r.mean_sigma[2], r.mean_sigma[3], r.clip_rate);
    out += buf;
  }
  return out;
}

TrainResult train(const TrainConfig& cfg, const std::string& out_dir) {
  World world(cfg.sim);
  TrainResult res;
  res.model = Model::init(res.store, cfg.model_config(), cfg.seed);
  Model::write_meta(res.store, cfg.model_config(), cfg.sim);
  res.metrics.reserve(static_cast<std::size_t>(cfg.steps));

  std::vector<Trajectory> batch(static_cast<std::size_t>(cfg.batch));
  for (int step = 1; step <= cfg.steps; ++step) {
    parallel_for(cfg.batch, cfg.threads, [&](int i) {
      const std::uint64_t episode_index =
          static_cast<std::uint64_t>(step - 1) * static_cast<std::uint64_t>(cfg.batch) +
          static_cast<std::uint64_t>(i);
      Rng rng = Rng::stream(cfg.seed, episode_index);
      const Scene scene = world.sample_scene(rng, Split::Train);
      batch[static_cast<std::size_t>(i)] =
          rollout(world, scene, res.store, res.model, cfg.n_probes, rng);
    });

    BatchStats stats;
    try {
      stats = hybrid_update(batch, res.store, res.model, cfg);
    } catch (const NonFiniteGradient& e) {
      throw NonFiniteGradient("step " + std::to_string(step) + ": " + e.what());
    }

    MetricsRow row;
    row.step = step;
    row.episodes = static_cast<long long>(step) * cfg.batch;
    row.probe = cfg.n_probes;
    row.accuracy = stats.final_accuracy;
    row.mean_reward = stats.mean_reward;
    row.mean_sigma = stats.mean_sigma;
    row.clip_rate = stats.clip_rate;
    res.metrics.push_back(row);

    if (!out_dir.empty() && cfg.checkpoint_every > 0 && step % cfg.checkpoint_every == 0) {
      char name[64];
      std::snprintf(name, sizeof(name), "/checkpoint_%06d.hglc", step);
      save_checkpoint(res.store, out_dir + name);
    }
  }
  if (!out_dir.empty()) save_checkpoint(res.store, out_dir + "/checkpoint.hglc");
  return res;
}

std::vector<double> evaluate(const ParameterStore& store, const Model& model,
                             const World& world, int episodes, Split split,
                             std::uint64_t seed, int threads, bool deterministic,
                             int n_probes) {
  if (episodes <= 0) throw RangeError("evaluate: episodes must be positive");
  if (n_probes <= 0) n_probes = model.cfg.n_probes;

  std::vector<std::vector<char>> correct(
      static_cast<std::size_t>(episodes));
  parallel_for(episodes, threads, [&](int i) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
    const Scene scene = world.sample_scene(rng, split);
    const Trajectory traj = rollout(world, scene, store, model, n_probes, rng, deterministic);
    std::vector<char> ok(static_cast<std::size_t>(n_probes), 0);
    for (int k = 0; k < n_probes; ++k)
      ok[static_cast<std::size_t>(k)] = traj.steps[static_cast<std::size_t>(k)].reward > 0.5;
    correct[static_cast<std::size_t>(i)] = std::move(ok);
  });

  std::vector<double> acc(static_cast<std::size_t>(n_probes), 0.0);
  for (const auto& ok : correct)
    for (int k = 0; k < n_probes; ++k) acc[static_cast<std::size_t>(k)] += ok[static_cast<std::size_t>(k)];
  for (double& a : acc) a /= static_cast<double>(episodes);
  return acc;
}

}  // namespace hglance
