#include "hglance/episode.hpp"

#include <algorithm>

#include "hglance/classifier.hpp"
#include "hglance/errors.hpp"

namespace hglance {

EpisodeGraph::EpisodeGraph(Tape& tape, const Model& model)
    : tape_(tape), model_(model) {
  req_.weights = &model.req;
  col_.weights = &model.col;
}

Tape::Id EpisodeGraph::pooled_completed() {
  if (rep_rows_.empty())
    return tape_.leaf(Tensor::zeros({1, static_cast<std::size_t>(model_.cfg.d_rep)}));
  return pooled_.back();
}

std::pair<Tape::Id, Tape::Id> EpisodeGraph::policy_params(
    Tape::Id state, int comp, const std::array<double, 4>& partial) {
  return predict_params(tape_, state, partial, comp, comp, model_);
}

Tape::Id EpisodeGraph::baseline_from(Tape::Id state) {
  return apply_mlp(tape_, tape_.detach(state), model_.baseline);
}

Tape::Id EpisodeGraph::append_modality(Modality& m, const std::array<double, 4>& row) {
  const std::size_t k = m.f_rows.size() + 1;
  Tape::Id row_leaf = tape_.row_leaf({row[0], row[1], row[2], row[3]});
  Tape::Id f_k = apply_mlp(tape_, row_leaf, m.weights->point);
  m.f_sum = (k == 1) ? f_k : tape_.add(m.f_sum, f_k);
  Tape::Id ca_k = tape_.mul_scalar(m.f_sum, 1.0 / static_cast<double>(k));

  std::vector<Tape::Id> prefix_rows = m.f_rows;
  prefix_rows.push_back(f_k);
  Tape::Id prefix = tape_.concat_rows(prefix_rows);
  Tape::Id anchor = tape_.repeat_row(ca_k, k);
  Tape::Id scores = apply_mlp(tape_, tape_.concat_cols(prefix, anchor), m.weights->attn);
  Tape::Id weights = tape_.softmax_col(scores);
  Tape::Id context = tape_.rows_weighted_sum(weights, prefix);

  m.f_rows.push_back(f_k);
  return apply_mlp(tape_, tape_.concat_cols(f_k, context), m.weights->out);
}

void EpisodeGraph::append(const std::array<double, 4>& request_row,
                          const std::array<double, 4>& point_row) {
  Tape::Id er = append_modality(req_, request_row);
  Tape::Id ec = append_modality(col_, point_row);
  Tape::Id rep_k = apply_mlp(tape_, tape_.concat_cols(er, ec), model_.fuse);
  rep_rows_.push_back(rep_k);
  const std::size_t k = rep_rows_.size();
  rep_sum_ = (k == 1) ? rep_k : tape_.add(rep_sum_, rep_k);
  pooled_.push_back(tape_.mul_scalar(rep_sum_, 1.0 / static_cast<double>(k)));
}

Tape::Id EpisodeGraph::classifier_logits() {
  const int k = completed();
  if (k == 0) throw EmptyInput("classifier before any probe");
  if (model_.cfg.variant == Variant::Fc)
    return apply_mlp(tape_, pooled_.back(), model_.clf_fc);
  std::vector<double> mask = probe_mask(k, k);
  Tape::Id mask_col = tape_.leaf(Tensor({static_cast<std::size_t>(k), 1}, std::move(mask)));
  Tape::Id selected = tape_.rows_weighted_sum(mask_col, tape_.concat_rows(rep_rows_));
  return apply_mlp(tape_, selected, model_.clf_n[static_cast<std::size_t>(k - 1)]);
}

namespace {

int argmax_lowest(const Tensor& probs) {
  int best = 0;
  for (std::size_t j = 1; j < probs.data.size(); ++j)
    if (probs.data[j] > probs.data[static_cast<std::size_t>(best)])
      best = static_cast<int>(j);
  return best;
}

}  // namespace

void drive_episode(Tape& tape, const Model& model, int n_probes,
                   ActionSource& actions, PointSource& points,
                   Trajectory& traj, EpisodeNodes* nodes) {
  EpisodeGraph graph(tape, model);
  traj.requests.clear();
  traj.points.clear();
  traj.steps.clear();

  for (int k = 1; k <= n_probes; ++k) {
    StepRecord rec;
    const Tape::Id state = graph.pooled_completed();  // pre-action state
    const Tape::Id b = graph.baseline_from(state);
    rec.baseline = tape.scalar(b);

    std::array<Tape::Id, 4> mu_ids{}, sigma_ids{};
    std::array<double, 4> partial{};
    for (int c = 0; c < kComponents; ++c) {
      auto [mu_id, sigma_id] = graph.policy_params(state, c, partial);
      const double mu = tape.scalar(mu_id);
      const double sigma = tape.scalar(sigma_id);
      const double raw = actions.draw(k, c, mu, sigma);
      const double clipped = std::clamp(raw, -1.0, 1.0);
      const auto ci = static_cast<std::size_t>(c);
      rec.policy.mu[ci] = mu;
      rec.policy.sigma[ci] = sigma;
      rec.policy.raw[ci] = raw;
      rec.policy.clipped[ci] = clipped;
      rec.policy.clip_hit[ci] = raw != clipped;
      partial[ci] = clipped;
      mu_ids[ci] = mu_id;
      sigma_ids[ci] = sigma_id;
    }

    rec.probe = action_to_probe(rec.policy.clipped);
    rec.point = points.sense(k, rec.probe);
    traj.requests.push_back(rec.probe.as_row());
    traj.points.push_back(rec.point.as_row());
    graph.append(traj.requests.back(), traj.points.back());

    Tape::Id logits = graph.classifier_logits();
    Tape::Id probs = tape.softmax(logits);
    const Tensor& pv = tape.val(probs);
    for (std::size_t j = 0; j < 4 && j < pv.data.size(); ++j) rec.probs[j] = pv.data[j];
    rec.predicted = argmax_lowest(pv);
    rec.reward = rec.predicted == traj.truth ? 1.0 : 0.0;

    if (nodes) {
      nodes->mu.push_back(mu_ids);
      nodes->sigma.push_back(sigma_ids);
      nodes->logits.push_back(logits);
      nodes->probs.push_back(probs);
      nodes->baseline.push_back(b);
    }
    traj.steps.push_back(rec);
  }
}

namespace {

struct SamplingActions final : ActionSource {
  Rng* rng;
  bool deterministic;
  double draw(int, int, double mu, double sigma) override {
    return deterministic ? mu : rng->normal(mu, sigma);
  }
};

struct RaycastPoints final : PointSource {
  const World* world;
  TriangleMesh placed;
  CollectedPoint sense(int, const ProbeRequest& probe) override {
    return world->ray_cast(placed, probe);
  }
};

}  // namespace

Trajectory rollout(const World& world, const Scene& scene, const ParameterStore& store,
                   const Model& model, int n_probes, Rng& rng, bool deterministic) {
  Trajectory traj;
  traj.scene = scene;
  traj.truth = scene.object_id;

  SamplingActions actions;
  actions.rng = &rng;
  actions.deterministic = deterministic;
  RaycastPoints points;
  points.world = &world;
  points.placed = world.placed_mesh(scene);

  Tape tape(&store);
  drive_episode(tape, model, n_probes, actions, points, traj, nullptr);
  return traj;
}

}  // namespace hglance
