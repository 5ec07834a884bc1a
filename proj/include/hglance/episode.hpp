#ifndef HGLANCE_EPISODE_HPP_
#define HGLANCE_EPISODE_HPP_

#include <array>
#include <vector>

#include "hglance/location_net.hpp"
#include "hglance/model.hpp"
#include "hglance/sim.hpp"
#include "hglance/tape.hpp"

namespace hglance {

struct StepRecord {
  PolicyStep policy;
  ProbeRequest probe;
  CollectedPoint point;
  std::array<double, 4> probs{};
  int predicted = 0;
  double reward = 0.0;    // 1 if the step's classification is correct
  double ret = 0.0;       // discounted return, filled by the trainer
  double baseline = 0.0;  // baseline head value at this step
};

// Per-episode record: the growing request/point sequences plus everything
// sampled and predicted at each step.
struct Trajectory {
  Scene scene;
  int truth = 0;
  std::vector<std::array<double, 4>> requests;  // S_R rows (Py, Ux, Uy, Uz)
  std::vector<std::array<double, 4>> points;    // S_C rows (X, Y, Z, T)
  std::vector<StepRecord> steps;
};

// Live tape ids for one driven episode (valid while the tape is alive).
struct EpisodeNodes {
  std::vector<std::array<Tape::Id, 4>> mu, sigma;
  std::vector<Tape::Id> logits, probs, baseline;
};

// Incremental per-step construction of the episode graph. Step k appends
// only row k of every intermediate, reusing rows 1..k-1, and produces values
// bitwise identical to the batch builders in pcrn.hpp / classifier.hpp
// (same kernels, same accumulation order).
class EpisodeGraph {
 public:
  EpisodeGraph(Tape& tape, const Model& model);

  int completed() const { return static_cast<int>(rep_rows_.size()); }

  // Mean-pooled representation over completed probes; the zero vector before
  // the first probe so the first action comes from the heads' biases.
  Tape::Id pooled_completed();

  // Gaussian parameters for component `comp` of the next probe, conditioned
  // on the pre-action state and the already-fixed components.
  std::pair<Tape::Id, Tape::Id> policy_params(Tape::Id state, int comp,
                                              const std::array<double, 4>& partial);

  // Baseline head over a detached copy of the pre-action state: the value
  // must not depend on the step's action or the subtraction stops being a
  // valid variance reducer.
  Tape::Id baseline_from(Tape::Id state);

  // Ingest probe k's request and collected point, extending the mutual
  // representation by one row.
  void append(const std::array<double, 4>& request_row, const std::array<double, 4>& point_row);

  Tape::Id classifier_logits();  // variant per model config, at current k

 private:
  struct Modality {
    const PcrnWeights* weights = nullptr;
    std::vector<Tape::Id> f_rows;
    Tape::Id f_sum = -1;
  };

  Tape::Id append_modality(Modality& m, const std::array<double, 4>& row);

  Tape& tape_;
  const Model& model_;
  Modality req_, col_;
  std::vector<Tape::Id> rep_rows_;
  Tape::Id rep_sum_ = -1;
  std::vector<Tape::Id> pooled_;
};

// How actions and sensor readings enter a driven episode: sampling + ray
// casting during rollout, recorded values during the trainer's replay.
struct ActionSource {
  virtual ~ActionSource() = default;
  virtual double draw(int k, int comp, double mu, double sigma) = 0;
};
struct PointSource {
  virtual ~PointSource() = default;
  virtual CollectedPoint sense(int k, const ProbeRequest& probe) = 0;
};

// Runs the full N-probe episode graph; fills traj.steps (rewards against
// traj.truth) and, when given, the live node ids.
void drive_episode(Tape& tape, const Model& model, int n_probes,
                   ActionSource& actions, PointSource& points,
                   Trajectory& traj, EpisodeNodes* nodes);

// Samples one episode against the simulator (values only; the tape is
// discarded). `deterministic` takes mu instead of sampling (eval-only mode).
Trajectory rollout(const World& world, const Scene& scene, const ParameterStore& store,
                   const Model& model, int n_probes, Rng& rng, bool deterministic = false);

}  // namespace hglance

#endif  // HGLANCE_EPISODE_HPP_
