#include "hglance/location_net.hpp"

#include <algorithm>

#include "hglance/errors.hpp"

namespace hglance {

Tape::Id policy_input(Tape& tape, Tape::Id pooled, const std::array<double, 4>& action,
                      int n_fixed, int comp) {
  if (comp < 0 || comp >= kComponents) throw IndexOutOfRange("bad component index");
  if (n_fixed != comp)
    throw OrderViolation("partial action must contain exactly the components before " +
                         std::string(kComponentNames[comp]));
  std::vector<double> masked(kComponents, 0.0);
  std::vector<double> mask(kComponents, 0.0);
  for (int i = 0; i < n_fixed; ++i) {
    masked[static_cast<std::size_t>(i)] = action[static_cast<std::size_t>(i)];
    mask[static_cast<std::size_t>(i)] = 1.0;
  }
  Tape::Id tail = tape.concat_cols(tape.row_leaf(std::move(masked)), tape.row_leaf(std::move(mask)));
  return tape.concat_cols(pooled, tail);
}

Tape::Id masked_input(Tape& tape, Tape::Id rep_prefix, int d_rep,
                      const std::array<double, 4>& action, int n_fixed, int comp) {
  Tape::Id pooled = rep_prefix < 0
                        ? tape.leaf(Tensor::zeros({1, static_cast<std::size_t>(d_rep)}))
                        : tape.mean_rows(rep_prefix);
  return policy_input(tape, pooled, action, n_fixed, comp);
}

std::pair<Tape::Id, Tape::Id> predict_params(Tape& tape, Tape::Id pooled,
                                             const std::array<double, 4>& action,
                                             int n_fixed, int comp, const Model& model) {
  const auto& head = model.loc[static_cast<std::size_t>(comp)];
  Tape::Id in = policy_input(tape, pooled, action, n_fixed, comp);
  Tape::Id h = apply_mlp(tape, in, head.fuse);
  Tape::Id mu = tape.activation(apply_lin(tape, h, head.mu), Act::Tanh);
  Tape::Id sigma = tape.clamp_min(tape.activation(apply_lin(tape, h, head.sigma), Act::Sigmoid),
                                  model.cfg.sigma_min);
  return {mu, sigma};
}

PolicyStep sample_action(Tape& tape, Tape::Id rep_prefix, const Model& model, Rng& rng) {
  Tape::Id pooled = rep_prefix < 0
                        ? tape.leaf(Tensor::zeros({1, static_cast<std::size_t>(model.cfg.d_rep)}))
                        : tape.mean_rows(rep_prefix);
  PolicyStep step;
  std::array<double, 4> partial{};
  for (int c = 0; c < kComponents; ++c) {
    auto [mu_id, sigma_id] = predict_params(tape, pooled, partial, c, c, model);
    const double mu = tape.scalar(mu_id);
    const double sigma = tape.scalar(sigma_id);
    const double raw = rng.normal(mu, sigma);
    const double clipped = std::clamp(raw, -1.0, 1.0);
    const auto ci = static_cast<std::size_t>(c);
    step.mu[ci] = mu;
    step.sigma[ci] = sigma;
    step.raw[ci] = raw;
    step.clipped[ci] = clipped;
    step.clip_hit[ci] = raw != clipped;
    partial[ci] = clipped;
  }
  return step;
}

}  // namespace hglance
