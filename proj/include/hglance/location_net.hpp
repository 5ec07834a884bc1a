#ifndef HGLANCE_LOCATION_NET_HPP_
#define HGLANCE_LOCATION_NET_HPP_

#include <array>
#include <utility>

#include "hglance/gaussian.hpp"
#include "hglance/model.hpp"
#include "hglance/rng.hpp"
#include "hglance/tape.hpp"

namespace hglance {

// One sampled probe request: per component (Py, Ux, Uy, Uz) the Gaussian
// parameters, the raw draw and the [-1,1]-clipped value that conditions the
// later components and forms the executed action.
struct PolicyStep {
  std::array<double, kComponents> mu{};
  std::array<double, kComponents> sigma{};
  std::array<double, kComponents> raw{};
  std::array<double, kComponents> clipped{};
  std::array<bool, kComponents> clip_hit{};
};

// Head input for component `comp`: pooled representation (+) the partial
// action with slots >= comp zeroed (+) the 0/1 validity mask. `n_fixed`
// must equal the number of components preceding `comp` (OrderViolation
// otherwise); slots >= n_fixed never reach the graph, so masked values
// cannot influence any head output.
Tape::Id policy_input(Tape& tape, Tape::Id pooled, const std::array<double, 4>& action,
                      int n_fixed, int comp);

// Spec-facing variant pooling a [k,d_rep] representation prefix; pass
// rep_prefix = -1 for the start-of-episode zero placeholder.
Tape::Id masked_input(Tape& tape, Tape::Id rep_prefix, int d_rep,
                      const std::array<double, 4>& action, int n_fixed, int comp);

// mu in (-1,1) via tanh; sigma in [sigma_min, 1) via sigmoid + floor.
std::pair<Tape::Id, Tape::Id> predict_params(Tape& tape, Tape::Id pooled,
                                             const std::array<double, 4>& action,
                                             int n_fixed, int comp, const Model& model);

// Samples all four components in order, each conditioning the next.
PolicyStep sample_action(Tape& tape, Tape::Id rep_prefix, const Model& model, Rng& rng);

}  // namespace hglance

#endif  // HGLANCE_LOCATION_NET_HPP_
