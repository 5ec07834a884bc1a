#ifndef HGLANCE_GRAD_CHECK_HPP_
#define HGLANCE_GRAD_CHECK_HPP_

#include <functional>
#include <string>

#include "hglance/param_store.hpp"
#include "hglance/tape.hpp"

namespace hglance {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t coords_checked = 0;
};

// Central-difference verification of tape gradients. `build` constructs the
// scalar objective on a fresh tape, reading parameters via tape.param().
// Every trainable coordinate is perturbed by +-h and compared against the
// analytic gradient; relative error uses max(1, |a|, |n|) as denominator.
GradCheckResult grad_check(ParameterStore& store,
                           const std::function<Tape::Id(Tape&)>& build,
                           double h = 1e-5);

}  // namespace hglance

#endif  // HGLANCE_GRAD_CHECK_HPP_
