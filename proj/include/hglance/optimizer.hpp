#ifndef HGLANCE_OPTIMIZER_HPP_
#define HGLANCE_OPTIMIZER_HPP_

#include "hglance/param_store.hpp"

namespace hglance {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Standard Adam over every trainable entry; moment buffers live in the store.
void adam_step(ParameterStore& store, const AdamConfig& cfg);

// Plain SGD, kept behind config for fidelity experiments.
void sgd_step(ParameterStore& store, double lr);

}  // namespace hglance

#endif  // HGLANCE_OPTIMIZER_HPP_
