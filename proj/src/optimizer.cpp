#include "hglance/optimizer.hpp"

#include <cmath>

namespace hglance {

void adam_step(ParameterStore& store, const AdamConfig& cfg) {
  store.opt_step += 1;
  const double t = static_cast<double>(store.opt_step);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  for (auto& [name, e] : store) {
    if (!e.trainable) continue;
    for (std::size_t i = 0; i < e.value.data.size(); ++i) {
      const double gi = e.grad.data[i];
      e.m.data[i] = cfg.beta1 * e.m.data[i] + (1.0 - cfg.beta1) * gi;
      e.v.data[i] = cfg.beta2 * e.v.data[i] + (1.0 - cfg.beta2) * gi * gi;
      const double mhat = e.m.data[i] / bc1;
      const double vhat = e.v.data[i] / bc2;
      e.value.data[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
  }
}

void sgd_step(ParameterStore& store, double lr) {
  store.opt_step += 1;
  for (auto& [name, e] : store) {
    if (!e.trainable) continue;
    for (std::size_t i = 0; i < e.value.data.size(); ++i)
      e.value.data[i] -= lr * e.grad.data[i];
  }
}

}  // namespace hglance
