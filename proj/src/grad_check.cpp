#include "hglance/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace hglance {

GradCheckResult grad_check(ParameterStore& store,
                           const std::function<Tape::Id(Tape&)>& build,
                           double h) {
  // Analytic pass.
  std::map<std::string, Tensor> analytic;
  {
    Tape tape(&store);
    Tape::Id root = build(tape);
    tape.backward(root);
    analytic = tape.param_grads();
  }

  auto eval = [&]() {
    Tape tape(&store);
    return tape.scalar(build(tape));
  };

  GradCheckResult res;
  for (const std::string& name : store.names()) {
    auto& e = store.entry(name);
    if (!e.trainable) continue;
    const Tensor* ga = nullptr;
    auto it = analytic.find(name);
    if (it != analytic.end()) ga = &it->second;
    for (std::size_t i = 0; i < e.value.data.size(); ++i) {
      const double orig = e.value.data[i];
      e.value.data[i] = orig + h;
      const double fp = eval();
      e.value.data[i] = orig - h;
      const double fm = eval();
      e.value.data[i] = orig;
      const double numeric = (fp - fm) / (2.0 * h);
      const double a = ga ? ga->data[i] : 0.0;
      const double denom = std::max({1.0, std::abs(a), std::abs(numeric)});
      const double rel = std::abs(a - numeric) / denom;
      ++res.coords_checked;
      if (rel > res.max_rel_error) {
        res.max_rel_error = rel;
        res.worst_param = name;
      }
    }
  }
  return res;
}

}  // namespace hglance
