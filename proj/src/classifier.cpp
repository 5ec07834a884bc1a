#include "hglance/classifier.hpp"

#include "hglance/errors.hpp"

namespace hglance {

std::vector<double> probe_mask(int n, int k) {
  if (n < 1 || k < 1 || k > n) throw IndexOutOfRange("probe_mask: bad probe index");
  std::vector<double> mask(static_cast<std::size_t>(n), 0.0);
  mask[static_cast<std::size_t>(k - 1)] = 1.0;
  return mask;
}

Tape::Id classify_fc_logits(Tape& tape, Tape::Id rep, int k, const Model& model) {
  const int rows = static_cast<int>(tape.val(rep).rows());
  if (k < 1 || k > rows) throw IndexOutOfRange("classify_fc: probe index out of range");
  Tape::Id pooled = tape.mean_rows(tape.rows_prefix(rep, static_cast<std::size_t>(k)));
  return apply_mlp(tape, pooled, model.clf_fc);
}

Tape::Id classify_fc(Tape& tape, Tape::Id rep, int k, const Model& model) {
  return tape.softmax(classify_fc_logits(tape, rep, k, model));
}

Tape::Id classify_nclass_logits(Tape& tape, Tape::Id rep, int k, const Model& model) {
  const int rows = static_cast<int>(tape.val(rep).rows());
  if (k < 1 || k > model.cfg.n_probes || k > rows)
    throw IndexOutOfRange("classify_nclass: probe index out of range");
  if (model.clf_n.empty()) throw Error("model has no per-probe classifier heads");
  std::vector<double> mask = probe_mask(rows, k);
  Tape::Id mask_col = tape.leaf(Tensor({static_cast<std::size_t>(rows), 1}, std::move(mask)));
  Tape::Id selected = tape.rows_weighted_sum(mask_col, rep);
  return apply_mlp(tape, selected, model.clf_n[static_cast<std::size_t>(k - 1)]);
}

Tape::Id classify_nclass(Tape& tape, Tape::Id rep, int k, const Model& model) {
  return tape.softmax(classify_nclass_logits(tape, rep, k, model));
}

}  // namespace hglance
