#include "hglance/pcrn.hpp"

#include "hglance/errors.hpp"

namespace hglance {

Tape::Id point_features(Tape& tape, Tape::Id seq, const MlpRef& point_mlp) {
  if (tape.val(seq).rows() == 0) throw EmptyInput("point_features: empty sequence");
  return apply_mlp(tape, seq, point_mlp);
}

Tape::Id ca_context(Tape& tape, Tape::Id features) {
  return tape.prefix_mean(features);
}

Tape::Id saca_context(Tape& tape, Tape::Id features, const MlpRef& attn_mlp) {
  const std::size_t n = tape.val(features).rows();
  if (n == 0) throw EmptyInput("saca_context: empty input");
  Tape::Id ca = tape.prefix_mean(features);
  std::vector<Tape::Id> out_rows;
  out_rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Tape::Id prefix = tape.rows_prefix(features, i + 1);
    Tape::Id anchor = tape.repeat_row(tape.row(ca, i), i + 1);
    Tape::Id scores = apply_mlp(tape, tape.concat_cols(prefix, anchor), attn_mlp);
    Tape::Id weights = tape.softmax_col(scores);
    out_rows.push_back(tape.rows_weighted_sum(weights, prefix));
  }
  return tape.concat_rows(out_rows);
}

Tape::Id p2carb(Tape& tape, Tape::Id seq, const PcrnWeights& w) {
  Tape::Id f = point_features(tape, seq, w.point);
  Tape::Id sc = saca_context(tape, f, w.attn);
  return apply_mlp(tape, tape.concat_cols(f, sc), w.out);
}

Tape::Id mutual_representation(Tape& tape, Tape::Id seq_requests, Tape::Id seq_points,
                               const Model& model) {
  if (tape.val(seq_requests).rows() != tape.val(seq_points).rows())
    throw ShapeMismatch("mutual_representation: sequence lengths differ");
  Tape::Id er = p2carb(tape, seq_requests, model.req);
  Tape::Id ec = p2carb(tape, seq_points, model.col);
  return apply_mlp(tape, tape.concat_cols(er, ec), model.fuse);
}

}  // namespace hglance
