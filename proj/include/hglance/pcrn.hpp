#ifndef HGLANCE_PCRN_HPP_
#define HGLANCE_PCRN_HPP_

#include "hglance/model.hpp"
#include "hglance/tape.hpp"

namespace hglance {

// Batch builders over full [N,4] sequences. Row i of every output depends
// only on rows 1..i of the inputs (causality); the incremental episode graph
// in episode.hpp produces bitwise-identical values row by row.

// Shared two-layer MLP applied to each row independently.
Tape::Id point_features(Tape& tape, Tape::Id seq, const MlpRef& point_mlp);

// Context-aware aggregation: row i = inclusive mean of feature rows 1..i.
Tape::Id ca_context(Tape& tape, Tape::Id features);

// Self-attention context (SACA-A): for target row i, scores over source rows
// j <= i come from attn_mlp(f_j (+) c_i) with c_i the CA row; softmax over
// the prefix weights a sum of feature rows.
Tape::Id saca_context(Tape& tape, Tape::Id features, const MlpRef& attn_mlp);

// point_features -> saca_context -> (feature (+) context) -> MLP
Tape::Id p2carb(Tape& tape, Tape::Id seq, const PcrnWeights& w);

// Fused mutual representation of the request and collected-point sequences.
Tape::Id mutual_representation(Tape& tape, Tape::Id seq_requests, Tape::Id seq_points,
                               const Model& model);

}  // namespace hglance

#endif  // HGLANCE_PCRN_HPP_
