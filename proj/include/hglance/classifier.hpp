#ifndef HGLANCE_CLASSIFIER_HPP_
#define HGLANCE_CLASSIFIER_HPP_

#include <vector>

#include "hglance/model.hpp"
#include "hglance/tape.hpp"

namespace hglance {

// One-hot selector of probe k among n (both 1-based semantics: k in [1,n]).
std::vector<double> probe_mask(int n, int k);

// PCRN-FC: mean-pool representation rows 1..k, two FC layers, softmax.
// Returns the logits node; probs() wraps with a softmax.
Tape::Id classify_fc_logits(Tape& tape, Tape::Id rep, int k, const Model& model);
Tape::Id classify_fc(Tape& tape, Tape::Id rep, int k, const Model& model);

// PCRN-N-class: the probe mask selects row k, head k applies its own weights.
Tape::Id classify_nclass_logits(Tape& tape, Tape::Id rep, int k, const Model& model);
Tape::Id classify_nclass(Tape& tape, Tape::Id rep, int k, const Model& model);

}  // namespace hglance

#endif  // HGLANCE_CLASSIFIER_HPP_
