#ifndef HGLANCE_MODEL_HPP_
#define HGLANCE_MODEL_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hglance/param_store.hpp"
#include "hglance/rng.hpp"
#include "hglance/sim.hpp"
#include "hglance/tape.hpp"

namespace hglance {

inline constexpr int kMaxProbes = 10;
inline constexpr int kComponents = 4;  // Py, Ux, Uy, Uz
extern const char* const kComponentNames[kComponents];

enum class Variant { Fc, NClass };

struct ModelConfig {
  int d_f = 64;
  int d_rep = 64;
  int d_attn = 64;
  int n_probes = 10;
  int n_objects = 4;
  Variant variant = Variant::Fc;
  double sigma_min = 0.01;
};

// Named references into the ParameterStore for a two-layer MLP
// (linear -> relu -> linear) and a single linear map.
struct MlpRef {
  std::string w1, b1, w2, b2;
};
struct LinRef {
  std::string w, b;
};

MlpRef init_mlp(ParameterStore& store, Rng& rng, const std::string& prefix,
                int in, int hidden, int out);
LinRef init_lin(ParameterStore& store, Rng& rng, const std::string& prefix,
                int in, int out);

Tape::Id apply_mlp(Tape& tape, Tape::Id x, const MlpRef& mlp);
Tape::Id apply_lin(Tape& tape, Tape::Id x, const LinRef& lin);

// One modality of the representation network.
struct PcrnWeights {
  MlpRef point;  // 4 -> d_f -> d_f, shared across rows
  MlpRef attn;   // 2*d_f -> d_attn -> 1, attention scores
  MlpRef out;    // 2*d_f -> d_f -> d_f, feature+context fusion
};

struct Model {
  ModelConfig cfg;
  PcrnWeights req, col;
  MlpRef fuse;  // 2*d_f -> d_rep -> d_rep

  struct ComponentHead {
    MlpRef fuse;   // d_rep+8 -> d_rep -> d_rep
    LinRef mu;     // d_rep -> 1, tanh
    LinRef sigma;  // d_rep -> 1, sigmoid then sigma_min floor
  };
  std::array<ComponentHead, kComponents> loc;

  MlpRef clf_fc;               // d_rep -> 32 -> n_objects
  std::vector<MlpRef> clf_n;   // per-probe heads, d_rep -> 16 -> n_objects
  MlpRef baseline;             // d_rep -> 32 -> 1

  // Names only; no store interaction.
  static Model refs(const ModelConfig& cfg);
  // Creates and initializes every weight (uniform +-sqrt(6/(fan_in+fan_out)),
  // zero biases) in a fixed order derived from the seed.
  static Model init(ParameterStore& store, const ModelConfig& cfg, std::uint64_t seed);

  // Architecture and simulator constants embedded in checkpoints as
  // non-trainable "__cfg.*" scalar entries.
  static void write_meta(ParameterStore& store, const ModelConfig& cfg, const SimConfig& sim);
  static Model from_store(const ParameterStore& store);
  static SimConfig sim_from_store(const ParameterStore& store);
};

}  // namespace hglance

#endif  // HGLANCE_MODEL_HPP_
