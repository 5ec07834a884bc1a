#include "hglance/model.hpp"

#include <cmath>

#include "hglance/errors.hpp"

namespace hglance {

const char* const kComponentNames[kComponents] = {"py", "ux", "uy", "uz"};

namespace {

Tensor glorot_uniform(Rng& rng, int in, int out) {
  const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
  Tensor w = Tensor::zeros({static_cast<std::size_t>(in), static_cast<std::size_t>(out)});
  for (double& e : w.data) e = rng.uniform(-limit, limit);
  return w;
}

MlpRef name_mlp(const std::string& prefix) {
  return {prefix + ".w1", prefix + ".b1", prefix + ".w2", prefix + ".b2"};
}

LinRef name_lin(const std::string& prefix) {
  return {prefix + ".w", prefix + ".b"};
}

void put_meta(ParameterStore& store, const std::string& key, double v) {
  store.add("__cfg." + key, Tensor::scalar(v), /*trainable=*/false);
}

double get_meta(const ParameterStore& store, const std::string& key) {
  return store.value("__cfg." + key).data.at(0);
}

}  // namespace

MlpRef init_mlp(ParameterStore& store, Rng& rng, const std::string& prefix,
                int in, int hidden, int out) {
  MlpRef r = name_mlp(prefix);
  store.add(r.w1, glorot_uniform(rng, in, hidden));
  store.add(r.b1, Tensor::zeros({1, static_cast<std::size_t>(hidden)}));
  store.add(r.w2, glorot_uniform(rng, hidden, out));
  store.add(r.b2, Tensor::zeros({1, static_cast<std::size_t>(out)}));
  return r;
}

LinRef init_lin(ParameterStore& store, Rng& rng, const std::string& prefix,
                int in, int out) {
  LinRef r = name_lin(prefix);
  store.add(r.w, glorot_uniform(rng, in, out));
  store.add(r.b, Tensor::zeros({1, static_cast<std::size_t>(out)}));
  return r;
}

Tape::Id apply_mlp(Tape& tape, Tape::Id x, const MlpRef& mlp) {
  Tape::Id h = tape.linear(x, tape.param(mlp.w1), tape.param(mlp.b1));
  h = tape.activation(h, Act::Relu);
  return tape.linear(h, tape.param(mlp.w2), tape.param(mlp.b2));
}

Tape::Id apply_lin(Tape& tape, Tape::Id x, const LinRef& lin) {
  return tape.linear(x, tape.param(lin.w), tape.param(lin.b));
}

Model Model::refs(const ModelConfig& cfg) {
  Model m;
  m.cfg = cfg;
  m.req = {name_mlp("pcrn.req.point"), name_mlp("pcrn.req.attn"), name_mlp("pcrn.req.out")};
  m.col = {name_mlp("pcrn.col.point"), name_mlp("pcrn.col.attn"), name_mlp("pcrn.col.out")};
  m.fuse = name_mlp("pcrn.fuse");
  for (int c = 0; c < kComponents; ++c) {
    const std::string p = std::string("locnet.") + kComponentNames[c];
    m.loc[static_cast<std::size_t>(c)] = {name_mlp(p + ".fuse"), name_lin(p + ".mu"),
                                          name_lin(p + ".sigma")};
  }
  if (cfg.variant == Variant::Fc) {
    m.clf_fc = name_mlp("clf.fc");
  } else {
    for (int k = 1; k <= cfg.n_probes; ++k)
      m.clf_n.push_back(name_mlp("clf.n." + std::to_string(k)));
  }
  m.baseline = name_mlp("baseline");
  return m;
}

Model Model::init(ParameterStore& store, const ModelConfig& cfg, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 0x4D4F44454CULL);  // dedicated init stream
  Model m = refs(cfg);
  const int df = cfg.d_f, dr = cfg.d_rep, da = cfg.d_attn;

  init_mlp(store, rng, "pcrn.req.point", 4, df, df);
  init_mlp(store, rng, "pcrn.req.attn", 2 * df, da, 1);
  init_mlp(store, rng, "pcrn.req.out", 2 * df, df, df);
  init_mlp(store, rng, "pcrn.col.point", 4, df, df);
  init_mlp(store, rng, "pcrn.col.attn", 2 * df, da, 1);
  init_mlp(store, rng, "pcrn.col.out", 2 * df, df, df);
  init_mlp(store, rng, "pcrn.fuse", 2 * df, dr, dr);
  for (int c = 0; c < kComponents; ++c) {
    const std::string p = std::string("locnet.") + kComponentNames[c];
    init_mlp(store, rng, p + ".fuse", dr + 2 * kComponents, dr, dr);
    init_lin(store, rng, p + ".mu", dr, 1);
    init_lin(store, rng, p + ".sigma", dr, 1);
  }
  if (cfg.variant == Variant::Fc) {
    init_mlp(store, rng, "clf.fc", dr, 32, cfg.n_objects);
  } else {
    for (int k = 1; k <= cfg.n_probes; ++k)
      init_mlp(store, rng, "clf.n." + std::to_string(k), dr, 16, cfg.n_objects);
  }
  init_mlp(store, rng, "baseline", dr, 32, 1);
  return m;
}

void Model::write_meta(ParameterStore& store, const ModelConfig& cfg, const SimConfig& sim) {
  put_meta(store, "d_f", cfg.d_f);
  put_meta(store, "d_rep", cfg.d_rep);
  put_meta(store, "d_attn", cfg.d_attn);
  put_meta(store, "n_probes", cfg.n_probes);
  put_meta(store, "n_objects", cfg.n_objects);
  put_meta(store, "variant", cfg.variant == Variant::Fc ? 0.0 : 1.0);
  put_meta(store, "sigma_min", cfg.sigma_min);
  put_meta(store, "px_const", sim.px_const);
  put_meta(store, "u_len_max", sim.u_len_max);
  put_meta(store, "xy_init_absmax", sim.xy_init_absmax);
  put_meta(store, "z_init_min", sim.z_init_min);
  put_meta(store, "z_init_max", sim.z_init_max);
  put_meta(store, "test_rz_min", sim.test_rz_min);
  put_meta(store, "test_rz_max", sim.test_rz_max);
  put_meta(store, "test_x_min", sim.test_x_min);
  put_meta(store, "test_x_max", sim.test_x_max);
}

Model Model::from_store(const ParameterStore& store) {
  ModelConfig cfg;
  cfg.d_f = static_cast<int>(get_meta(store, "d_f"));
  cfg.d_rep = static_cast<int>(get_meta(store, "d_rep"));
  cfg.d_attn = static_cast<int>(get_meta(store, "d_attn"));
  cfg.n_probes = static_cast<int>(get_meta(store, "n_probes"));
  cfg.n_objects = static_cast<int>(get_meta(store, "n_objects"));
  cfg.variant = get_meta(store, "variant") == 0.0 ? Variant::Fc : Variant::NClass;
  cfg.sigma_min = get_meta(store, "sigma_min");
  Model m = refs(cfg);
  if (!store.has(m.fuse.w1)) throw Error("checkpoint is missing model weights");
  return m;
}

SimConfig Model::sim_from_store(const ParameterStore& store) {
  SimConfig sim;
  sim.px_const = get_meta(store, "px_const");
  sim.u_len_max = get_meta(store, "u_len_max");
  sim.xy_init_absmax = get_meta(store, "xy_init_absmax");
  sim.z_init_min = get_meta(store, "z_init_min");
  sim.z_init_max = get_meta(store, "z_init_max");
  sim.test_rz_min = get_meta(store, "test_rz_min");
  sim.test_rz_max = get_meta(store, "test_rz_max");
  sim.test_x_min = get_meta(store, "test_x_min");
  sim.test_x_max = get_meta(store, "test_x_max");
  return sim;
}

}  // namespace hglance
