#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "hglance/errors.hpp"
#include "hglance/grad_check.hpp"
#include "hglance/optimizer.hpp"
#include "hglance/param_store.hpp"
#include "hglance/rng.hpp"
#include "hglance/tape.hpp"

using namespace hglance;

namespace {

Tensor random_tensor(Rng& rng, std::vector<std::size_t> shape, double scale = 1.0) {
  Tensor t = Tensor::zeros(std::move(shape));
  for (double& v : t.data) v = rng.uniform(-scale, scale);
  return t;
}

}  // namespace

TEST_CASE("linear identity and hand-computed sum") {
  ParameterStore store;
  store.add("w", Tensor({2, 2}, {1, 0, 0, 1}));
  store.add("b", Tensor({1, 2}, {0, 0}));
  Tape tape(&store);
  Tape::Id y = tape.linear(tape.leaf(Tensor({1, 2}, {1, 0})), tape.param("w"), tape.param("b"));
  CHECK(tape.val(y).data == std::vector<double>{1, 0});

  ParameterStore store2;
  store2.add("w", Tensor({2, 1}, {1, 1}));
  store2.add("b", Tensor({1, 1}, {1}));
  Tape t2(&store2);
  Tape::Id y2 = t2.linear(t2.leaf(Tensor({1, 2}, {1, 2})), t2.param("w"), t2.param("b"));
  CHECK(t2.scalar(y2) == 4.0);
}

TEST_CASE("linear rejects non-conforming shapes") {
  ParameterStore store;
  store.add("w", Tensor::zeros({3, 2}));
  store.add("b", Tensor::zeros({1, 2}));
  Tape tape(&store);
  CHECK_THROWS_AS(tape.linear(tape.leaf(Tensor::zeros({1, 2})), tape.param("w"), tape.param("b")),
                  ShapeMismatch);
}

TEST_CASE("linear gradients match central differences") {
  Rng rng(42);
  ParameterStore store;
  store.add("w", random_tensor(rng, {4, 2}));
  store.add("b", random_tensor(rng, {1, 2}));
  const Tensor x = random_tensor(rng, {3, 4});

  auto build = [&](Tape& tape) {
    Tape::Id y = tape.linear(tape.leaf(x), tape.param("w"), tape.param("b"));
    Tape::Id pooled = tape.mean_rows(y);
    Tape::Id s = tape.linear(pooled, tape.leaf(Tensor({2, 1}, {1, 1})),
                             tape.leaf(Tensor({1, 1}, {0})));
    return tape.squared_error(s, 0.7);
  };
  auto res = grad_check(store, build, 1e-5);
  CHECK(res.max_rel_error < 1e-6);
}

TEST_CASE("activations: standard values and gradients") {
  ParameterStore store;
  Tape tape(&store);
  CHECK(tape.val(tape.activation(tape.scalar_leaf(0.0), Act::Tanh)).data[0] == 0.0);
  CHECK(tape.val(tape.activation(tape.scalar_leaf(0.0), Act::Sigmoid)).data[0] == 0.5);
  CHECK(tape.val(tape.activation(tape.scalar_leaf(-3.0), Act::Relu)).data[0] == 0.0);

  // relu gradient at -3 is 0
  ParameterStore s2;
  s2.add("x", Tensor::scalar(-3.0));
  Tape t2(&s2);
  Tape::Id r = t2.activation(t2.param("x"), Act::Relu);
  t2.backward(r);
  CHECK(t2.param_grads().at("x").data[0] == 0.0);

  // sigmoid'(0) = 0.25 against central differences
  ParameterStore s3;
  s3.add("x", Tensor::scalar(0.0));
  auto res = grad_check(s3, [](Tape& t) { return t.activation(t.param("x"), Act::Sigmoid); }, 1e-6);
  CHECK(res.max_rel_error < 1e-8);
  Tape t3(&s3);
  Tape::Id sg = t3.activation(t3.param("x"), Act::Sigmoid);
  t3.backward(sg);
  CHECK(t3.param_grads().at("x").data[0] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("mean_rows: means, single row, permutation symmetry") {
  ParameterStore store;
  Tape tape(&store);
  Tape::Id m = tape.mean_rows(tape.leaf(Tensor({2, 2}, {1, 2, 3, 4})));
  CHECK(tape.val(m).data == std::vector<double>{2, 3});

  Tape::Id single = tape.mean_rows(tape.leaf(Tensor({1, 3}, {7, 8, 9})));
  CHECK(tape.val(single).data == std::vector<double>{7, 8, 9});

  // swapping two rows leaves the mean bitwise unchanged (a+b == b+a)
  Rng rng(3);
  Tensor a = random_tensor(rng, {2, 5});
  Tensor b = a;
  for (std::size_t j = 0; j < 5; ++j) std::swap(b.data[j], b.data[5 + j]);
  Tape t2(&store);
  const std::vector<double> ma = t2.val(t2.mean_rows(t2.leaf(a))).data;
  const std::vector<double> mb = t2.val(t2.mean_rows(t2.leaf(b))).data;
  CHECK(ma == mb);

  CHECK_THROWS_AS(tape.mean_rows(tape.leaf(Tensor::zeros({0, 3}))), EmptyInput);
}

TEST_CASE("softmax cross entropy: uniform, near-certain, gradient") {
  ParameterStore store;
  Tape tape(&store);
  Tape::Id ce = tape.softmax_cross_entropy(tape.leaf(Tensor({1, 4}, {1, 1, 1, 1})), 2);
  CHECK(tape.scalar(ce) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  Tape::Id probs = tape.softmax(tape.leaf(Tensor({1, 4}, {1, 1, 1, 1})));
  for (double p : tape.val(probs).data) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));

  Tape::Id sure = tape.softmax_cross_entropy(tape.leaf(Tensor({1, 4}, {10, -10, -10, -10})), 0);
  CHECK(tape.scalar(sure) < 1e-8);

  Rng rng(11);
  ParameterStore s2;
  s2.add("logits", random_tensor(rng, {1, 6}, 2.0));
  auto res = grad_check(
      s2, [](Tape& t) { return t.softmax_cross_entropy(t.param("logits"), 3); }, 1e-6);
  CHECK(res.max_rel_error < 1e-7);
}

TEST_CASE("adam: zero grads, first-step bound, determinism") {
  ParameterStore a;
  a.add("p", Tensor::scalar(1.0));
  adam_step(a, {});
  CHECK(a.value("p").data[0] == 1.0);  // zero gradient -> unchanged

  ParameterStore b;
  b.add("p", Tensor::scalar(1.0));
  b.grad("p").data[0] = 1.0;
  AdamConfig ac;
  ac.lr = 0.1;
  adam_step(b, ac);
  CHECK(b.value("p").data[0] == doctest::Approx(0.9).epsilon(1e-6));
  CHECK(std::abs(b.value("p").data[0] - 1.0) <= 0.1 + 1e-12);

  ParameterStore c1, c2;
  Rng rng(5);
  const Tensor init = random_tensor(rng, {3, 3});
  c1.add("p", init);
  c2.add("p", init);
  Rng g1(77), g2(77);
  for (int i = 0; i < 100; ++i) {
    Tensor grad = random_tensor(g1, {3, 3});
    c1.entry("p").grad = grad;
    c2.entry("p").grad = grad;
    adam_step(c1, {});
    adam_step(c2, {});
  }
  CHECK(c1.value("p").data == c2.value("p").data);
  (void)g2;
}

TEST_CASE("grad_check: composite, constant, polynomial") {
  // linear + tanh + pool + cross entropy, ~200 params
  Rng rng(9);
  ParameterStore store;
  store.add("w1", random_tensor(rng, {6, 16}, 0.5));
  store.add("b1", random_tensor(rng, {1, 16}, 0.1));
  store.add("w2", random_tensor(rng, {16, 4}, 0.5));
  store.add("b2", random_tensor(rng, {1, 4}, 0.1));
  const Tensor x = random_tensor(rng, {5, 6});
  auto build = [&](Tape& t) {
    Tape::Id h = t.activation(t.linear(t.leaf(x), t.param("w1"), t.param("b1")), Act::Tanh);
    Tape::Id pooled = t.mean_rows(h);
    Tape::Id logits = t.linear(pooled, t.param("w2"), t.param("b2"));
    return t.softmax_cross_entropy(logits, 1);
  };
  auto res = grad_check(store, build, 1e-5);
  CHECK(res.coords_checked > 150);
  CHECK(res.max_rel_error < 1e-5);

  // constant objective -> both gradients zero
  ParameterStore s2;
  s2.add("p", Tensor::scalar(2.0));
  auto res2 = grad_check(s2, [](Tape& t) {
    (void)t.param("p");
    return t.scalar_leaf(3.0);
  });
  CHECK(res2.max_rel_error == 0.0);

  // f(w) = w^2 at w=3: analytic 6 vs central difference
  ParameterStore s3;
  s3.add("w", Tensor::scalar(3.0));
  std::map<std::string, Tensor> grads;
  {
    Tape t(&s3);
    Tape::Id w = t.param("w");
    Tape::Id half_sq = t.squared_error(w, 0.0);  // 0.5 w^2
    Tape::Id f = t.mul_scalar(half_sq, 2.0);
    t.backward(f);
    grads = t.param_grads();
  }
  CHECK(grads.at("w").data[0] == doctest::Approx(6.0).epsilon(1e-12));
  auto res3 = grad_check(s3, [](Tape& t) {
    return t.mul_scalar(t.squared_error(t.param("w"), 0.0), 2.0);
  }, 1e-5);
  CHECK(res3.max_rel_error < 1e-9);
}

TEST_CASE("prefix_mean and tape structural ops") {
  ParameterStore store;
  Tape tape(&store);
  Tape::Id pm = tape.prefix_mean(tape.leaf(Tensor({2, 1}, {2, 4})));
  CHECK(tape.val(pm).data == std::vector<double>{2, 3});

  Tape::Id cat = tape.concat_rows({tape.row_leaf({1, 2}), tape.row_leaf({3, 4})});
  CHECK(tape.val(cat).data == std::vector<double>{1, 2, 3, 4});
  Tape::Id pre = tape.rows_prefix(cat, 1);
  CHECK(tape.val(pre).data == std::vector<double>{1, 2});

  // gradient flow through the structural ops
  Rng rng(21);
  ParameterStore s2;
  s2.add("x", random_tensor(rng, {4, 3}));
  auto res = grad_check(s2, [](Tape& t) {
    Tape::Id x = t.param("x");
    Tape::Id pm2 = t.prefix_mean(x);
    Tape::Id w = t.softmax_col(t.leaf(Tensor({4, 1}, {0.1, 0.2, 0.3, 0.4})));
    Tape::Id mix = t.rows_weighted_sum(w, pm2);  // [1,3]
    Tape::Id s = t.linear(t.concat_cols(mix, mix), t.leaf(Tensor({6, 1}, {1, 1, 1, 1, 1, 1})),
                          t.leaf(Tensor({1, 1}, {0})));
    return t.squared_error(s, 0.3);
  });
  CHECK(res.max_rel_error < 1e-6);

  // softmax_col weights as a function of scores
  ParameterStore s3;
  s3.add("s", random_tensor(rng, {5, 1}, 2.0));
  s3.add("f", random_tensor(rng, {5, 2}));
  auto res3 = grad_check(s3, [](Tape& t) {
    Tape::Id w = t.softmax_col(t.param("s"));
    Tape::Id y = t.rows_weighted_sum(w, t.param("f"));  // [1,2]
    Tape::Id s = t.linear(y, t.leaf(Tensor({2, 1}, {1, 1})), t.leaf(Tensor({1, 1}, {0})));
    return t.squared_error(s, -0.2);
  });
  CHECK(res3.max_rel_error < 1e-6);
}

TEST_CASE("checkpoint round-trip is bit-exact; corruption detected") {
  Rng rng(33);
  ParameterStore store;
  store.add("a.w", random_tensor(rng, {3, 5}));
  store.add("a.b", random_tensor(rng, {1, 5}));
  store.add("zz", random_tensor(rng, {4, 1}));
  store.add("__cfg.thing", Tensor::scalar(7.0), false);
  store.entry("a.w").m = random_tensor(rng, {3, 5});
  store.entry("a.w").v = random_tensor(rng, {3, 5});
  store.opt_step = 17;

  const std::string path = (std::filesystem::temp_directory_path() / "hglance_ckpt_test.hglc").string();
  save_checkpoint(store, path);
  ParameterStore loaded = load_checkpoint(path);
  CHECK(loaded.opt_step == 17);
  CHECK(loaded.value("a.w").data == store.value("a.w").data);
  CHECK(loaded.entry("a.w").m.data == store.entry("a.w").m.data);
  CHECK(loaded.entry("__cfg.thing").trainable == false);
  CHECK(checkpoint_bytes(loaded) == checkpoint_bytes(store));

  // flip one byte -> ChecksumMismatch
  std::string bytes = checkpoint_bytes(store);
  bytes[bytes.size() / 2] = static_cast<char>(bytes[bytes.size() / 2] ^ 0x01);
  const std::string bad = path + ".bad";
  {
    std::FILE* f = std::fopen(bad.c_str(), "wb");
    REQUIRE(f != nullptr);
    std::fwrite(bytes.data(), 1, bytes.size(), f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_checkpoint(bad), ChecksumMismatch);
  std::filesystem::remove(path);
  std::filesystem::remove(bad);
}

TEST_CASE("rng distributions are sane and deterministic") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng r(7);
  double sum = 0.0, sum2 = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(sd - 1.0) < 0.03);
}
