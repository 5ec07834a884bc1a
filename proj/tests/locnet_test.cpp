#include <cmath>

#include "doctest.h"
#include "hglance/errors.hpp"
#include "hglance/gaussian.hpp"
#include "hglance/grad_check.hpp"
#include "hglance/location_net.hpp"
#include "hglance/rng.hpp"

using namespace hglance;

namespace {

ModelConfig tiny_config() {
  ModelConfig cfg;
  cfg.d_f = 6;
  cfg.d_rep = 5;
  cfg.d_attn = 4;
  return cfg;
}

Tensor random_rows(Rng& rng, std::size_t n, std::size_t d, double scale = 1.0) {
  Tensor t = Tensor::zeros({n, d});
  for (double& v : t.data) v = rng.uniform(-scale, scale);
  return t;
}

}  // namespace

TEST_CASE("masked_input: first component, mask layout, order violation") {
  Rng rng(2);
  ParameterStore store;
  Tape tape(&store);
  const int d_rep = 5;
  Tape::Id rep = tape.leaf(random_rows(rng, 3, 5));

  // c = Py: everything masked; tail of the input is all zeros
  const std::vector<double> in0 =
      tape.val(masked_input(tape, rep, d_rep, {9, 9, 9, 9}, 0, 0)).data;
  REQUIRE(in0.size() == 13);
  for (std::size_t j = 5; j < 13; ++j) CHECK(in0[j] == 0.0);

  // c = Uz with three fixed components: mask = (1,1,1,0)
  const std::vector<double> in3 =
      tape.val(masked_input(tape, rep, d_rep, {0.1, 0.2, 0.3, 77.0}, 3, 3)).data;
  CHECK(in3[5] == 0.1);
  CHECK(in3[6] == 0.2);
  CHECK(in3[7] == 0.3);
  CHECK(in3[8] == 0.0);  // masked slot zeroed regardless of content
  CHECK(in3[9] == 1.0);
  CHECK(in3[10] == 1.0);
  CHECK(in3[11] == 1.0);
  CHECK(in3[12] == 0.0);

  // start-of-episode placeholder
  const std::vector<double> start =
      tape.val(masked_input(tape, -1, d_rep, {0, 0, 0, 0}, 0, 0)).data;
  for (double v : start) CHECK(v == 0.0);

  CHECK_THROWS_AS(masked_input(tape, rep, d_rep, {1, 2, 0, 0}, 2, 1), OrderViolation);
  CHECK_THROWS_AS(masked_input(tape, rep, d_rep, {1, 0, 0, 0}, 0, 1), OrderViolation);
}

TEST_CASE("predict_params: activation ranges, zero weights, masking independence") {
  Rng rng(3);
  ParameterStore store;
  Model model = Model::init(store, tiny_config(), 5);
  Tape tape(&store);
  Tape::Id pooled = tape.leaf(random_rows(rng, 1, 5));

  for (int c = 0; c < kComponents; ++c) {
    std::array<double, 4> partial{};
    for (int i = 0; i < c; ++i) partial[static_cast<std::size_t>(i)] = rng.uniform(-1, 1);
    auto [mu_id, sigma_id] = predict_params(tape, pooled, partial, c, c, model);
    const double mu = tape.scalar(mu_id);
    const double sigma = tape.scalar(sigma_id);
    CHECK(mu > -1.0);
    CHECK(mu < 1.0);
    CHECK(sigma >= model.cfg.sigma_min);
    CHECK(sigma < 1.0);
  }

  // zero weights: mu = tanh(0) = 0, sigma = max(sigmoid(0), sigma_min) = 0.5
  ParameterStore zstore;
  Model zmodel = Model::init(zstore, tiny_config(), 5);
  for (const std::string& name : zstore.names()) {
    auto& t = zstore.value(name);
    std::fill(t.data.begin(), t.data.end(), 0.0);
  }
  Tape zt(&zstore);
  Tape::Id zp = zt.leaf(Tensor::zeros({1, 5}));
  auto [zmu, zsigma] = predict_params(zt, zp, {0, 0, 0, 0}, 0, 0, zmodel);
  CHECK(zt.scalar(zmu) == 0.0);
  CHECK(zt.scalar(zsigma) == 0.5);

  // altering a masked slot changes nothing, bitwise, for every head
  for (int c = 0; c < kComponents; ++c) {
    std::array<double, 4> a{0.3, -0.2, 0.7, -0.9};
    std::array<double, 4> b = a;
    for (int j = c; j < 4; ++j) b[static_cast<std::size_t>(j)] = 123.0 + j;
    Tape t1(&store), t2(&store);
    Tape::Id p1 = t1.leaf(random_rows(rng, 1, 5));
    Tape::Id p2 = t2.leaf(t1.val(p1));
    auto [m1, s1] = predict_params(t1, p1, a, c, c, model);
    auto [m2, s2] = predict_params(t2, p2, b, c, c, model);
    CHECK(t1.scalar(m1) == t2.scalar(m2));
    CHECK(t1.scalar(s1) == t2.scalar(s2));
  }

  // determinism
  Tape ta(&store), tb(&store);
  auto [ma, sa] = predict_params(ta, ta.leaf(Tensor::zeros({1, 5})), {0, 0, 0, 0}, 0, 0, model);
  auto [mb, sb] = predict_params(tb, tb.leaf(Tensor::zeros({1, 5})), {0, 0, 0, 0}, 0, 0, model);
  CHECK(ta.scalar(ma) == tb.scalar(mb));
  CHECK(ta.scalar(sa) == tb.scalar(sb));
}

TEST_CASE("sample_action: determinism, component order, tail bound") {
  Rng rng(7);
  ParameterStore store;
  Model model = Model::init(store, tiny_config(), 9);

  Tensor rep = random_rows(rng, 4, 5);
  {
    Rng r1(100), r2(100);
    Tape t1(&store), t2(&store);
    const PolicyStep s1 = sample_action(t1, t1.leaf(rep), model, r1);
    const PolicyStep s2 = sample_action(t2, t2.leaf(rep), model, r2);
    CHECK(s1.raw == s2.raw);
    CHECK(s1.mu == s2.mu);
    CHECK(s1.sigma == s2.sigma);
    CHECK(s1.clipped == s2.clipped);
  }

  // sigma forced to the floor, mu ~ 0 -> samples stay within 5 sigma
  ParameterStore zstore;
  Model zmodel = Model::init(zstore, tiny_config(), 9);
  for (const std::string& name : zstore.names()) {
    auto& t = zstore.value(name);
    std::fill(t.data.begin(), t.data.end(), 0.0);
  }
  // drive sigmoid far negative so sigma clamps to sigma_min
  std::fill(zstore.value(zmodel.loc[0].sigma.b).data.begin(),
            zstore.value(zmodel.loc[0].sigma.b).data.end(), -50.0);
  std::fill(zstore.value(zmodel.loc[1].sigma.b).data.begin(),
            zstore.value(zmodel.loc[1].sigma.b).data.end(), -50.0);
  std::fill(zstore.value(zmodel.loc[2].sigma.b).data.begin(),
            zstore.value(zmodel.loc[2].sigma.b).data.end(), -50.0);
  std::fill(zstore.value(zmodel.loc[3].sigma.b).data.begin(),
            zstore.value(zmodel.loc[3].sigma.b).data.end(), -50.0);
  Rng zr(55);
  int within = 0, total = 0;
  for (int i = 0; i < 500; ++i) {
    Tape t(&zstore);
    const PolicyStep s = sample_action(t, -1, zmodel, zr);
    for (int c = 0; c < 4; ++c) {
      CHECK(s.sigma[static_cast<std::size_t>(c)] == zmodel.cfg.sigma_min);
      ++total;
      if (std::abs(s.raw[static_cast<std::size_t>(c)]) <= 0.05) ++within;
    }
  }
  CHECK(within == total);  // P(|z| > 5) ~ 6e-7; 2000 draws stay inside
}

TEST_CASE("sampling statistics match the requested Gaussian") {
  // 10,000 draws at mu = 0.3, sigma = 0.2 (clipping never triggers in practice)
  Rng rng(424242);
  double sum = 0.0, sum2 = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal(0.3, 0.2);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  CHECK(std::abs(mean - 0.3) < 0.01);
  CHECK(std::abs(sd - 0.2) < 0.01);
}

TEST_CASE("xi_mu / xi_sigma closed forms") {
  CHECK(xi_mu(0.7, 0.7, 0.3, 0.01) == 0.0);
  CHECK(xi_mu(0.5, 0.0, 1.0, 0.01) == 0.5);
  CHECK(xi_sigma(0.4, 0.4, 0.5, 0.01) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(xi_sigma(0.9, 0.4, 0.5, 0.01) == 0.0);  // |x-mu| == sigma
  CHECK_THROWS_AS(xi_mu(0.0, 0.0, 0.005, 0.01), SigmaTooSmall);
  CHECK_THROWS_AS(xi_sigma(0.0, 0.0, 0.0, 0.01), SigmaTooSmall);

  // against central differences of the log-density, 1000 random triples;
  // the step scales with sigma and the comparison is relative, since the
  // derivatives grow like 1/sigma^3 near the floor
  Rng rng(77);
  double worst_mu = 0.0, worst_sigma = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(-1.5, 1.5);
    const double mu = rng.uniform(-1.0, 1.0);
    const double sigma = rng.uniform(0.01, 1.0);
    const double h = 3e-6 * sigma;
    const double dmu_num =
        (log_normal_density(x, mu + h, sigma) - log_normal_density(x, mu - h, sigma)) / (2 * h);
    const double dsg_num =
        (log_normal_density(x, mu, sigma + h) - log_normal_density(x, mu, sigma - h)) / (2 * h);
    const double a_mu = xi_mu(x, mu, sigma, 0.01);
    const double a_sg = xi_sigma(x, mu, sigma, 0.01);
    worst_mu = std::max(worst_mu, std::abs(dmu_num - a_mu) / std::max(1.0, std::abs(a_mu)));
    worst_sigma = std::max(worst_sigma, std::abs(dsg_num - a_sg) / std::max(1.0, std::abs(a_sg)));
  }
  CHECK(worst_mu < 1e-7);
  CHECK(worst_sigma < 1e-7);
}

TEST_CASE("surrogate objective gradients flow through the heads") {
  // advantage * log N(a; mu, sigma) differentiated through the component head
  Rng rng(88);
  ParameterStore store;
  ModelConfig cfg;
  cfg.d_f = 4;
  cfg.d_rep = 3;
  cfg.d_attn = 3;
  Model model = Model::init(store, cfg, 13);

  Tensor pooled = random_rows(rng, 1, 3);
  const double advantage = 0.8;
  const double sample0 = 0.4, sample2 = -0.3;

  auto build = [&](Tape& t) {
    Tape::Id p = t.leaf(pooled);
    auto [mu0, sg0] = predict_params(t, p, {0, 0, 0, 0}, 0, 0, model);
    Tape::Id lp0 = t.gaussian_log_density(sample0, mu0, sg0, cfg.sigma_min);
    std::array<double, 4> partial{sample0, 0.1, 0, 0};
    auto [mu2, sg2] = predict_params(t, p, partial, 2, 2, model);
    Tape::Id lp2 = t.gaussian_log_density(sample2, mu2, sg2, cfg.sigma_min);
    return t.mul_scalar(t.add(lp0, lp2), -advantage);
  };
  auto res = grad_check(store, build, 1e-5);
  CHECK(res.max_rel_error < 1e-4);
}
