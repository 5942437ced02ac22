#include <cmath>
#include <filesystem>
#include <numeric>

#include "ascnet/common/error.hpp"
#include "ascnet/common/rng.hpp"
#include "ascnet/tensor/checkpoint.hpp"
#include "ascnet/tensor/gradcheck.hpp"
#include "ascnet/tensor/init.hpp"
#include "ascnet/tensor/ops.hpp"
#include "ascnet/tensor/optim.hpp"
#include "doctest.h"

using namespace ascnet::tensor;
using ascnet::Rng;

namespace {

Tensor rand_param(Shape s, Rng& rng, double a = 1.0) { return uniform(std::move(s), -a, a, rng); }

constexpr double kGradTol = 1e-4;

}  // namespace

TEST_CASE("dense forward") {
  SUBCASE("identity weights, no bias") {
    auto x = Tensor::from({1, 2}, {1, 0});
    auto w = Tensor::from({2, 2}, {1, 0, 0, 1});
    auto y = dense(x, w);
    CHECK(y.shape() == Shape{1, 2});
    CHECK(y[0] == 1.0);
    CHECK(y[1] == 0.0);
  }
  SUBCASE("hand arithmetic with bias") {
    auto y = dense(Tensor::from({1, 2}, {1, 2}), Tensor::from({2, 1}, {1, 1}), Tensor::from({1}, {1}));
    CHECK(y.shape() == Shape{1, 1});
    CHECK(y.item() == 4.0);
  }
  SUBCASE("shape mismatch names both shapes") {
    try {
      dense(Tensor::zeros({1, 3}), Tensor::zeros({2, 2}));
      FAIL("expected ShapeError");
    } catch (const ascnet::ShapeError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("(1,3)") != std::string::npos);
      CHECK(msg.find("(2,2)") != std::string::npos);
    }
  }
}

TEST_CASE("dense gradient matches finite differences") {
  Rng rng(1);
  auto x = rand_param({3, 4}, rng);
  auto w = rand_param({4, 2}, rng);
  auto b = rand_param({2}, rng);
  auto r = grad_check([&] { return sum_all(dense(x, w, b)); }, {{"x", x}, {"w", w}, {"b", b}});
  CHECK(r.checked == 12 + 8 + 2);
  CHECK(r.max_rel_error < kGradTol);
}

TEST_CASE("activations") {
  CHECK(tanh(Tensor::scalar(0.0)).item() == 0.0);
  CHECK(sigmoid(Tensor::scalar(0.0)).item() == 0.5);
  auto s = softmax(Tensor::from({3}, {0, 0, 0}), 0);
  for (double v : s.values()) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  auto big = softmax(Tensor::from({3}, {1000, 0, 0}), 0);
  CHECK(std::isfinite(big[0]));
  CHECK(big[0] == doctest::Approx(1.0));
  CHECK(big[1] < 1e-300);
  CHECK(sigmoid(Tensor::scalar(-800.0)).item() >= 0.0);
}

TEST_CASE("softmax rows sum to one along any axis (property)") {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Shape shape{1 + rng.below(4), 1 + rng.below(5), 1 + rng.below(6)};
    auto x = rand_param(shape, rng, 30.0);
    const std::size_t axis = rng.below(3);
    auto y = softmax(x, axis);
    const std::size_t outer = axis == 0 ? 1 : (axis == 1 ? shape[0] : shape[0] * shape[1]);
    const std::size_t inner = axis == 2 ? 1 : (axis == 1 ? shape[2] : shape[1] * shape[2]);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t i = 0; i < inner; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < shape[axis]; ++j) s += y[(o * shape[axis] + j) * inner + i];
        CHECK(std::abs(s - 1.0) < 1e-9);
      }
  }
  CHECK_THROWS_AS(softmax(Tensor::zeros({2, 2}), 2), ascnet::ShapeError);
}

TEST_CASE("elementwise and structural ops pass gradient checks") {
  Rng rng(3);
  auto a = rand_param({2, 3, 4}, rng);
  auto b = rand_param({2, 3, 4}, rng);
  auto w = rand_param({4}, rng);
  auto f = [&] {
    auto t = add(mul(tanh(a), sigmoid(b)), scale(sub(a, b), 0.3));
    auto sm = softmax(add_scalar(t, 0.1), 2);
    auto picked = select(sm, 2, 1);              // [2,3]
    auto avg = mean(reshape(t, {2, 3, 4}), 1);   // [2,4]
    auto joined = concat({picked, avg}, 1);      // [2,7]
    return add(mean_all(mul(joined, joined)), sum_all(mul(select(avg, 0, 1), w)));
  };
  auto r = grad_check(f, {{"a", a}, {"b", b}, {"w", w}});
  CHECK(r.max_rel_error < kGradTol);
  CHECK(r.excluded == 0);
}

TEST_CASE("embedding lookup") {
  auto table = Tensor::from({3, 2}, {9, 9, 1, 2, 3, 4}, true);
  SUBCASE("padding id yields zero row") {
    auto e = embedding_lookup(table, {0}, true);
    CHECK(e[0] == 0.0);
    CHECK(e[1] == 0.0);
  }
  SUBCASE("frozen table receives no gradient") {
    table.clear_grad();
    auto e = embedding_lookup(table, {1, 2}, false);
    auto w = Tensor::from({2, 2}, {1, 1, 1, 1}, true);
    sum_all(mul(e, w)).backward();
    CHECK_FALSE(table.has_grad());
    CHECK(w.has_grad());
  }
  SUBCASE("repeated ids sum their gradients") {
    Rng rng(4);
    auto t2 = rand_param({2, 2}, rng);
    auto coeff = rand_param({4, 2}, rng);
    coeff.set_requires_grad(false);
    auto r = grad_check([&] { return sum_all(mul(embedding_lookup(t2, {1, 1, 0, 1}, true), coeff)); },
                        {{"table", t2}});
    CHECK(r.max_rel_error < kGradTol);
    t2.zero_grad();
    sum_all(embedding_lookup(t2, {1, 1, 0, 1}, true)).backward();
    CHECK(t2.grad()[0] == 0.0);  // padding row untouched
    CHECK(t2.grad()[2] == 3.0);
  }
  SUBCASE("out of range id") { CHECK_THROWS_AS(embedding_lookup(table, {3}, true), ascnet::DataError); }
}

namespace {

GruParams make_gru(std::size_t d, std::size_t h, Rng& rng, double a = 0.5) {
  return {rand_param({d, 3 * h}, rng, a), rand_param({h, 3 * h}, rng, a), rand_param({3 * h}, rng, a)};
}

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

TEST_CASE("GRU matches the gate equations on a hand-computed two-step sequence") {
  // d_in = 1, h = 1, so every gate is a scalar.
  const double wz = 0.5, wr = -0.3, wh = 0.8, uz = 0.2, ur = 0.4, uh = -0.6, bz = 0.1, br = 0.0, bh = -0.2;
  GruParams p{Tensor::from({1, 3}, {wz, wr, wh}), Tensor::from({1, 3}, {uz, ur, uh}),
              Tensor::from({3}, {bz, br, bh})};
  const double x0 = 1.5, x1 = -0.7;
  auto step = [&](double x, double h) {
    const double z = sig(wz * x + uz * h + bz);
    const double r = sig(wr * x + ur * h + br);
    const double n = std::tanh(wh * x + uh * (r * h) + bh);
    return (1 - z) * h + z * n;
  };
  const double h0 = step(x0, 0.0), h1 = step(x1, h0);
  auto out = gru(Tensor::from({2, 1}, {x0, x1}), p, false);
  CHECK(out[0] == doctest::Approx(h0).epsilon(1e-14));
  CHECK(out[1] == doctest::Approx(h1).epsilon(1e-14));
  // Reverse direction reads x1 first; states stay aligned with positions.
  const double r1 = step(x1, 0.0), r0 = step(x0, r1);
  auto rev = gru(Tensor::from({2, 1}, {x0, x1}), p, true);
  CHECK(rev[1] == doctest::Approx(r1).epsilon(1e-14));
  CHECK(rev[0] == doctest::Approx(r0).epsilon(1e-14));
}

TEST_CASE("bi-GRU shapes and fixed point") {
  Rng rng(5);
  SUBCASE("T=40, h=200 gives a 40x400 state matrix") {
    auto x = rand_param({40, 208}, rng);
    x.set_requires_grad(false);
    auto y = bi_gru(x, make_gru(208, 200, rng, 0.05), make_gru(208, 200, rng, 0.05));
    CHECK(y.shape() == Shape{40, 400});
  }
  SUBCASE("zero input and zero weights stay at zero") {
    GruParams z{Tensor::zeros({3, 6}), Tensor::zeros({2, 6}), Tensor::zeros({6})};
    auto y = bi_gru(Tensor::zeros({5, 3}), z, z);
    for (double v : y.values()) CHECK(v == 0.0);
  }
}

TEST_CASE("bi-GRU gradients match finite differences") {
  Rng rng(6);
  auto x = rand_param({3, 2}, rng);
  auto f = make_gru(2, 2, rng, 0.8);
  auto b = make_gru(2, 2, rng, 0.8);
  auto coeff = rand_param({3, 4}, rng);
  coeff.set_requires_grad(false);
  auto loss = [&] { return sum_all(mul(bi_gru(x, f, b), coeff)); };
  auto r = grad_check(loss, {{"x", x}, {"fw", f.w}, {"fu", f.u}, {"fb", f.b}, {"bw", b.w}, {"bu", b.u}, {"bb", b.b}});
  CHECK(r.max_rel_error < kGradTol);
  auto plain = grad_check([&] { return sum_all(bi_gru(x, f, b)); }, {{"fu", f.u}, {"bw", b.w}});
  CHECK(plain.max_rel_error < kGradTol);
}

TEST_CASE("convolutional max-pool attention") {
  Rng rng(7);
  SUBCASE("six widths of 100 filters give 600 outputs") {
    auto h = rand_param({40, 16}, rng);
    std::vector<ConvBank> banks;
    for (std::size_t w = 1; w <= 6; ++w) banks.push_back({w, rand_param({w * 16, 100}, rng), Tensor::zeros({100})});
    CHECK(conv_maxpool(h, banks).shape() == Shape{600});
  }
  SUBCASE("width-1 one-hot filter is max over time of that channel") {
    auto h = rand_param({9, 4}, rng);
    std::vector<ConvBank> banks{{1, Tensor::from({4, 1}, {0, 0, 1, 0}), Tensor::zeros({1})}};
    double want = -1e9;
    for (std::size_t t = 0; t < 9; ++t) want = std::max(want, h[t * 4 + 2]);
    CHECK(conv_maxpool(h, banks).item() == want);
  }
  SUBCASE("sequence shorter than the widest filter") {
    std::vector<ConvBank> banks{{6, Tensor::zeros({12, 1}), Tensor::zeros({1})}};
    CHECK_THROWS_AS(conv_maxpool(Tensor::zeros({5, 2}), banks), ascnet::ShapeError);
  }
  SUBCASE("gradients on T=7, D=3, two filters per width") {
    auto h = rand_param({7, 3}, rng);
    std::vector<ConvBank> banks;
    std::vector<NamedParam> params{{"h", h}};
    for (std::size_t w = 1; w <= 6; ++w) {
      banks.push_back({w, rand_param({w * 3, 2}, rng), rand_param({2}, rng)});
      params.push_back({"k" + std::to_string(w), banks.back().kernel});
      params.push_back({"b" + std::to_string(w), banks.back().bias});
    }
    auto coeff = rand_param({12}, rng);
    coeff.set_requires_grad(false);
    auto r = grad_check([&] { return sum_all(mul(conv_maxpool(h, banks), coeff)); }, params);
    CHECK(r.max_rel_error < kGradTol);
  }
}

TEST_CASE("losses") {
  const double eps = kTanimotoEpsilon;
  SUBCASE("tanimoto closed forms") {
    auto y = Tensor::from({1, 3}, {0, 1, 0});
    CHECK(tanimoto(y, y).item() == doctest::Approx(1.0 - 1.0 / (1.0 + eps)).epsilon(1e-12));
    CHECK(tanimoto(Tensor::from({1, 2}, {0, 1}), Tensor::from({1, 2}, {1, 0})).item() == 1.0);
    const double want = 1.0 - 0.5 / (2.0 - 0.5 + eps);
    CHECK(std::abs(tanimoto(Tensor::from({1, 2}, {0.5, 0.5}), Tensor::from({1, 2}, {1, 0})).item() - want) < 1e-15);
    CHECK(want == doctest::Approx(0.6667).epsilon(1e-4));
  }
  SUBCASE("tanimoto symmetric and bounded (property)") {
    Rng rng(8);
    for (int i = 0; i < 100; ++i) {
      std::vector<double> a(11), b(11);
      for (auto& v : a) v = rng.uniform();
      for (auto& v : b) v = rng.below(2);
      auto ta = Tensor::from({1, 11}, a), tb = Tensor::from({1, 11}, b);
      const double l1 = tanimoto(ta, tb).item(), l2 = tanimoto(tb, ta).item();
      CHECK(l1 == l2);
      CHECK(l1 >= 0.0);
      CHECK(l1 <= 1.0 + 1e-6);
    }
  }
  SUBCASE("cross entropy") {
    auto y = Tensor::from({2, 3}, {1, 0, 0, 0, 0, 1});
    CHECK(cross_entropy(y, y).item() == 0.0);
    auto p = Tensor::from({2, 3}, {0.7, 0.2, 0.1, 0.3, 0.3, 0.4});
    const double want = -(std::log(0.7) + std::log(0.4)) / 2.0;
    CHECK(cross_entropy(p, y).item() == doctest::Approx(want).epsilon(1e-14));
    CHECK(cross_entropy(p, y).item() > 0.0);
  }
  SUBCASE("mse") {
    CHECK(mse(Tensor::from({3}, {1, 2, 3}), Tensor::from({3}, {1, 0, 3})).item() == doctest::Approx(4.0 / 3.0));
  }
  SUBCASE("loss gradients") {
    Rng rng(9);
    auto logits = rand_param({4, 3}, rng);
    auto y = Tensor::from({4, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0});
    auto target = rand_param({4, 3}, rng);
    target.set_requires_grad(false);
    auto r1 = grad_check([&] { return cross_entropy(softmax(logits, 1), y); }, {{"logits", logits}});
    auto r2 = grad_check([&] { return mse(tanh(logits), target); }, {{"logits", logits}});
    auto yl = Tensor::from({4, 3}, {1, 0, 1, 0, 1, 0, 0, 0, 1, 1, 1, 0});
    auto r3 = grad_check([&] { return tanimoto(sigmoid(logits), yl); }, {{"logits", logits}});
    CHECK(r1.max_rel_error < kGradTol);
    CHECK(r2.max_rel_error < kGradTol);
    CHECK(r3.max_rel_error < kGradTol);
  }
}

TEST_CASE("optimizers") {
  SUBCASE("zero gradient leaves parameters unchanged") {
    for (auto cfg : {OptimizerConfig::adagrad(), OptimizerConfig::adam()}) {
      auto p = Tensor::from({2}, {0.3, -0.4}, true);
      Optimizer opt({{"p", p}}, cfg);
      opt.zero_grad();
      opt.step();
      CHECK(p[0] == 0.3);
      CHECK(p[1] == -0.4);
    }
  }
  SUBCASE("AdaGrad first step with lr=1, g=2") {
    auto p = Tensor::from({1}, {5.0}, true);
    Optimizer opt({{"p", p}}, OptimizerConfig::adagrad(1.0));
    p.zero_grad();
    p.mutable_grad()[0] = 2.0;
    opt.step();
    CHECK(p[0] == doctest::Approx(5.0 - 2.0 / (2.0 + 1e-8)).epsilon(1e-15));
  }
  SUBCASE("Adam first step has magnitude lr regardless of gradient scale") {
    for (double g : {1e-3, 1.0, 1e3}) {
      auto p = Tensor::from({1}, {0.0}, true);
      Optimizer opt({{"p", p}}, OptimizerConfig::adam());
      p.zero_grad();
      p.mutable_grad()[0] = g;
      opt.step();
      CHECK(std::abs(p[0] + 0.001) < 1e-7);
    }
  }
  SUBCASE("missing gradient is an error, frozen parameters are skipped") {
    auto p = Tensor::from({1}, {1.0}, true);
    Optimizer opt({{"p", p}}, OptimizerConfig::adam());
    CHECK_THROWS_AS(opt.step(), ascnet::Error);
    p.set_requires_grad(false);
    CHECK_NOTHROW(opt.step());
    CHECK(p[0] == 1.0);
  }
}

TEST_CASE("grad_check harness") {
  Rng rng(10);
  SUBCASE("linear function is exact to rounding") {
    auto w = rand_param({5}, rng);
    auto c = rand_param({5}, rng);
    c.set_requires_grad(false);
    auto r = grad_check([&] { return sum_all(mul(w, c)); }, {{"w", w}});
    CHECK(r.max_rel_error < 1e-9);
  }
  SUBCASE("a max-pool tie is excluded") {
    auto h = Tensor::from({2, 1}, {0.5, 0.5}, true);
    std::vector<ConvBank> banks{{1, Tensor::from({1, 1}, {1.0}), Tensor::zeros({1})}};
    auto r = grad_check([&] { return sum_all(conv_maxpool(h, banks)); }, {{"h", h}});
    CHECK(r.excluded == 2);
    CHECK(r.checked == 0);
  }
}

TEST_CASE("checkpoint round trip preserves tensors, optimizer state and metadata") {
  Rng rng(11);
  auto a = rand_param({3, 2}, rng);
  auto b = rand_param({4}, rng);
  Optimizer opt({{"a", a}, {"b", b}}, OptimizerConfig::adam(0.01));
  opt.zero_grad();
  sum_all(mul(a, a)).backward();
  opt.step();

  Checkpoint ck;
  ck.seed = 99;
  ck.config_digest = "abc";
  ck.metadata = {{"kind", "test"}};
  ck.tensors = Checkpoint::capture(opt.params());
  ck.optimizer = opt.state();
  const auto path = std::filesystem::temp_directory_path() / "ascnet_ckpt_test.bin";
  save_checkpoint(path, ck);
  auto back = load_checkpoint(path);
  CHECK(back.seed == 99);
  CHECK(back.config_digest == "abc");
  CHECK(back.metadata["kind"] == "test");
  CHECK(back.tensor("a").values == std::vector<double>(a.values().begin(), a.values().end()));
  REQUIRE(back.optimizer);
  CHECK(back.optimizer->step_count == 1);
  CHECK(back.optimizer->slots[0].second == opt.state().slots[0].second);

  auto a2 = Tensor::zeros({3, 2}, true), b2 = Tensor::zeros({4}, true);
  std::vector<NamedParam> params{{"a", a2}, {"b", b2}};
  back.restore(params);
  CHECK(a2[5] == a[5]);
  std::vector<NamedParam> wrong{{"a", Tensor::zeros({2, 3})}};
  CHECK_THROWS_AS(back.restore(wrong), ascnet::DataError);
  std::filesystem::remove(path);
}

TEST_CASE("training is bit-reproducible for a fixed seed") {
  auto run = [] {
    Rng rng(42);
    auto w = glorot_uniform(3, 2, rng);
    auto x = uniform({5, 3}, -1, 1, rng);
    x.set_requires_grad(false);
    Optimizer opt({{"w", w}}, OptimizerConfig::adagrad(0.1));
    for (int i = 0; i < 20; ++i) {
      opt.zero_grad();
      mean_all(mul(tanh(matmul(x, w)), tanh(matmul(x, w)))).backward();
      opt.step();
    }
    return std::vector<double>(w.values().begin(), w.values().end());
  };
  CHECK(run() == run());
}
