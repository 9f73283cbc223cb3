#include <doctest.h>

#include "seqrules/error.hpp"
#include "seqrules/nn.hpp"
#include "support.hpp"

using namespace seqrules;
using namespace seqrules::nn;

namespace {

DenseNet random_net(Rng& rng) {
  const std::size_t depth = 1 + rng.index(3);
  std::vector<std::size_t> sizes{1 + rng.index(5)};
  std::vector<Activation> acts;
  for (std::size_t i = 0; i < depth; ++i) {
    sizes.push_back(1 + rng.index(5));
    acts.push_back(static_cast<Activation>(rng.index(3)));
  }
  DenseNet net = DenseNet::create(sizes, acts, rng);
  for (auto& l : net.layers) {
    for (double& b : l.bias) b = rng.uniform(-0.5, 0.5);
  }
  return net;
}

// Relu units whose pre-activation sits this close to zero are skipped: the
// central difference straddles the kink there.
bool near_kink(const DenseNet& net, std::span<const double> x, double margin) {
  const auto t = net_forward(net, x);
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    if (net.layers[i].activation != Activation::relu) continue;
    for (double p : t.pre[i]) {
      if (std::abs(p) < margin) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("softmax rows are probability vectors and reject non-finite input") {
  const Matrix p = softmax_rows(Matrix::from_rows({{1.0, 2.0, 3.0}, {-1000.0, 0.0, 1000.0}}));
  for (std::size_t r = 0; r < p.rows(); ++r) {
    double s = 0.0;
    for (double v : p.row(r)) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(p(0, 2) == doctest::Approx(std::exp(3.0) / (std::exp(1.0) + std::exp(2.0) + std::exp(3.0))));
  CHECK_THROWS_AS(softmax_rows(Matrix::from_rows({{0.0, std::nan("")}})), InvalidArgument);
}

TEST_CASE("softmax_backward matches central differences") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Vector logits = testing::random_vector(4, rng, -2, 2);
    const Vector g = testing::random_vector(4, rng);
    const Vector analytic = softmax_backward(softmax(logits), g);
    for (std::size_t i = 0; i < logits.size(); ++i) {
      const double fd = testing::central_difference(&logits[i], 1e-6, [&] { return dot(softmax(logits), g); });
      CHECK(testing::relative_error(analytic[i], fd) < 1e-6);
    }
  }
}

TEST_CASE("net_backward agrees with central differences on 100 random nets") {
  Rng rng(11);
  std::size_t checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    DenseNet net = random_net(rng);
    Vector x = testing::random_vector(net.input_size(), rng);
    const Vector up = testing::random_vector(net.output_size(), rng);
    const double h = 1e-5;
    if (near_kink(net, x, 1e-4)) continue;
    const auto loss = [&] { return dot(net_predict(net, x), up); };

    NetGradient grad = NetGradient::zeros_like(net);
    const Vector gx = net_backward(net, net_forward(net, x), up, grad);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      worst = std::max(worst, testing::relative_error(gx[i], testing::central_difference(&x[i], h, loss)));
    }
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
      auto w = net.layers[l].weights.values();
      for (std::size_t i = 0; i < w.size(); ++i) {
        worst = std::max(worst, testing::relative_error(grad.weights[l].values()[i],
                                                        testing::central_difference(&w[i], h, loss)));
      }
      for (std::size_t i = 0; i < net.layers[l].bias.size(); ++i) {
        worst = std::max(worst, testing::relative_error(grad.bias[l][i],
                                                        testing::central_difference(&net.layers[l].bias[i], h, loss)));
      }
    }
    CHECK(worst < 1e-4);
    ++checked;
  }
  CHECK(checked >= 80);
}

TEST_CASE("net_forward rejects a wrong input width") {
  Rng rng(1);
  const std::size_t sizes[] = {3, 2};
  const Activation acts[] = {Activation::relu};
  const DenseNet net = DenseNet::create(sizes, acts, rng);
  const Vector x(4, 0.0);
  CHECK_THROWS_AS(net_forward(net, x), InvalidArgument);
}

TEST_CASE("loss values match closed forms") {
  const Vector pred{0.2, 0.9};
  const Vector target{0.0, 1.0};
  const auto mse = loss_eval(LossKind::mean_squared_error, pred, target);
  CHECK(mse.value == doctest::Approx((0.04 + 0.01) / 2.0));
  CHECK(mse.grad[0] == doctest::Approx(0.2));
  const auto bce = loss_eval(LossKind::binary_cross_entropy, pred, target);
  CHECK(bce.value == doctest::Approx(-(std::log(0.8) + std::log(0.9)) / 2.0));
  // Saturated predictions are clamped rather than producing infinities.
  const Vector zero{0.0};
  const Vector one{1.0};
  const auto sat = loss_eval(LossKind::binary_cross_entropy, zero, one);
  CHECK(sat.value == doctest::Approx(-std::log(kBceClamp)));
  CHECK(std::isfinite(sat.grad[0]));
  CHECK(sat.grad[0] < 0.0);
}

TEST_CASE("first Adam step moves every parameter by the learning rate against its gradient sign") {
  Vector w{1.0, -2.0, 0.5};
  const Vector g{0.3, -4.0, 1e-3};
  Adam adam({.learning_rate = 0.01});
  const ParamGroup groups[] = {{"w", w, g}};
  adam.step(groups);
  CHECK(w[0] == doctest::Approx(1.0 - 0.01).epsilon(1e-6));
  CHECK(w[1] == doctest::Approx(-2.0 + 0.01).epsilon(1e-6));
  CHECK(w[2] == doctest::Approx(0.5 - 0.01 * 1e-3 / (1e-3 + 1e-8)).epsilon(1e-9));
  CHECK(adam.steps() == 1);
}

TEST_CASE("Adam names the diverging group and leaves parameters untouched") {
  Vector a{1.0}, b{2.0};
  const Vector ga{0.1}, gb{std::numeric_limits<double>::infinity()};
  Adam adam;
  const ParamGroup groups[] = {{"encoder.0.w", a, ga}, {"centers", b, gb}};
  try {
    adam.step(groups);
    FAIL("expected TrainingDiverged");
  } catch (const TrainingDiverged& e) {
    CHECK(std::string(e.what()).find("centers") != std::string::npos);
  }
  CHECK(a[0] == 1.0);
  CHECK(b[0] == 2.0);
  CHECK(adam.steps() == 0);
}

TEST_CASE("random streams are reproducible and distinct") {
  Rng a = Rng::stream(7, 1), b = Rng::stream(7, 1), c = Rng::stream(7, 2), d = Rng::stream(8, 1);
  const double va = a.uniform(0, 1);
  CHECK(va == b.uniform(0, 1));
  CHECK(va != c.uniform(0, 1));
  CHECK(va != d.uniform(0, 1));
}
