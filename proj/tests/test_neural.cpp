#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qiren/nn/adam.hpp"
#include "qiren/nn/layers.hpp"

using namespace qiren;
constexpr double pi = std::numbers::pi;

static Matrix random_matrix(size_t rows, size_t cols, Rng& rng, double lo = -1,
                            double hi = 1) {
  Matrix m(rows, cols);
  for (double& v : m.data) v = rng.uniform(lo, hi);
  return m;
}

// loss = sum of outputs, so dloss/dout = 1 everywhere
static double fd_param_check(Layer& layer, const Matrix& x, double tol) {
  const double eps = 1e-6;
  Matrix out = layer.forward(x, Mode::Train, nullptr);
  Matrix ones(out.rows, out.cols);
  std::fill(ones.data.begin(), ones.data.end(), 1.0);
  for (ParamBlock* p : layer.params()) p->zero_grad();
  layer.backward(ones);
  double worst = 0.0;
  for (ParamBlock* p : layer.params())
    for (size_t i = 0; i < p->value.size(); ++i) {
      const double keep = p->value[i];
      p->value[i] = keep + eps;
      Matrix fp = layer.forward(x, Mode::Train, nullptr);
      p->value[i] = keep - eps;
      Matrix fm = layer.forward(x, Mode::Train, nullptr);
      p->value[i] = keep;
      double fd = 0.0;
      for (size_t k = 0; k < fp.data.size(); ++k)
        fd += fp.data[k] - fm.data[k];
      fd /= 2.0 * eps;
      worst = std::max(worst, std::abs(fd - p->grad[i]));
    }
  // restore caches for the caller
  layer.forward(x, Mode::Train, nullptr);
  CHECK(worst < tol);
  return worst;
}

static void fd_input_check(Layer& layer, const Matrix& x, double tol) {
  const double eps = 1e-6;
  layer.forward(x, Mode::Train, nullptr);
  Matrix ones(1, 1);
  {
    Matrix out = layer.forward(x, Mode::Train, nullptr);
    ones = Matrix(out.rows, out.cols);
    std::fill(ones.data.begin(), ones.data.end(), 1.0);
  }
  for (ParamBlock* p : layer.params()) p->zero_grad();
  const Matrix dx = layer.backward(ones);
  double worst = 0.0;
  for (size_t i = 0; i < x.data.size(); ++i) {
    Matrix xp = x, xm = x;
    xp.data[i] += eps;
    xm.data[i] -= eps;
    const Matrix fp = layer.forward(xp, Mode::Train, nullptr);
    const Matrix fm = layer.forward(xm, Mode::Train, nullptr);
    double fd = 0.0;
    for (size_t k = 0; k < fp.data.size(); ++k)
      fd += fp.data[k] - fm.data[k];
    fd /= 2.0 * eps;
    worst = std::max(worst, std::abs(fd - dx.data[i]));
  }
  CHECK(worst < tol);
}

TEST_CASE("linear layer computes x W^T + b") {
  Rng rng(1);
  Linear lin(2, 2, rng);
  lin.w.value = {1.0, 2.0, 3.0, 4.0};  // row o = weights into output o
  lin.b.value = {0.5, -0.5};
  Matrix x(1, 2);
  x(0, 0) = 1.0;
  x(0, 1) = -1.0;
  const Matrix y = lin.forward(x, Mode::Eval, nullptr);
  CHECK(y(0, 0) == doctest::Approx(1.0 - 2.0 + 0.5));
  CHECK(y(0, 1) == doctest::Approx(3.0 - 4.0 - 0.5));
}

TEST_CASE("linear gradients match finite differences") {
  Rng rng(2);
  Linear lin(3, 2, rng);
  const Matrix x = random_matrix(4, 3, rng);
  fd_param_check(lin, x, 1e-7);
  fd_input_check(lin, x, 1e-7);
}

TEST_CASE("linear init respects the given bounds") {
  Rng rng(3);
  Linear lin(4, 64, rng, 0.25, 0.0);
  for (double v : lin.w.value) {
    CHECK(v <= 0.25);
    CHECK(v >= -0.25);
  }
  for (double v : lin.b.value) CHECK(v == 0.0);
  Linear dflt(16, 8, rng);
  for (double v : dflt.w.value) CHECK(std::abs(v) <= 0.25);  // 1/sqrt(16)
}

TEST_CASE("batch norm maps the pair {1,3} to {-1,+1}") {
  BatchNorm bn(1);
  Matrix x(2, 1);
  x(0, 0) = 1.0;
  x(1, 0) = 3.0;
  const Matrix y = bn.forward(x, Mode::Train, nullptr);
  CHECK(y(0, 0) == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(y(1, 0) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("batch norm output has zero mean and unit variance") {
  Rng rng(4);
  BatchNorm bn(3);
  const Matrix x = random_matrix(32, 3, rng, -5.0, 2.0);
  const Matrix y = bn.forward(x, Mode::Train, nullptr);
  for (int c = 0; c < 3; ++c) {
    double mean = 0.0;
    for (size_t r = 0; r < 32; ++r) mean += y(r, c);
    mean /= 32.0;
    double var = 0.0;
    for (size_t r = 0; r < 32; ++r) {
      const double d = y(r, c) - mean;
      var += d * d;
    }
    var /= 32.0;
    CHECK(std::abs(mean) < 1e-12);
    CHECK(var == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("batch norm eval mode is an affine map from running stats") {
  Rng rng(5);
  BatchNorm bn(2);
  for (int i = 0; i < 5; ++i)
    bn.forward(random_matrix(16, 2, rng, -2.0, 3.0), Mode::Train, nullptr);
  // eval of x and 2x-related points must be consistent with a straight line
  Matrix a(1, 2), b(1, 2), mid(1, 2);
  a(0, 0) = -1.0;
  a(0, 1) = 0.5;
  b(0, 0) = 3.0;
  b(0, 1) = 2.5;
  mid(0, 0) = 1.0;
  mid(0, 1) = 1.5;
  const Matrix ya = bn.forward(a, Mode::Eval, nullptr);
  const Matrix yb = bn.forward(b, Mode::Eval, nullptr);
  const Matrix ym = bn.forward(mid, Mode::Eval, nullptr);
  for (int c = 0; c < 2; ++c)
    CHECK(ym(0, c) == doctest::Approx(0.5 * (ya(0, c) + yb(0, c)))
                          .epsilon(1e-12));
  // eval also accepts a single row, unlike train
  CHECK_NOTHROW(bn.forward(a, Mode::Eval, nullptr));
}

TEST_CASE("batch norm refuses to train on fewer than two samples") {
  BatchNorm bn(2);
  Matrix x(1, 2);
  CHECK_THROWS_WITH_AS(bn.forward(x, Mode::Train, nullptr),
                       "BatchNorm needs a batch of >= 2 to train",
                       std::invalid_argument);
}

TEST_CASE("batch norm gradients match finite differences") {
  Rng rng(6);
  BatchNorm bn(3);
  const Matrix x = random_matrix(8, 3, rng, -2.0, 2.0);
  // scale/shift away from the identity so the test means something
  for (double& g : bn.gamma.value) g = rng.uniform(0.5, 1.5);
  for (double& b : bn.beta.value) b = rng.uniform(-0.5, 0.5);
  fd_param_check(bn, x, 1e-6);
  fd_input_check(bn, x, 1e-6);
}

TEST_CASE("running stats track the unbiased batch variance") {
  BatchNorm bn(1);
  Matrix x(4, 1);
  x(0, 0) = 1.0;
  x(1, 0) = 2.0;
  x(2, 0) = 3.0;
  x(3, 0) = 4.0;  // mean 2.5, unbiased var 5/3
  bn.forward(x, Mode::Train, nullptr);
  CHECK(bn.running_mean[0] == doctest::Approx(0.1 * 2.5));
  CHECK(bn.running_var[0] == doctest::Approx(0.9 + 0.1 * 5.0 / 3.0));
}

TEST_CASE("relu and tanh backward match finite differences") {
  Rng rng(7);
  ReLU relu;
  Tanh tanh_l;
  const Matrix x = random_matrix(6, 4, rng, -2.0, 2.0);
  fd_input_check(relu, x, 1e-6);
  fd_input_check(tanh_l, x, 1e-7);
}

TEST_CASE("sine layer applies sin(omega0 x) and keeps the argument") {
  Sine sine(30.0);
  Matrix x(1, 2);
  x(0, 0) = 0.05;
  x(0, 1) = -0.02;
  const Matrix y = sine.forward(x, Mode::Train, nullptr);
  CHECK(y(0, 0) == doctest::Approx(std::sin(1.5)));
  CHECK(y(0, 1) == doctest::Approx(std::sin(-0.6)));
  CHECK(sine.last_arg(0, 0) == doctest::Approx(1.5));
  Rng rng(8);
  const Matrix z = random_matrix(5, 3, rng, -0.1, 0.1);
  fd_input_check(sine, z, 1e-5);
}

TEST_CASE("fourier features at zero are all cosines") {
  Rng rng(9);
  RandomFourier rff(1, 5, 10.0, rng);
  Matrix x(1, 1);
  x(0, 0) = 0.0;
  const Matrix y = rff.forward(x, Mode::Eval, nullptr);
  REQUIRE(y.cols == 10);
  for (int f = 0; f < 5; ++f) {
    CHECK(y(0, f) == doctest::Approx(1.0));       // cos(0)
    CHECK(y(0, 5 + f) == doctest::Approx(0.0));   // sin(0)
  }
}

TEST_CASE("fourier feature pairs live on the unit circle") {
  Rng rng(10);
  RandomFourier rff(2, 4, 10.0, rng);
  const Matrix x = random_matrix(6, 2, rng);
  const Matrix y = rff.forward(x, Mode::Eval, nullptr);
  for (size_t r = 0; r < 6; ++r)
    for (int f = 0; f < 4; ++f)
      CHECK(y(r, f) * y(r, f) + y(r, 4 + f) * y(r, 4 + f) ==
            doctest::Approx(1.0).epsilon(1e-12));
  fd_input_check(rff, x, 1e-5);
}

TEST_CASE("quantum layer forward equals the bare circuit per row") {
  Rng rng(11);
  CircuitSpec spec = CircuitSpec::grouped(2, 2);
  spec.reuploads = 2;
  QuantumLayer layer(spec, rng, 0);
  const Matrix x = random_matrix(5, 2, rng);
  const Matrix y = layer.forward(x, Mode::Eval, nullptr);
  const std::vector<ProgramOp> prog = build_program(spec);
  for (size_t r = 0; r < 5; ++r) {
    const auto want =
        circuit_forward(spec, prog, layer.theta.value, &x.data[r * 2]);
    for (size_t m = 0; m < want.size(); ++m)
      CHECK(y(r, m) == doctest::Approx(want[m]).epsilon(1e-14));
  }
}

TEST_CASE("quantum layer gradients match finite differences") {
  Rng rng(12);
  CircuitSpec spec = CircuitSpec::one_per_wire(2);
  spec.reuploads = 2;
  QuantumLayer layer(spec, rng, 0);
  const Matrix x = random_matrix(3, 2, rng);
  fd_param_check(layer, x, 1e-7);
  fd_input_check(layer, x, 1e-7);
}

TEST_CASE("quantum layer backward needs a train forward first") {
  Rng rng(13);
  QuantumLayer layer(CircuitSpec::one_per_wire(1), rng, 0);
  Matrix x(2, 1);
  layer.forward(x, Mode::Eval, nullptr);
  Matrix dout(2, 1);
  CHECK_THROWS(layer.backward(dout));
}

TEST_CASE("quantum eval noise is per-row deterministic") {
  Rng rng(14);
  CircuitSpec spec = CircuitSpec::one_per_wire(2);
  spec.noise_bound = 0.1;
  QuantumLayer layer(spec, rng, 0);
  const Matrix x = random_matrix(4, 2, rng);
  Rng n1(99), n2(99);
  const Matrix a = layer.forward(x, Mode::Eval, &n1);
  const Matrix b = layer.forward(x, Mode::Eval, &n2);
  for (size_t i = 0; i < a.data.size(); ++i) CHECK(a.data[i] == b.data[i]);
  // swapping two rows must swap their noise, not reuse stream position
  Matrix xs = x;
  for (int c = 0; c < 2; ++c) std::swap(xs(0, c), xs(1, c));
  Rng n3(99);
  const Matrix s = layer.forward(xs, Mode::Eval, &n3);
  // row 2+ unaffected by the swap
  for (int c = 0; c < 2; ++c)
    CHECK(s(2, c) == doctest::Approx(a(2, c)).epsilon(1e-14));
  // train mode ignores the noise rng entirely
  Rng n4(99);
  const Matrix t = layer.forward(x, Mode::Train, &n4);
  CircuitSpec clean = spec;
  clean.noise_bound = 0.0;
  const std::vector<ProgramOp> prog = build_program(clean);
  const auto want =
      circuit_forward(clean, prog, layer.theta.value, &x.data[0]);
  CHECK(t(0, 0) == doctest::Approx(want[0]).epsilon(1e-14));
}

TEST_CASE("stack errors name the offending layer") {
  Rng rng(15);
  LayerStack stack;
  stack.layers.push_back(std::make_unique<Linear>(2, 3, rng));
  stack.layers.push_back(std::make_unique<BatchNorm>(3));
  Matrix x(1, 2);  // batch of one: the batch norm must complain
  try {
    stack.forward(x, Mode::Train, nullptr);
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    CHECK(what.find("layer 1") != std::string::npos);
    CHECK(what.find("BatchNorm") != std::string::npos);
  }
}

TEST_CASE("stack backward chains through every layer") {
  Rng rng(16);
  LayerStack stack;
  stack.layers.push_back(std::make_unique<Linear>(2, 4, rng));
  stack.layers.push_back(std::make_unique<Tanh>());
  stack.layers.push_back(std::make_unique<Linear>(4, 1, rng));
  const Matrix x = random_matrix(6, 2, rng);
  Matrix target = random_matrix(6, 1, rng);
  const Matrix pred = stack.forward(x, Mode::Train, nullptr);
  stack.zero_grads();
  stack.backward(mse_grad(pred, target));

  const double eps = 1e-6;
  for (ParamBlock* p : stack.params())
    for (size_t i = 0; i < p->value.size(); ++i) {
      const double keep = p->value[i];
      p->value[i] = keep + eps;
      const double fp = mse(stack.forward(x, Mode::Train, nullptr), target);
      p->value[i] = keep - eps;
      const double fm = mse(stack.forward(x, Mode::Train, nullptr), target);
      p->value[i] = keep;
      CHECK(p->grad[i] ==
            doctest::Approx((fp - fm) / (2.0 * eps)).epsilon(1e-4));
    }
}

TEST_CASE("mse averages over rows and sums over columns") {
  Matrix pred(2, 1), target(2, 1);
  pred(0, 0) = 1.0;
  pred(1, 0) = 2.0;
  CHECK(mse(pred, target) == doctest::Approx(2.5));
  Matrix p2(2, 2), t2(2, 2);
  p2(0, 0) = 1.0;
  p2(0, 1) = 1.0;
  CHECK(mse(p2, t2) == doctest::Approx(1.0));  // (1+1)/2 rows
  Matrix bad(3, 1);
  CHECK_THROWS(mse(pred, bad));
  // gradient of the same quantity
  const Matrix g = mse_grad(pred, target);
  CHECK(g(0, 0) == doctest::Approx(1.0));   // 2*1/2
  CHECK(g(1, 0) == doctest::Approx(2.0));
}

TEST_CASE("adam's first step moves by about lr in the gradient direction") {
  ParamBlock p("p", 3);
  p.value = {1.0, 1.0, 1.0};
  p.grad = {0.4, -2.0, 1e-3};
  Adam opt;
  std::vector<ParamBlock*> blocks = {&p};
  opt.init(blocks);
  opt.step(blocks, 0.01, 0.0);
  CHECK(p.value[0] == doctest::Approx(1.0 - 0.01).epsilon(1e-4));
  CHECK(p.value[1] == doctest::Approx(1.0 + 0.01).epsilon(1e-4));
  CHECK(p.value[2] == doctest::Approx(1.0 - 0.01).epsilon(1e-2));
}

TEST_CASE("adam uses the quantum rate for quantum blocks") {
  ParamBlock c("classical", 1), q("theta", 1, true);
  c.grad = {1.0};
  q.grad = {1.0};
  Adam opt;
  std::vector<ParamBlock*> blocks = {&c, &q};
  opt.init(blocks);
  opt.step(blocks, 0.001, 0.01);
  CHECK(c.value[0] == doctest::Approx(-0.001).epsilon(1e-4));
  CHECK(q.value[0] == doctest::Approx(-0.01).epsilon(1e-4));
}

TEST_CASE("adam rejects non-finite gradients by block name") {
  ParamBlock p("weight", 2);
  p.grad = {0.0, std::nan("")};
  Adam opt;
  std::vector<ParamBlock*> blocks = {&p};
  opt.init(blocks);
  try {
    opt.step(blocks, 0.01, 0.01);
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    CHECK(what.find("weight") != std::string::npos);
  }
}

TEST_CASE("a small mlp fits one period of a sine") {
  Rng rng(20);
  Rng r0 = rng.split("l0"), r1 = rng.split("l1"), r2 = rng.split("l2");
  LayerStack stack;
  stack.layers.push_back(std::make_unique<Linear>(1, 16, r0));
  stack.layers.push_back(std::make_unique<Tanh>());
  stack.layers.push_back(std::make_unique<Linear>(16, 16, r1));
  stack.layers.push_back(std::make_unique<Tanh>());
  stack.layers.push_back(std::make_unique<Linear>(16, 1, r2));

  const int n = 64;
  Matrix x(n, 1), y(n, 1);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = -1.0 + 2.0 * double(i) / double(n);
    y(i, 0) = std::sin(2.0 * pi * x(i, 0));
  }
  Adam opt;
  opt.init(stack.params());
  std::vector<double> losses;
  for (int step = 0; step < 51; ++step) {
    const Matrix pred = stack.forward(x, Mode::Train, nullptr);
    losses.push_back(mse(pred, y));
    stack.zero_grads();
    stack.backward(mse_grad(pred, y));
    opt.step(stack.params(), 1e-3, 1e-2);
  }
  int decreasing = 0;
  for (size_t i = 1; i < losses.size(); ++i)
    if (losses[i] < losses[i - 1]) ++decreasing;
  CHECK(decreasing >= 45);
  CHECK(losses.back() < losses.front());
}
