#pragma once
#include <memory>
#include <string>
#include <vector>

#include "qiren/circuit/reupload.hpp"
#include "qiren/matrix.hpp"
#include "qiren/rng.hpp"

namespace qiren {

enum class Mode { Train, Eval };

// One flat trainable tensor plus its gradient accumulator. Circuit angles
// are tagged so the optimizer can give them their own learning rate.
struct ParamBlock {
  std::string name;
  std::vector<double> value;
  std::vector<double> grad;
  bool quantum = false;

  explicit ParamBlock(std::string n, size_t size, bool q = false)
      : name(std::move(n)), value(size, 0.0), grad(size, 0.0), quantum(q) {}
  void zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }
};

// Batch-major layout everywhere: rows = samples, cols = features.
// Train-mode forwards cache whatever backward needs; backward returns the
// loss gradient wrt the layer input and accumulates into ParamBlock::grad.
struct Layer {
  virtual ~Layer() = default;
  virtual Matrix forward(const Matrix& x, Mode mode, Rng* noise_rng) = 0;
  virtual Matrix backward(const Matrix& dout) = 0;
  virtual std::vector<ParamBlock*> params() { return {}; }
  // Non-trainable vectors that still belong in a checkpoint (running stats).
  virtual std::vector<std::vector<double>*> state() { return {}; }
  virtual const char* kind() const = 0;
};

struct Linear : Layer {
  int in_dim, out_dim;
  ParamBlock w;  // out_dim x in_dim, row-major
  ParamBlock b;  // out_dim
  Matrix last_x;

  // Weights U(-w_bound, w_bound), biases U(-b_bound, b_bound); the default
  // bound 1/sqrt(in_dim) matches the usual torch initialisation.
  Linear(int in, int out, Rng& rng, double w_bound = -1.0,
         double b_bound = -1.0);
  Matrix forward(const Matrix& x, Mode mode, Rng*) override;
  Matrix backward(const Matrix& dout) override;
  std::vector<ParamBlock*> params() override { return {&w, &b}; }
  const char* kind() const override { return "Linear"; }
};

struct BatchNorm : Layer {
  int dim;
  double momentum = 0.1, eps = 1e-5;
  ParamBlock gamma, beta;
  std::vector<double> running_mean, running_var;
  // caches from the last train-mode forward
  Matrix last_xhat;
  std::vector<double> last_mean, last_inv_std;

  explicit BatchNorm(int d);
  Matrix forward(const Matrix& x, Mode mode, Rng*) override;
  Matrix backward(const Matrix& dout) override;
  std::vector<ParamBlock*> params() override { return {&gamma, &beta}; }
  std::vector<std::vector<double>*> state() override {
    return {&running_mean, &running_var};
  }
  const char* kind() const override { return "BatchNorm"; }
};

struct ReLU : Layer {
  Matrix last_x;
  Matrix forward(const Matrix& x, Mode mode, Rng*) override;
  Matrix backward(const Matrix& dout) override;
  const char* kind() const override { return "ReLU"; }
};

struct Tanh : Layer {
  Matrix last_y;
  Matrix forward(const Matrix& x, Mode mode, Rng*) override;
  Matrix backward(const Matrix& dout) override;
  const char* kind() const override { return "Tanh"; }
};

// y = sin(omega0 * z). Keeps the last sine argument around so the
// initialisation check can look at the distribution hitting the sine.
struct Sine : Layer {
  double omega0;
  Matrix last_arg;
  explicit Sine(double w0 = 30.0) : omega0(w0) {}
  Matrix forward(const Matrix& x, Mode mode, Rng*) override;
  Matrix backward(const Matrix& dout) override;
  const char* kind() const override { return "Sine"; }
};

// Random Fourier feature lift: x -> [cos(2 pi M x), sin(2 pi M x)] with a
// frozen projection M ~ N(0, sigma^2). No trainable parameters.
struct RandomFourier : Layer {
  int in_dim, num_freqs;
  Matrix proj;  // num_freqs x in_dim
  Matrix last_x;
  RandomFourier(int in, int m, double sigma, Rng& rng);
  Matrix forward(const Matrix& x, Mode mode, Rng*) override;
  Matrix backward(const Matrix& dout) override;
  const char* kind() const override { return "RandomFourier"; }
};

struct QuantumLayer : Layer {
  CircuitSpec spec;
  std::vector<ProgramOp> program;
  ParamBlock theta;
  int layer_id = 0;  // decorrelates noise streams between quantum layers
  Matrix last_x;
  std::vector<StateVector> last_states;  // per-row final states (train mode)

  QuantumLayer(CircuitSpec s, Rng& rng, int id = 0);
  Matrix forward(const Matrix& x, Mode mode, Rng* noise_rng) override;
  Matrix backward(const Matrix& dout) override;
  std::vector<ParamBlock*> params() override { return {&theta}; }
  const char* kind() const override { return "Quantum"; }
};

struct LayerStack {
  std::vector<std::unique_ptr<Layer>> layers;

  Matrix forward(const Matrix& x, Mode mode, Rng* noise_rng = nullptr);
  Matrix backward(const Matrix& dout);
  std::vector<ParamBlock*> params();
  std::vector<std::vector<double>*> state();
  void zero_grads();
  size_t num_params();
};

// Mean over rows of the squared error summed over columns.
double mse(const Matrix& pred, const Matrix& target);
Matrix mse_grad(const Matrix& pred, const Matrix& target);

}  // namespace qiren
