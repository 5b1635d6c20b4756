#include "qiren/model/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qiren {

std::string family_name(Family f) {
  switch (f) {
    case Family::Qiren: return "qiren";
    case Family::PureQuantum: return "pure_quantum";
    case Family::Relu: return "relu";
    case Family::Tanh: return "tanh";
    case Family::ReluRff: return "relu_rff";
    case Family::Siren: return "siren";
  }
  throw std::logic_error("unknown family");
}

Family family_from_name(const std::string& s) {
  if (s == "qiren") return Family::Qiren;
  if (s == "pure_quantum") return Family::PureQuantum;
  if (s == "relu") return Family::Relu;
  if (s == "tanh") return Family::Tanh;
  if (s == "relu_rff") return Family::ReluRff;
  if (s == "siren") return Family::Siren;
  throw std::invalid_argument("unknown model family: " + s);
}

ModelConfig ModelConfig::defaults(Family f, int in_dim, int out_dim) {
  ModelConfig c;
  c.family = f;
  c.in_dim = in_dim;
  c.out_dim = out_dim;
  switch (f) {
    case Family::Qiren:
      c.hidden = 8;
      c.depth = 3;
      c.qubits = 8;
      c.reuploads = 3;
      c.blocks = 2;
      break;
    case Family::PureQuantum:
      c.qubits = 8;
      c.reuploads = 3;
      c.blocks = 1;
      c.hidden = 8;
      c.depth = 1;
      break;
    case Family::Relu:
    case Family::Tanh:
    case Family::ReluRff:
      c.hidden = 10;
      c.depth = 6;
      break;
    case Family::Siren:
      c.hidden = 10;
      c.depth = 6;
      c.batchnorm = false;
      break;
  }
  return c;
}

void ModelConfig::validate() const {
  if (in_dim < 1 || out_dim < 1) throw std::invalid_argument("bad model dims");
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (hidden < 1) throw std::invalid_argument("hidden must be >= 1");
  if (qubits < 1) throw std::invalid_argument("qubits must be >= 1");
  if (reuploads < 1 || blocks < 1)
    throw std::invalid_argument("reuploads/blocks must be >= 1");
  if (noise_bound < 0.0) throw std::invalid_argument("noise_bound must be >= 0");
  if (family == Family::Qiren && hidden != qubits)
    throw std::invalid_argument("hybrid blocks need hidden == qubits");
  if (family == Family::PureQuantum && out_dim > qubits)
    throw std::invalid_argument("pure circuit cannot read more wires than it has");
  if (family == Family::ReluRff && hidden != 2 * rff_freqs)
    throw std::invalid_argument("random-feature width must equal 2*rff_freqs");
}

size_t count_params(const ModelConfig& cfg) {
  cfg.validate();
  auto linear = [](int in, int out) { return size_t(in) * out + size_t(out); };
  const size_t circ =
      size_t(cfg.reuploads) * cfg.blocks * cfg.qubits * 3;
  switch (cfg.family) {
    case Family::Qiren: {
      size_t total = 0;
      for (int l = 0; l < cfg.depth; ++l) {
        total += linear(l == 0 ? cfg.in_dim : cfg.hidden, cfg.hidden);
        if (cfg.batchnorm) total += 2 * size_t(cfg.hidden);
        total += circ;
      }
      return total + linear(cfg.hidden, cfg.out_dim);
    }
    case Family::PureQuantum:
      return circ;
    case Family::Relu:
    case Family::Tanh: {
      size_t total = linear(cfg.in_dim, cfg.hidden);
      if (cfg.batchnorm) total += 2 * size_t(cfg.hidden);
      for (int l = 0; l < cfg.depth; ++l) {
        total += linear(cfg.hidden, cfg.hidden);
        if (cfg.batchnorm) total += 2 * size_t(cfg.hidden);
      }
      return total + linear(cfg.hidden, cfg.out_dim);
    }
    case Family::ReluRff: {
      size_t total = 0;  // the random projection is frozen
      for (int l = 0; l < cfg.depth; ++l) {
        total += linear(cfg.hidden, cfg.hidden);
        if (cfg.batchnorm) total += 2 * size_t(cfg.hidden);
      }
      return total + linear(cfg.hidden, cfg.out_dim);
    }
    case Family::Siren: {
      size_t total = linear(cfg.in_dim, cfg.hidden);
      for (int l = 0; l < cfg.depth; ++l) total += linear(cfg.hidden, cfg.hidden);
      return total + linear(cfg.hidden, cfg.out_dim);
    }
  }
  throw std::logic_error("unknown family");
}

double memory_saving_pct(size_t params, size_t dataset_scalars) {
  if (dataset_scalars == 0) throw std::invalid_argument("empty dataset");
  return 100.0 * (1.0 - double(params) / double(dataset_scalars));
}

static CircuitSpec hybrid_circuit(const ModelConfig& cfg) {
  CircuitSpec s = CircuitSpec::one_per_wire(cfg.qubits);
  s.reuploads = cfg.reuploads;
  s.blocks = cfg.blocks;
  s.entangler = cfg.entangler;
  s.noise_bound = cfg.noise_bound;
  return s;  // default observables: <Z_q> on every wire
}

LayerStack build_model(const ModelConfig& cfg, Rng& rng) {
  cfg.validate();
  LayerStack stack;
  switch (cfg.family) {
    case Family::Qiren: {
      int qid = 0;
      for (int l = 0; l < cfg.depth; ++l) {
        Rng lr = rng.split("linear" + std::to_string(l));
        stack.layers.push_back(std::make_unique<Linear>(
            l == 0 ? cfg.in_dim : cfg.hidden, cfg.hidden, lr));
        if (cfg.batchnorm)
          stack.layers.push_back(std::make_unique<BatchNorm>(cfg.hidden));
        Rng qr = rng.split("circuit" + std::to_string(l));
        stack.layers.push_back(
            std::make_unique<QuantumLayer>(hybrid_circuit(cfg), qr, qid++));
      }
      Rng hr = rng.split("head");
      stack.layers.push_back(
          std::make_unique<Linear>(cfg.hidden, cfg.out_dim, hr));
      break;
    }
    case Family::PureQuantum: {
      CircuitSpec s = CircuitSpec::cyclic(cfg.qubits, cfg.in_dim);
      s.reuploads = cfg.reuploads;
      s.blocks = cfg.blocks;
      s.entangler = cfg.entangler;
      s.noise_bound = cfg.noise_bound;
      s.observables.clear();
      for (int m = 0; m < cfg.out_dim; ++m)
        s.observables.push_back(Observable::z(m));
      Rng qr = rng.split("circuit0");
      stack.layers.push_back(std::make_unique<QuantumLayer>(s, qr, 0));
      break;
    }
    case Family::Relu:
    case Family::Tanh: {
      auto act = [&]() -> std::unique_ptr<Layer> {
        if (cfg.family == Family::Relu) return std::make_unique<ReLU>();
        return std::make_unique<Tanh>();
      };
      Rng ir = rng.split("linear_in");
      stack.layers.push_back(
          std::make_unique<Linear>(cfg.in_dim, cfg.hidden, ir));
      if (cfg.batchnorm)
        stack.layers.push_back(std::make_unique<BatchNorm>(cfg.hidden));
      stack.layers.push_back(act());
      for (int l = 0; l < cfg.depth; ++l) {
        Rng lr = rng.split("linear" + std::to_string(l));
        stack.layers.push_back(
            std::make_unique<Linear>(cfg.hidden, cfg.hidden, lr));
        if (cfg.batchnorm)
          stack.layers.push_back(std::make_unique<BatchNorm>(cfg.hidden));
        stack.layers.push_back(act());
      }
      Rng hr = rng.split("head");
      stack.layers.push_back(
          std::make_unique<Linear>(cfg.hidden, cfg.out_dim, hr));
      break;
    }
    case Family::ReluRff: {
      Rng fr = rng.split("rff");
      stack.layers.push_back(std::make_unique<RandomFourier>(
          cfg.in_dim, cfg.rff_freqs, cfg.rff_sigma, fr));
      for (int l = 0; l < cfg.depth; ++l) {
        Rng lr = rng.split("linear" + std::to_string(l));
        stack.layers.push_back(
            std::make_unique<Linear>(cfg.hidden, cfg.hidden, lr));
        if (cfg.batchnorm)
          stack.layers.push_back(std::make_unique<BatchNorm>(cfg.hidden));
        stack.layers.push_back(std::make_unique<ReLU>());
      }
      Rng hr = rng.split("head");
      stack.layers.push_back(
          std::make_unique<Linear>(cfg.hidden, cfg.out_dim, hr));
      break;
    }
    case Family::Siren: {
      // first layer spreads the input across frequencies; later layers are
      // scaled down by omega0 (weights and biases alike) so sine arguments
      // stay in the principal branch
      Rng ir = rng.split("linear_in");
      const double fb = 1.0 / double(cfg.in_dim);
      stack.layers.push_back(
          std::make_unique<Linear>(cfg.in_dim, cfg.hidden, ir, fb, fb));
      stack.layers.push_back(std::make_unique<Sine>(cfg.omega0));
      const double hb = std::sqrt(6.0 / double(cfg.hidden)) / cfg.omega0;
      for (int l = 0; l < cfg.depth; ++l) {
        Rng lr = rng.split("linear" + std::to_string(l));
        stack.layers.push_back(
            std::make_unique<Linear>(cfg.hidden, cfg.hidden, lr, hb, hb));
        stack.layers.push_back(std::make_unique<Sine>(cfg.omega0));
      }
      Rng hr = rng.split("head");
      stack.layers.push_back(
          std::make_unique<Linear>(cfg.hidden, cfg.out_dim, hr, hb, hb));
      break;
    }
  }
  return stack;
}

double siren_arg_within_pi_fraction(LayerStack& stack, const Matrix& sample) {
  stack.forward(sample, Mode::Eval, nullptr);
  double worst = 1.0;
  bool first = true;
  bool any = false;
  for (auto& l : stack.layers) {
    auto* s = dynamic_cast<Sine*>(l.get());
    if (!s) continue;
    if (first) {  // frequency lift, exempt
      first = false;
      continue;
    }
    any = true;
    size_t in = 0;
    for (double a : s->last_arg.data)
      if (std::abs(a) <= std::numbers::pi) ++in;
    worst = std::min(worst, double(in) / double(s->last_arg.data.size()));
  }
  if (!any) throw std::invalid_argument("model has no hidden sine layers");
  return worst;
}

}  // namespace qiren
