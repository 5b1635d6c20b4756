#pragma once
#include <string>

#include "qiren/nn/layers.hpp"

namespace qiren {

enum class Family { Qiren, PureQuantum, Relu, Tanh, ReluRff, Siren };

std::string family_name(Family f);
Family family_from_name(const std::string& s);

// Everything needed to rebuild a network. `defaults` fills in the per-family
// architecture: the hybrid model is 3 blocks of (Linear -> BatchNorm ->
// circuit) on 8 qubits plus a linear head; the classical baselines are
// 7-linear MLPs of width 10 (BatchNorm variants included); the pure circuit
// is a single re-uploading circuit read out on one wire.
struct ModelConfig {
  Family family = Family::Qiren;
  int in_dim = 1;
  int out_dim = 1;
  int hidden = 8;     // feature width between blocks
  int depth = 3;      // hybrid blocks, or hidden linears for the MLPs
  int qubits = 8;
  int reuploads = 3;  // encoding repetitions L per circuit
  int blocks = 2;     // variational rounds K per repetition
  Entangler entangler = Entangler::CNOT;
  double noise_bound = 0.0;
  bool batchnorm = true;  // ablation switch for qiren/relu/tanh
  int rff_freqs = 5;
  double rff_sigma = 10.0;
  double omega0 = 30.0;

  static ModelConfig defaults(Family f, int in_dim, int out_dim = 1);
  void validate() const;
};

// Closed-form trainable parameter count; must agree with the built stack.
size_t count_params(const ModelConfig& cfg);

// How much smaller the network is than the raw signal it represents,
// in percent. Positive means the model compresses.
double memory_saving_pct(size_t params, size_t dataset_scalars);

LayerStack build_model(const ModelConfig& cfg, Rng& rng);

// Smallest per-layer fraction of sine arguments inside [-pi, pi], taken
// over every sine layer after the first (the first layer is the frequency
// lift and is allowed to exceed). Runs a forward pass on `sample`.
// A healthy initialisation keeps this near 1.
double siren_arg_within_pi_fraction(LayerStack& stack, const Matrix& sample);

}  // namespace qiren
