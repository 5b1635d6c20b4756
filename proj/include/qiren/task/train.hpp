#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qiren/data/dataset.hpp"
#include "qiren/model/model.hpp"
#include "qiren/nn/adam.hpp"

namespace qiren {

struct TrainOptions {
  int epochs = 300;
  double lr_classical = 2e-3;
  double lr_quantum = 2e-2;
  uint64_t seed = 0;
  int threads = 1;
};

// Everything a run produced, minus the weights. to_json(false) is the
// canonical form: identical runs serialise to identical bytes, so wall time
// stays out of it unless asked for.
struct TrainReport {
  std::vector<double> loss_curve;  // train-mode mse before each step
  double final_mse = 0.0;          // eval-mode mse after the last step
  double wall_seconds = 0.0;
  uint64_t seed = 0;
  ModelConfig config;
  size_t params = 0;
  double mem_saving_pct = 0.0;

  std::string to_json(bool include_wall_time = false) const;
};

// Raised when the loss or a gradient stops being finite; the epoch is the
// one that blew up (0-based).
struct TrainAbort : std::runtime_error {
  int epoch;
  TrainAbort(int e, const std::string& what)
      : std::runtime_error(what), epoch(e) {}
};

struct TrainResult {
  TrainReport report;
  LayerStack model;
  Adam opt;
};

// Full-batch Adam on the whole dataset. Deterministic for a fixed seed and
// thread count. Training is always noiseless; the configured measurement
// noise only perturbs evaluation passes.
TrainResult train_once(const ModelConfig& cfg, const Dataset& ds,
                       const TrainOptions& opt);

// Repeats train_once on seeds opt.seed .. opt.seed+count-1 and keeps the run
// with the lowest eval mse (ties go to the lowest seed).
struct SeedSweep {
  std::vector<TrainReport> reports;  // one per seed, in seed order
  size_t best_index = 0;
  TrainResult best;
};

SeedSweep train_best_of(const ModelConfig& cfg, const Dataset& ds,
                        const TrainOptions& opt, int count);

// Eval-mode mse on the dataset; applies measurement noise when the model
// carries any and a seed-derived rng is wanted.
double eval_mse(LayerStack& model, const Dataset& ds, Rng* noise_rng);

}  // namespace qiren
