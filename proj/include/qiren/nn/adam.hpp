#pragma once
#include <vector>

#include "qiren/nn/layers.hpp"

namespace qiren {

// Adam with bias correction. Blocks flagged as quantum step with their own
// learning rate (circuit angles live on a 2*pi scale and want bigger steps).
struct Adam {
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

  void init(const std::vector<ParamBlock*>& blocks);
  void step(const std::vector<ParamBlock*>& blocks, double lr_classical,
            double lr_quantum);

  struct Slot {
    std::vector<double> m, v;
  };
  std::vector<Slot> slots;
  long long t = 0;
};

}  // namespace qiren
