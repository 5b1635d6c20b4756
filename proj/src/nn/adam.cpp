#include "qiren/nn/adam.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qiren {

void Adam::init(const std::vector<ParamBlock*>& blocks) {
  slots.clear();
  slots.reserve(blocks.size());
  for (ParamBlock* b : blocks)
    slots.push_back({std::vector<double>(b->value.size(), 0.0),
                     std::vector<double>(b->value.size(), 0.0)});
  t = 0;
}

void Adam::step(const std::vector<ParamBlock*>& blocks, double lr_classical,
                double lr_quantum) {
  if (slots.size() != blocks.size())
    throw std::logic_error("Adam::step before init");
  ++t;
  const double bc1 = 1.0 - std::pow(beta1, double(t));
  const double bc2 = 1.0 - std::pow(beta2, double(t));
  for (size_t k = 0; k < blocks.size(); ++k) {
    ParamBlock& b = *blocks[k];
    const double lr = b.quantum ? lr_quantum : lr_classical;
    Slot& s = slots[k];
    for (size_t i = 0; i < b.value.size(); ++i) {
      const double g = b.grad[i];
      if (!std::isfinite(g))
        throw std::runtime_error("non-finite gradient in block '" + b.name +
                                 "' at index " + std::to_string(i));
      s.m[i] = beta1 * s.m[i] + (1.0 - beta1) * g;
      s.v[i] = beta2 * s.v[i] + (1.0 - beta2) * g * g;
      const double mhat = s.m[i] / bc1;
      const double vhat = s.v[i] / bc2;
      b.value[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
}

}  // namespace qiren
