#pragma once
#include <vector>

#include "qiren/model/model.hpp"

namespace qiren {

struct GridPrediction {
  int width = 0, height = 0;
  std::vector<double> values;  // row-major

  double& at(int r, int c) { return values[size_t(r) * width + c]; }
  double at(int r, int c) const { return values[size_t(r) * width + c]; }
};

// Evaluates a coordinate network on a factor-times-denser pixel-center grid.
// factor 1 reproduces the training grid exactly. Needs a 2-D input model.
GridPrediction superresolve(LayerStack& model, const ModelConfig& cfg,
                            int base_w, int base_h, int factor,
                            Rng* noise_rng = nullptr);

// Classical resampling baselines. Output pixel r looks up the source at
// u = (r + 0.5) / factor - 0.5, which keeps pixel centers aligned. Linear
// variants extrapolate past the first/last center instead of clamping, so
// an exact ramp stays an exact ramp.
std::vector<double> interp_nearest_1d(const std::vector<double>& src,
                                      int factor);
std::vector<double> interp_linear_1d(const std::vector<double>& src,
                                     int factor);
GridPrediction interp_nearest_2d(const GridPrediction& src, int factor);
GridPrediction interp_bilinear_2d(const GridPrediction& src, int factor);

double grid_mse(const GridPrediction& a, const GridPrediction& b);

}  // namespace qiren
