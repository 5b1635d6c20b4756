#include "qiren/task/superres.hpp"

#include <cmath>
#include <stdexcept>

#include "qiren/data/dataset.hpp"

namespace qiren {

GridPrediction superresolve(LayerStack& model, const ModelConfig& cfg,
                            int base_w, int base_h, int factor,
                            Rng* noise_rng) {
  if (cfg.in_dim != 2)
    throw std::invalid_argument("superresolution needs a 2-D coordinate model");
  if (factor < 1) throw std::invalid_argument("factor must be >= 1");
  if (base_w < 1 || base_h < 1)
    throw std::invalid_argument("grid must be at least 1x1");
  const int w = base_w * factor, h = base_h * factor;
  Matrix coords(size_t(w) * h, 2);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const size_t i = size_t(r) * w + c;
      coords(i, 0) = pixel_center_coord(r, h);
      coords(i, 1) = pixel_center_coord(c, w);
    }
  const Matrix pred = model.forward(coords, Mode::Eval, noise_rng);
  GridPrediction out;
  out.width = w;
  out.height = h;
  out.values.resize(size_t(w) * h);
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = pred(i, 0);
  return out;
}

// source index of output pixel r under pixel-center alignment
static double src_coord(int r, int factor) {
  return (double(r) + 0.5) / double(factor) - 0.5;
}

std::vector<double> interp_nearest_1d(const std::vector<double>& src,
                                      int factor) {
  if (factor < 1) throw std::invalid_argument("factor must be >= 1");
  if (src.empty()) throw std::invalid_argument("empty source");
  const int n = int(src.size());
  std::vector<double> out(size_t(n) * factor);
  for (int r = 0; r < n * factor; ++r) {
    int i = int(std::lround(src_coord(r, factor)));
    i = std::max(0, std::min(n - 1, i));
    out[size_t(r)] = src[size_t(i)];
  }
  return out;
}

std::vector<double> interp_linear_1d(const std::vector<double>& src,
                                     int factor) {
  if (factor < 1) throw std::invalid_argument("factor must be >= 1");
  if (src.empty()) throw std::invalid_argument("empty source");
  const int n = int(src.size());
  if (n == 1) return std::vector<double>(size_t(factor), src[0]);
  std::vector<double> out(size_t(n) * factor);
  for (int r = 0; r < n * factor; ++r) {
    const double u = src_coord(r, factor);
    int i0 = int(std::floor(u));
    i0 = std::max(0, std::min(n - 2, i0));
    const double t = u - double(i0);  // may leave [0,1] at the edges
    out[size_t(r)] = (1.0 - t) * src[size_t(i0)] + t * src[size_t(i0) + 1];
  }
  return out;
}

GridPrediction interp_nearest_2d(const GridPrediction& src, int factor) {
  if (factor < 1) throw std::invalid_argument("factor must be >= 1");
  GridPrediction out;
  out.width = src.width * factor;
  out.height = src.height * factor;
  out.values.resize(size_t(out.width) * out.height);
  for (int r = 0; r < out.height; ++r) {
    int sr = int(std::lround(src_coord(r, factor)));
    sr = std::max(0, std::min(src.height - 1, sr));
    for (int c = 0; c < out.width; ++c) {
      int sc = int(std::lround(src_coord(c, factor)));
      sc = std::max(0, std::min(src.width - 1, sc));
      out.at(r, c) = src.at(sr, sc);
    }
  }
  return out;
}

GridPrediction interp_bilinear_2d(const GridPrediction& src, int factor) {
  if (factor < 1) throw std::invalid_argument("factor must be >= 1");
  if (src.width < 2 || src.height < 2)
    throw std::invalid_argument("bilinear needs at least a 2x2 source");
  GridPrediction out;
  out.width = src.width * factor;
  out.height = src.height * factor;
  out.values.resize(size_t(out.width) * out.height);
  for (int r = 0; r < out.height; ++r) {
    const double v = src_coord(r, factor);
    int r0 = std::max(0, std::min(src.height - 2, int(std::floor(v))));
    const double tv = v - double(r0);
    for (int c = 0; c < out.width; ++c) {
      const double u = src_coord(c, factor);
      int c0 = std::max(0, std::min(src.width - 2, int(std::floor(u))));
      const double tu = u - double(c0);
      const double top =
          (1.0 - tu) * src.at(r0, c0) + tu * src.at(r0, c0 + 1);
      const double bot =
          (1.0 - tu) * src.at(r0 + 1, c0) + tu * src.at(r0 + 1, c0 + 1);
      out.at(r, c) = (1.0 - tv) * top + tv * bot;
    }
  }
  return out;
}

double grid_mse(const GridPrediction& a, const GridPrediction& b) {
  if (a.width != b.width || a.height != b.height)
    throw std::invalid_argument("grid_mse: shape mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return s / double(a.values.size());
}

}  // namespace qiren
