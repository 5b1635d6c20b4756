#include "qiren/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qiren/rng.hpp"

namespace qiren {

double pixel_center_coord(int k, int s) {
  return -1.0 + (2.0 * k + 1.0) / double(s);
}

Dataset sound_dataset(const std::vector<double>& samples, int n) {
  if (n < 1) throw std::invalid_argument("need at least one sample");
  if (samples.size() < size_t(n))
    throw std::runtime_error("recording shorter than requested sample count");
  const size_t len = samples.size();

  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) {
    const size_t idx =
        n == 1 ? 0
               : size_t(std::llround(double(i) * double(len - 1) /
                                     double(n - 1)));
    vals[i] = samples[idx];
  }
  const auto [lo_it, hi_it] = std::minmax_element(vals.begin(), vals.end());
  const double lo = *lo_it, hi = *hi_it;

  Dataset ds;
  ds.grid_w = n;
  ds.x = Matrix(size_t(n), 1);
  ds.y = Matrix(size_t(n), 1);
  for (int i = 0; i < n; ++i) {
    ds.x(size_t(i), 0) = n == 1 ? 0.0 : -1.0 + 2.0 * double(i) / double(n - 1);
    ds.y(size_t(i), 0) =
        hi > lo ? -1.0 + 2.0 * (vals[i] - lo) / (hi - lo) : 0.0;
  }
  return ds;
}

static std::vector<double> center_crop_square(const PgmImage& img, int side) {
  const int ox = (img.width - side) / 2;
  const int oy = (img.height - side) / 2;
  std::vector<double> out(size_t(side) * side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c)
      out[size_t(r) * side + c] =
          img.pixels[size_t(r + oy) * img.width + (c + ox)];
  return out;
}

Dataset image_dataset(const PgmImage& img) {
  const int short_side = std::min(img.width, img.height);
  const int side = (short_side / 32) * 32;
  if (side < 32) throw std::runtime_error("image smaller than 32x32");
  std::vector<double> crop = center_crop_square(img, side);

  const int f = side / 32;
  std::vector<double> small(32 * 32);
  for (int r = 0; r < 32; ++r)
    for (int c = 0; c < 32; ++c) {
      double s = 0.0;
      for (int dr = 0; dr < f; ++dr)
        for (int dc = 0; dc < f; ++dc)
          s += crop[size_t(r * f + dr) * side + (c * f + dc)];
      small[size_t(r) * 32 + c] = s / (double(f) * f) / double(img.maxval);
    }
  return image_dataset_from_grid(small, 32);
}

Dataset image_dataset_from_grid(const std::vector<double>& values01,
                                int side) {
  if (values01.size() != size_t(side) * side)
    throw std::invalid_argument("grid size mismatch");
  Dataset ds;
  ds.grid_w = side;
  ds.grid_h = side;
  ds.x = Matrix(values01.size(), 2);
  ds.y = Matrix(values01.size(), 1);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      const size_t i = size_t(r) * side + c;
      ds.x(i, 0) = pixel_center_coord(r, side);
      ds.x(i, 1) = pixel_center_coord(c, side);
      ds.y(i, 0) = values01[i];
    }
  return ds;
}

Dataset periodic_signal_dataset(const std::vector<double>& values) {
  const size_t n = values.size();
  if (n == 0) throw std::invalid_argument("empty signal");
  Dataset ds;
  ds.grid_w = int(n);
  ds.x = Matrix(n, 1);
  ds.y = Matrix(n, 1);
  for (size_t i = 0; i < n; ++i) {
    ds.x(i, 0) = -1.0 + 2.0 * double(i) / double(n);
    ds.y(i, 0) = values[i];
  }
  return ds;
}

std::vector<double> two_tone_signal(int n, double f1, double a1, double f2,
                                    double a2) {
  std::vector<double> y(static_cast<size_t>(n));
  double peak = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = double(i) / double(n);
    y[size_t(i)] = a1 * std::sin(2.0 * std::numbers::pi * f1 * u) +
                   a2 * std::sin(2.0 * std::numbers::pi * f2 * u);
    peak = std::max(peak, std::abs(y[size_t(i)]));
  }
  if (peak > 0.0)
    for (double& v : y) v /= peak;
  return y;
}

std::vector<double> smooth_synthetic_image(int side, uint64_t seed) {
  Rng rng(seed);
  struct Bump {
    double fx, fy, phase, amp;
  };
  std::vector<Bump> bumps(4);
  for (Bump& b : bumps) {
    b.fx = rng.uniform(0.5, 2.0);
    b.fy = rng.uniform(0.5, 2.0);
    b.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    b.amp = rng.uniform(0.1, 0.3);
  }
  std::vector<double> img(size_t(side) * side);
  double lo = 1e300, hi = -1e300;
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      const double yv = pixel_center_coord(r, side);
      const double xv = pixel_center_coord(c, side);
      double v = 0.0;
      for (const Bump& b : bumps)
        v += b.amp * std::sin(std::numbers::pi * (b.fx * xv + b.fy * yv) +
                              b.phase);
      img[size_t(r) * side + c] = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  for (double& v : img) v = hi > lo ? (v - lo) / (hi - lo) : 0.5;
  return img;
}

Dataset load_dataset(const std::string& path_or_token, int sound_n) {
  if (path_or_token == "twotone")
    return periodic_signal_dataset(two_tone_signal());
  auto ends_with = [&](const char* suf) {
    const std::string s(suf);
    return path_or_token.size() >= s.size() &&
           path_or_token.compare(path_or_token.size() - s.size(), s.size(),
                                 s) == 0;
  };
  if (ends_with(".wav")) return sound_dataset(wav_read(path_or_token), sound_n);
  if (ends_with(".csv"))
    return sound_dataset(csv_read_column(path_or_token), sound_n);
  if (ends_with(".pgm")) return image_dataset(pgm_read(path_or_token));
  throw std::runtime_error("unrecognized dataset: " + path_or_token +
                           " (expected .wav/.csv/.pgm or 'twotone')");
}

}  // namespace qiren
