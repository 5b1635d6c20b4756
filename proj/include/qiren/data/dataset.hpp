#pragma once
#include <string>
#include <vector>

#include "qiren/matrix.hpp"

namespace qiren {

// Coordinate/value pairs on a regular grid. 1-D signals use grid_w == n,
// grid_h == 0; images use grid_h x grid_w with rows stored row-major
// (row index varies slowest).
struct Dataset {
  Matrix x;  // n x d_in, coordinates in [-1,1]
  Matrix y;  // n x d_out
  int grid_w = 0;
  int grid_h = 0;  // 0 for 1-D signals

  size_t size() const { return y.rows; }
  size_t scalar_count() const { return y.rows * y.cols; }
  bool is_image() const { return grid_h > 0; }
};

// --- file formats ------------------------------------------------------

// PCM mono WAV, 8-bit unsigned or 16-bit signed. Returns raw sample values
// as doubles (still unnormalized).
std::vector<double> wav_read(const std::string& path);
void wav_write_16(const std::string& path, const std::vector<double>& samples,
                  int sample_rate = 8000);  // samples expected in [-1,1]

struct PgmImage {
  int width = 0, height = 0;
  int maxval = 255;
  std::vector<double> pixels;  // row-major, raw values 0..maxval
};
PgmImage pgm_read(const std::string& path);
void pgm_write(const std::string& path, int width, int height,
               const std::vector<double>& values01);  // clamped to [0,1]

// One numeric value per line; blank lines and '#' comments skipped.
std::vector<double> csv_read_column(const std::string& path);
void csv_write_column(const std::string& path,
                      const std::vector<double>& values);

// --- dataset builders ---------------------------------------------------

// n equally spaced samples out of the recording, amplitudes affinely mapped
// to [-1,1] (a constant signal maps to 0), timestamps linspace over [-1,1]
// inclusive. The recording must hold at least n samples.
Dataset sound_dataset(const std::vector<double>& samples, int n = 1000);

// Center-crop to a square multiple of 32, box-filter down to 32x32, values
// scaled to [0,1], pixel-center coordinates on [-1,1]^2 (row coord first).
Dataset image_dataset(const PgmImage& img);
Dataset image_dataset_from_grid(const std::vector<double>& values01, int side);

// Pixel-center coordinate of cell k out of s: -1 + (2k+1)/s.
double pixel_center_coord(int k, int s);

// Periodic 1-D signal laid on the half-open grid x_i = -1 + 2i/n, which
// makes DFT bins land exactly on integer frequencies.
Dataset periodic_signal_dataset(const std::vector<double>& values);

// a1*sin(2 pi f1 u) + a2*sin(2 pi f2 u) on u = i/n, scaled so max|y| = 1.
std::vector<double> two_tone_signal(int n = 256, double f1 = 3.0,
                                    double a1 = 0.8, double f2 = 17.0,
                                    double a2 = 0.2);

// Smooth synthetic grayscale image in [0,1]: a few random low-frequency
// sinusoidal bumps. Used as ground truth for interpolation comparisons.
std::vector<double> smooth_synthetic_image(int side, uint64_t seed);

// Loads by extension: .wav/.csv -> sound, .pgm -> image. The token
// "twotone" builds the synthetic two-tone benchmark signal.
Dataset load_dataset(const std::string& path_or_token, int sound_n = 1000);

}  // namespace qiren
