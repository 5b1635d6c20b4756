#pragma once
#include <cstddef>
#include <vector>

namespace qiren {

// Row-major dense matrix of doubles; just enough for jacobians and layer
// weights.
struct Matrix {
  size_t rows = 0, cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(size_t r, size_t c) { return data[r * cols + c]; }
  double operator()(size_t r, size_t c) const { return data[r * cols + c]; }
};

}  // namespace qiren
