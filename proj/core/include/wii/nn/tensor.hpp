#pragma once

#include <Eigen/Dense>

namespace wii::nn {

// Batch activations: one sample per row, each row the row-major flattening
// of an (length, width, channels) tensor.
template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Shape {
  int length = 0;
  int width = 0;
  int channels = 0;

  int size() const { return length * width * channels; }
  bool operator==(const Shape&) const = default;
};

enum class Mode { train, eval };

}  // namespace wii::nn
