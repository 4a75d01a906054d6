#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wii/nn/tensor.hpp"

namespace wii::nn {

enum class LayerKind : std::uint8_t { conv = 1, relu = 2, dropout = 3, flatten = 4, dense = 5, softmax = 6 };

struct LayerSpec {
  LayerKind kind = LayerKind::relu;
  int units = 0;  // feature maps (conv) or outputs (dense)
  int kh = 0;
  int kw = 0;
  double p = 0.0;  // dropout rate

  static LayerSpec conv(int maps, int kh, int kw) { return {LayerKind::conv, maps, kh, kw, 0.0}; }
  static LayerSpec relu() { return {LayerKind::relu}; }
  static LayerSpec dropout(double p) { return {LayerKind::dropout, 0, 0, 0, p}; }
  static LayerSpec flatten() { return {LayerKind::flatten}; }
  static LayerSpec dense(int out) { return {LayerKind::dense, out}; }
  static LayerSpec softmax() { return {LayerKind::softmax}; }

  bool operator==(const LayerSpec&) const = default;
};

struct ArchSpec {
  std::vector<LayerSpec> layers;
  Shape input;
  int num_classes = 0;

  // Output shape of every layer; throws a shape error on an inconsistent stack.
  std::vector<Shape> shapes() const;
  int flatten_dim() const;
  std::size_t parameter_count() const;
  std::string describe() const;

  bool operator==(const ArchSpec&) const = default;
};

// Conv(256,3x1) -> Conv(256,3x2) -> Dense(1024) -> Dense(K) with ReLU between
// layers and dropout after conv2 and dense1. The narrow-band variant also
// drops out after conv1.
ArchSpec proposed_cnn(int input_len, int num_classes, double dropout_p = 0.6, bool dropout_after_conv1 = false);

// Conv(64,3x1) -> Conv(1024,3x2) -> Dense(128) -> Dense(K), same dropout placement.
ArchSpec baseline_cnn(int input_len, int num_classes, double dropout_p = 0.6);

}  // namespace wii::nn
