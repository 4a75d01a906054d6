#pragma once

#include <span>

#include "wii/nn/tensor.hpp"

namespace wii::nn {

// Numerically stable row-wise softmax (max-shifted).
template <typename T>
Matrix<T> softmax_rows(const Matrix<T>& logits);

// -log(max(pred[label], 1e-12)). Throws a label error when label >= K.
template <typename T>
double cross_entropy(std::span<const T> pred, int label);

template <typename T>
struct BatchLoss {
  double mean_loss = 0.0;
  Matrix<T> grad_logits;  // (softmax - onehot) / batch
  Matrix<T> probs;
};

template <typename T>
BatchLoss<T> softmax_cross_entropy(const Matrix<T>& logits, std::span<const int> labels);

}  // namespace wii::nn
