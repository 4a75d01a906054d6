#include "wii/nn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wii/error.hpp"

namespace wii::nn {

template <typename T>
Matrix<T> softmax_rows(const Matrix<T>& logits) {
  Matrix<T> out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const T peak = logits.row(r).maxCoeff();
    out.row(r) = (logits.row(r).array() - peak).exp().matrix();
    out.row(r) /= out.row(r).sum();
  }
  return out;
}

template <typename T>
double cross_entropy(std::span<const T> pred, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= pred.size()) {
    throw Error(ErrorCode::label, "label " + std::to_string(label) + " outside " + std::to_string(pred.size()) +
                                      " classes");
  }
  return -std::log(std::max(static_cast<double>(pred[static_cast<std::size_t>(label)]), 1e-12));
}

template <typename T>
BatchLoss<T> softmax_cross_entropy(const Matrix<T>& logits, std::span<const int> labels) {
  if (static_cast<std::size_t>(logits.rows()) != labels.size()) {
    throw Error(ErrorCode::shape, "batch size differs from label count");
  }
  BatchLoss<T> out;
  out.probs = softmax_rows(logits);
  out.grad_logits = out.probs;
  double total = 0.0;
  const T inv_batch = T(1) / static_cast<T>(std::max<Eigen::Index>(1, logits.rows()));
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const int label = labels[static_cast<std::size_t>(r)];
    total += cross_entropy<T>(std::span<const T>(out.probs.row(r).data(), static_cast<std::size_t>(logits.cols())),
                              label);
    out.grad_logits(r, label) -= T(1);
  }
  out.grad_logits *= inv_batch;
  out.mean_loss = logits.rows() ? total / static_cast<double>(logits.rows()) : 0.0;
  return out;
}

template Matrix<float> softmax_rows<float>(const Matrix<float>&);
template Matrix<double> softmax_rows<double>(const Matrix<double>&);
template double cross_entropy<float>(std::span<const float>, int);
template double cross_entropy<double>(std::span<const double>, int);
template BatchLoss<float> softmax_cross_entropy<float>(const Matrix<float>&, std::span<const int>);
template BatchLoss<double> softmax_cross_entropy<double>(const Matrix<double>&, std::span<const int>);

}  // namespace wii::nn
