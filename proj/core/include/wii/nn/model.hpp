#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "wii/nn/adam.hpp"
#include "wii/nn/arch.hpp"
#include "wii/nn/layers.hpp"

namespace wii::nn {

// Layer stack with parameters and optimizer state. class_ids maps output
// index -> catalog class id (ascending).
template <typename T>
class Model {
 public:
  // He-uniform weights, zero biases, deterministic in seed.
  Model(ArchSpec arch, std::uint64_t seed, AdamConfig adam = {});

  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;
  Model(Model&&) noexcept = default;
  Model& operator=(Model&&) noexcept = default;

  const ArchSpec& arch() const { return arch_; }
  std::size_t parameter_count() const;
  int input_size() const { return arch_.input.size(); }
  int num_classes() const { return arch_.num_classes; }

  std::vector<int> class_ids;

  // Training forward pass up to (excluding) the softmax; keeps activations
  // and caches for backward().
  const Matrix<T>& forward_logits(const Matrix<T>& batch, Mode mode, Rng& rng);

  // Backpropagates dL/dlogits through the stack, filling parameter grads.
  void backward(const Matrix<T>& grad_logits);

  // Eval-mode logits/posteriors without touching the training workspace.
  Matrix<T> logits(const Matrix<T>& batch) const;
  Matrix<T> predict(const Matrix<T>& batch) const;

  void adam_step();
  Adam<T>& optimizer() { return adam_; }
  const Adam<T>& optimizer() const { return adam_; }

  std::vector<Param<T>*> params();
  std::vector<const Param<T>*> params() const;

  std::vector<Matrix<T>> snapshot() const;
  void restore(const std::vector<Matrix<T>>& values);

  const std::vector<std::unique_ptr<Layer<T>>>& layers() const { return layers_; }
  // Pre-activation inputs seen by each ReLU during the last forward_logits.
  std::vector<const Matrix<T>*> relu_inputs() const;

 private:
  std::size_t trainable_depth() const;

  ArchSpec arch_;
  std::vector<std::unique_ptr<Layer<T>>> layers_;
  std::vector<Matrix<T>> acts_;
  std::vector<Matrix<T>> caches_;
  std::vector<Matrix<T>> grads_;
  Adam<T> adam_;
};

template <typename T>
Model<T> build_model(const ArchSpec& arch, std::uint64_t seed, AdamConfig adam = {}) {
  return Model<T>(arch, seed, adam);
}

extern template class Model<float>;
extern template class Model<double>;

}  // namespace wii::nn
