#include "wii/nn/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wii/error.hpp"

namespace wii::nn {

template <typename T>
Model<T>::Model(ArchSpec arch, std::uint64_t seed, AdamConfig adam) : arch_(std::move(arch)), adam_(adam) {
  const auto shapes = arch_.shapes();
  Shape in = arch_.input;
  for (std::size_t i = 0; i < arch_.layers.size(); ++i) {
    layers_.push_back(make_layer<T>(arch_.layers[i], in));
    if (layers_.back()->output_shape() != shapes[i]) throw Error(ErrorCode::shape, "layer shape mismatch");
    in = shapes[i];
  }
  class_ids.resize(static_cast<std::size_t>(arch_.num_classes));
  std::iota(class_ids.begin(), class_ids.end(), 1);

  Rng rng(seed);
  for (auto& layer : layers_) {
    auto ps = layer->params();
    if (ps.empty()) continue;
    // weight rows = fan-in for both conv (im2col) and dense layouts
    auto& w = ps[0].value;
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = static_cast<T>(dist(rng));
    ps[1].value.setZero();
  }
  acts_.resize(layers_.size() + 1);
  caches_.resize(layers_.size());
  grads_.resize(layers_.size() + 1);
}

template <typename T>
std::size_t Model<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto* p : params()) n += static_cast<std::size_t>(p->value.size());
  return n;
}

template <typename T>
std::size_t Model<T>::trainable_depth() const {
  return layers_.size() - 1;  // final softmax is fused into the loss
}

template <typename T>
const Matrix<T>& Model<T>::forward_logits(const Matrix<T>& batch, Mode mode, Rng& rng) {
  if (batch.cols() != input_size()) {
    throw Error(ErrorCode::shape, "model expects " + std::to_string(input_size()) + " inputs, got " +
                                      std::to_string(batch.cols()));
  }
  acts_[0] = batch;
  const std::size_t depth = trainable_depth();
  for (std::size_t i = 0; i < depth; ++i) {
    layers_[i]->forward(acts_[i], acts_[i + 1], mode, rng, &caches_[i]);
  }
  return acts_[depth];
}

template <typename T>
void Model<T>::backward(const Matrix<T>& grad_logits) {
  const std::size_t depth = trainable_depth();
  grads_[depth] = grad_logits;
  for (std::size_t i = depth; i-- > 0;) {
    // the first layer's input gradient is never needed
    Matrix<T>* grad_in = i > 0 ? &grads_[i] : nullptr;
    layers_[i]->backward(acts_[i], acts_[i + 1], grads_[i + 1], caches_[i], grad_in);
  }
}

template <typename T>
Matrix<T> Model<T>::logits(const Matrix<T>& batch) const {
  if (batch.cols() != input_size()) {
    throw Error(ErrorCode::shape, "model expects " + std::to_string(input_size()) + " inputs, got " +
                                      std::to_string(batch.cols()));
  }
  Rng unused(0);
  Matrix<T> cur = batch;
  Matrix<T> next;
  for (std::size_t i = 0; i < trainable_depth(); ++i) {
    layers_[i]->forward(cur, next, Mode::eval, unused, nullptr);
    std::swap(cur, next);
  }
  return cur;
}

template <typename T>
Matrix<T> Model<T>::predict(const Matrix<T>& batch) const {
  Rng unused(0);
  Matrix<T> out;
  layers_.back()->forward(logits(batch), out, Mode::eval, unused, nullptr);
  return out;
}

template <typename T>
void Model<T>::adam_step() {
  adam_.begin_step();
  std::size_t slot = 0;
  for (auto* p : params()) {
    adam_.update(slot++, std::span<T>(p->value.data(), static_cast<std::size_t>(p->value.size())),
                 std::span<const T>(p->grad.data(), static_cast<std::size_t>(p->grad.size())));
  }
}

template <typename T>
std::vector<Param<T>*> Model<T>::params() {
  std::vector<Param<T>*> out;
  for (auto& layer : layers_) {
    for (auto& p : layer->params()) out.push_back(&p);
  }
  return out;
}

template <typename T>
std::vector<const Param<T>*> Model<T>::params() const {
  std::vector<const Param<T>*> out;
  for (const auto& layer : layers_) {
    for (const auto& p : std::as_const(*layer).params()) out.push_back(&p);
  }
  return out;
}

template <typename T>
std::vector<Matrix<T>> Model<T>::snapshot() const {
  std::vector<Matrix<T>> out;
  for (const auto* p : params()) out.push_back(p->value);
  return out;
}

template <typename T>
void Model<T>::restore(const std::vector<Matrix<T>>& values) {
  auto ps = params();
  if (values.size() != ps.size()) throw Error(ErrorCode::shape, "snapshot does not match model");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (values[i].rows() != ps[i]->value.rows() || values[i].cols() != ps[i]->value.cols()) {
      throw Error(ErrorCode::shape, "snapshot parameter shape mismatch");
    }
    ps[i]->value = values[i];
  }
}

template <typename T>
std::vector<const Matrix<T>*> Model<T>::relu_inputs() const {
  std::vector<const Matrix<T>*> out;
  for (std::size_t i = 0; i < trainable_depth(); ++i) {
    if (layers_[i]->kind() == LayerKind::relu) out.push_back(&acts_[i]);
  }
  return out;
}

template class Model<float>;
template class Model<double>;

}  // namespace wii::nn
