#pragma once

#include <memory>
#include <span>
#include <vector>

#include "wii/nn/arch.hpp"
#include "wii/nn/tensor.hpp"
#include "wii/seed.hpp"

namespace wii::nn {

template <typename T>
struct Param {
  Matrix<T> value;
  Matrix<T> grad;
};

// One layer of the feed-forward stack. Layers are stateless across calls
// except for their parameters; per-batch state (im2col patches, dropout
// masks) lives in the caller-owned cache.
template <typename T>
class Layer {
 public:
  virtual ~Layer() = default;

  virtual LayerKind kind() const = 0;
  virtual Shape output_shape() const = 0;

  // cache may be null in eval mode.
  virtual void forward(const Matrix<T>& in, Matrix<T>& out, Mode mode, Rng& rng, Matrix<T>* cache) const = 0;

  // Writes parameter gradients (overwriting) and, when grad_in is non-null,
  // the gradient with respect to the input.
  virtual void backward(const Matrix<T>& in, const Matrix<T>& out, const Matrix<T>& grad_out, const Matrix<T>& cache,
                        Matrix<T>* grad_in) = 0;

  virtual std::span<Param<T>> params() { return {}; }
  virtual std::span<const Param<T>> params() const { return {}; }
};

// Valid 2-D cross-correlation over (length, width) with channels-last
// layout, computed as im2col + GEMM. Weights are (kh*kw*C_in) x maps.
template <typename T>
class Conv2D final : public Layer<T> {
 public:
  Conv2D(Shape in, int maps, int kh, int kw);

  LayerKind kind() const override { return LayerKind::conv; }
  Shape output_shape() const override { return out_; }
  void forward(const Matrix<T>& in, Matrix<T>& out, Mode mode, Rng& rng, Matrix<T>* cache) const override;
  void backward(const Matrix<T>& in, const Matrix<T>& out, const Matrix<T>& grad_out, const Matrix<T>& cache,
                Matrix<T>* grad_in) override;
  std::span<Param<T>> params() override { return params_; }
  std::span<const Param<T>> params() const override { return params_; }

  int fan_in() const { return kh_ * kw_ * in_.channels; }

 private:
  void im2col(const Matrix<T>& in, Matrix<T>& patches) const;

  Shape in_;
  Shape out_;
  int kh_;
  int kw_;
  std::vector<Param<T>> params_;  // weight, bias
};

// Fully connected: out = in * W + b with W of shape D_in x D_out.
template <typename T>
class Dense final : public Layer<T> {
 public:
  Dense(int in, int out);

  LayerKind kind() const override { return LayerKind::dense; }
  Shape output_shape() const override { return {out_, 1, 1}; }
  void forward(const Matrix<T>& in, Matrix<T>& out, Mode mode, Rng& rng, Matrix<T>* cache) const override;
  void backward(const Matrix<T>& in, const Matrix<T>& out, const Matrix<T>& grad_out, const Matrix<T>& cache,
                Matrix<T>* grad_in) override;
  std::span<Param<T>> params() override { return params_; }
  std::span<const Param<T>> params() const override { return params_; }

 private:
  int in_;
  int out_;
  std::vector<Param<T>> params_;
};

template <typename T>
class ReLU final : public Layer<T> {
 public:
  explicit ReLU(Shape s) : shape_(s) {}
  LayerKind kind() const override { return LayerKind::relu; }
  Shape output_shape() const override { return shape_; }
  void forward(const Matrix<T>& in, Matrix<T>& out, Mode mode, Rng& rng, Matrix<T>* cache) const override;
  void backward(const Matrix<T>& in, const Matrix<T>& out, const Matrix<T>& grad_out, const Matrix<T>& cache,
                Matrix<T>* grad_in) override;

 private:
  Shape shape_;
};

// Inverted dropout: in training kept units are scaled by 1/(1-p); identity in eval.
template <typename T>
class Dropout final : public Layer<T> {
 public:
  Dropout(Shape s, double p);
  LayerKind kind() const override { return LayerKind::dropout; }
  Shape output_shape() const override { return shape_; }
  void forward(const Matrix<T>& in, Matrix<T>& out, Mode mode, Rng& rng, Matrix<T>* cache) const override;
  void backward(const Matrix<T>& in, const Matrix<T>& out, const Matrix<T>& grad_out, const Matrix<T>& cache,
                Matrix<T>* grad_in) override;
  double rate() const { return p_; }

 private:
  Shape shape_;
  double p_;
};

template <typename T>
class Flatten final : public Layer<T> {
 public:
  explicit Flatten(Shape in) : out_{in.size(), 1, 1} {}
  LayerKind kind() const override { return LayerKind::flatten; }
  Shape output_shape() const override { return out_; }
  void forward(const Matrix<T>& in, Matrix<T>& out, Mode mode, Rng& rng, Matrix<T>* cache) const override;
  void backward(const Matrix<T>& in, const Matrix<T>& out, const Matrix<T>& grad_out, const Matrix<T>& cache,
                Matrix<T>* grad_in) override;

 private:
  Shape out_;
};

// Row-wise softmax. Training skips it and differentiates the fused
// softmax + cross-entropy instead.
template <typename T>
class Softmax final : public Layer<T> {
 public:
  explicit Softmax(Shape s) : shape_(s) {}
  LayerKind kind() const override { return LayerKind::softmax; }
  Shape output_shape() const override { return shape_; }
  void forward(const Matrix<T>& in, Matrix<T>& out, Mode mode, Rng& rng, Matrix<T>* cache) const override;
  void backward(const Matrix<T>& in, const Matrix<T>& out, const Matrix<T>& grad_out, const Matrix<T>& cache,
                Matrix<T>* grad_in) override;

 private:
  Shape shape_;
};

template <typename T>
std::unique_ptr<Layer<T>> make_layer(const LayerSpec& spec, Shape in);

}  // namespace wii::nn
