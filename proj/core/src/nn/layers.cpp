#include "wii/nn/layers.hpp"

#include <cmath>
#include <cstring>

#include "wii/error.hpp"
#include "wii/nn/loss.hpp"

namespace wii::nn {

namespace {

template <typename T>
using MapM = Eigen::Map<Matrix<T>>;
template <typename T>
using CMapM = Eigen::Map<const Matrix<T>>;

void check_rows(Eigen::Index got, int expected, const char* what) {
  if (got != expected) {
    throw Error(ErrorCode::shape, std::string(what) + ": expected " + std::to_string(expected) + " features, got " +
                                      std::to_string(got));
  }
}

}  // namespace

// ---- Conv2D ----

template <typename T>
Conv2D<T>::Conv2D(Shape in, int maps, int kh, int kw)
    : in_(in), out_{in.length - kh + 1, in.width - kw + 1, maps}, kh_(kh), kw_(kw) {
  if (kh > in.length || kw > in.width) throw Error(ErrorCode::shape, "kernel larger than input");
  params_.resize(2);
  params_[0].value = Matrix<T>::Zero(fan_in(), maps);
  params_[0].grad = Matrix<T>::Zero(fan_in(), maps);
  params_[1].value = Matrix<T>::Zero(1, maps);
  params_[1].grad = Matrix<T>::Zero(1, maps);
}

template <typename T>
void Conv2D<T>::im2col(const Matrix<T>& in, Matrix<T>& patches) const {
  const Eigen::Index batch = in.rows();
  const int positions = out_.length * out_.width;
  const int seg = kw_ * in_.channels;
  patches.resize(batch * positions, fan_in());
  for (Eigen::Index b = 0; b < batch; ++b) {
    const T* src = in.data() + b * in.cols();
    for (int ol = 0; ol < out_.length; ++ol) {
      for (int ow = 0; ow < out_.width; ++ow) {
        T* dst = patches.data() + (b * positions + ol * out_.width + ow) * fan_in();
        for (int i = 0; i < kh_; ++i) {
          std::memcpy(dst + i * seg, src + ((ol + i) * in_.width + ow) * in_.channels, sizeof(T) * seg);
        }
      }
    }
  }
}

template <typename T>
void Conv2D<T>::forward(const Matrix<T>& in, Matrix<T>& out, Mode, Rng&, Matrix<T>* cache) const {
  check_rows(in.cols(), in_.size(), "conv input");
  Matrix<T> local;
  Matrix<T>& patches = cache ? *cache : local;
  im2col(in, patches);
  out.resize(in.rows(), out_.size());
  MapM<T> y(out.data(), patches.rows(), out_.channels);
  y.noalias() = patches * params_[0].value;
  y.rowwise() += params_[1].value.row(0);
}

template <typename T>
void Conv2D<T>::backward(const Matrix<T>& in, const Matrix<T>&, const Matrix<T>& grad_out, const Matrix<T>& patches,
                         Matrix<T>* grad_in) {
  const Eigen::Index rows = patches.rows();
  CMapM<T> dy(grad_out.data(), rows, out_.channels);
  params_[0].grad.noalias() = patches.transpose() * dy;
  params_[1].grad = dy.colwise().sum();
  if (!grad_in) return;

  const Matrix<T> dpatches = dy * params_[0].value.transpose();
  grad_in->setZero(in.rows(), in.cols());
  const int positions = out_.length * out_.width;
  const int seg = kw_ * in_.channels;
  for (Eigen::Index b = 0; b < in.rows(); ++b) {
    T* dst = grad_in->data() + b * in.cols();
    for (int ol = 0; ol < out_.length; ++ol) {
      for (int ow = 0; ow < out_.width; ++ow) {
        const T* src = dpatches.data() + (b * positions + ol * out_.width + ow) * fan_in();
        for (int i = 0; i < kh_; ++i) {
          T* d = dst + ((ol + i) * in_.width + ow) * in_.channels;
          const T* s = src + i * seg;
          for (int j = 0; j < seg; ++j) d[j] += s[j];
        }
      }
    }
  }
}

// ---- Dense ----

template <typename T>
Dense<T>::Dense(int in, int out) : in_(in), out_(out) {
  params_.resize(2);
  params_[0].value = Matrix<T>::Zero(in, out);
  params_[0].grad = Matrix<T>::Zero(in, out);
  params_[1].value = Matrix<T>::Zero(1, out);
  params_[1].grad = Matrix<T>::Zero(1, out);
}

template <typename T>
void Dense<T>::forward(const Matrix<T>& in, Matrix<T>& out, Mode, Rng&, Matrix<T>*) const {
  check_rows(in.cols(), in_, "dense input");
  out.resize(in.rows(), out_);
  out.noalias() = in * params_[0].value;
  out.rowwise() += params_[1].value.row(0);
}

template <typename T>
void Dense<T>::backward(const Matrix<T>& in, const Matrix<T>&, const Matrix<T>& grad_out, const Matrix<T>&,
                        Matrix<T>* grad_in) {
  params_[0].grad.noalias() = in.transpose() * grad_out;
  params_[1].grad = grad_out.colwise().sum();
  if (grad_in) {
    grad_in->resize(in.rows(), in_);
    grad_in->noalias() = grad_out * params_[0].value.transpose();
  }
}

// ---- ReLU ----

template <typename T>
void ReLU<T>::forward(const Matrix<T>& in, Matrix<T>& out, Mode, Rng&, Matrix<T>*) const {
  out = in.cwiseMax(T(0));
}

template <typename T>
void ReLU<T>::backward(const Matrix<T>& in, const Matrix<T>&, const Matrix<T>& grad_out, const Matrix<T>&,
                       Matrix<T>* grad_in) {
  if (grad_in) *grad_in = (in.array() > T(0)).select(grad_out, T(0));
}

// ---- Dropout ----

template <typename T>
Dropout<T>::Dropout(Shape s, double p) : shape_(s), p_(p) {
  if (!(p >= 0.0 && p < 1.0)) throw Error(ErrorCode::config, "dropout rate must lie in [0, 1)");
}

template <typename T>
void Dropout<T>::forward(const Matrix<T>& in, Matrix<T>& out, Mode mode, Rng& rng, Matrix<T>* cache) const {
  if (mode == Mode::eval || p_ == 0.0) {
    out = in;
    if (cache) cache->setConstant(in.rows(), in.cols(), T(1));
    return;
  }
  if (!cache) throw Error(ErrorCode::config, "training-mode dropout needs a mask buffer");
  const T keep_scale = static_cast<T>(1.0 / (1.0 - p_));
  // threshold on the top 53 bits of each draw
  const auto threshold = static_cast<std::uint64_t>(p_ * 9007199254740992.0);
  cache->resize(in.rows(), in.cols());
  T* mask = cache->data();
  const Eigen::Index n = in.size();
  for (Eigen::Index i = 0; i < n; ++i) mask[i] = (rng() >> 11) >= threshold ? keep_scale : T(0);
  out = in.cwiseProduct(*cache);
}

template <typename T>
void Dropout<T>::backward(const Matrix<T>&, const Matrix<T>&, const Matrix<T>& grad_out, const Matrix<T>& mask,
                          Matrix<T>* grad_in) {
  if (grad_in) *grad_in = grad_out.cwiseProduct(mask);
}

// ---- Flatten ----

template <typename T>
void Flatten<T>::forward(const Matrix<T>& in, Matrix<T>& out, Mode, Rng&, Matrix<T>*) const {
  out = in;
}

template <typename T>
void Flatten<T>::backward(const Matrix<T>&, const Matrix<T>&, const Matrix<T>& grad_out, const Matrix<T>&,
                          Matrix<T>* grad_in) {
  if (grad_in) *grad_in = grad_out;
}

// ---- Softmax ----

template <typename T>
void Softmax<T>::forward(const Matrix<T>& in, Matrix<T>& out, Mode, Rng&, Matrix<T>*) const {
  out = softmax_rows(in);
}

template <typename T>
void Softmax<T>::backward(const Matrix<T>&, const Matrix<T>& out, const Matrix<T>& grad_out, const Matrix<T>&,
                          Matrix<T>* grad_in) {
  if (!grad_in) return;
  // dL/dz_i = p_i * (g_i - sum_j g_j p_j)
  const auto dot = (grad_out.cwiseProduct(out)).rowwise().sum();
  *grad_in = out.cwiseProduct(grad_out - dot.replicate(1, out.cols()));
}

template <typename T>
std::unique_ptr<Layer<T>> make_layer(const LayerSpec& spec, Shape in) {
  switch (spec.kind) {
    case LayerKind::conv: return std::make_unique<Conv2D<T>>(in, spec.units, spec.kh, spec.kw);
    case LayerKind::dense: return std::make_unique<Dense<T>>(in.size(), spec.units);
    case LayerKind::relu: return std::make_unique<ReLU<T>>(in);
    case LayerKind::dropout: return std::make_unique<Dropout<T>>(in, spec.p);
    case LayerKind::flatten: return std::make_unique<Flatten<T>>(in);
    case LayerKind::softmax: return std::make_unique<Softmax<T>>(in);
  }
  throw Error(ErrorCode::shape, "unknown layer kind");
}

template class Conv2D<float>;
template class Conv2D<double>;
template class Dense<float>;
template class Dense<double>;
template class ReLU<float>;
template class ReLU<double>;
template class Dropout<float>;
template class Dropout<double>;
template class Flatten<float>;
template class Flatten<double>;
template class Softmax<float>;
template class Softmax<double>;
template std::unique_ptr<Layer<float>> make_layer<float>(const LayerSpec&, Shape);
template std::unique_ptr<Layer<double>> make_layer<double>(const LayerSpec&, Shape);

}  // namespace wii::nn
