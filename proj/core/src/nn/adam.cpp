#include "wii/nn/adam.hpp"

#include <cmath>

#include "wii/error.hpp"

namespace wii::nn {

template <typename T>
void Adam<T>::begin_step() {
  ++step_;
  const double t = static_cast<double>(step_);
  lr_t_ = config_.lr * std::sqrt(1.0 - std::pow(config_.beta2, t)) / (1.0 - std::pow(config_.beta1, t));
}

template <typename T>
void Adam<T>::update(std::size_t slot, std::span<T> param, std::span<const T> grad) {
  if (step_ == 0) throw Error(ErrorCode::config, "Adam::update before begin_step");
  if (param.size() != grad.size()) throw Error(ErrorCode::shape, "parameter and gradient sizes differ");
  if (slot >= m_.size()) {
    m_.resize(slot + 1);
    v_.resize(slot + 1);
  }
  auto& m = m_[slot];
  auto& v = v_[slot];
  if (m.size() != param.size()) {
    m.assign(param.size(), T(0));
    v.assign(param.size(), T(0));
  }
  const T b1 = static_cast<T>(config_.beta1);
  const T b2 = static_cast<T>(config_.beta2);
  const T one_b1 = static_cast<T>(1.0 - config_.beta1);
  const T one_b2 = static_cast<T>(1.0 - config_.beta2);
  const double t = static_cast<double>(step_);
  // eps applies to the bias-corrected second moment: sqrt(v_hat) + eps
  const T eps_hat = static_cast<T>(config_.epsilon * std::sqrt(1.0 - std::pow(config_.beta2, t)));
  const T lr_t = static_cast<T>(lr_t_);
  const std::size_t n = param.size();
  T* __restrict p = param.data();
  const T* __restrict g = grad.data();
  T* __restrict mm = m.data();
  T* __restrict vv = v.data();
  for (std::size_t i = 0; i < n; ++i) {
    mm[i] = b1 * mm[i] + one_b1 * g[i];
    vv[i] = b2 * vv[i] + one_b2 * g[i] * g[i];
    p[i] -= lr_t * mm[i] / (std::sqrt(vv[i]) + eps_hat);
  }
}

template class Adam<float>;
template class Adam<double>;

}  // namespace wii::nn
