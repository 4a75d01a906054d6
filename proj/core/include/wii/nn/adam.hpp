#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wii::nn {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction. Call begin_step() once per batch, then
// update() for every parameter slot.
template <typename T>
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  void begin_step();
  void update(std::size_t slot, std::span<T> param, std::span<const T> grad);

  long steps() const { return step_; }
  const AdamConfig& config() const { return config_; }
  std::span<const T> first_moment(std::size_t slot) const { return m_.at(slot); }
  std::span<const T> second_moment(std::size_t slot) const { return v_.at(slot); }

 private:
  AdamConfig config_;
  long step_ = 0;
  double lr_t_ = 0.0;
  std::vector<std::vector<T>> m_;
  std::vector<std::vector<T>> v_;
};

extern template class Adam<float>;
extern template class Adam<double>;

}  // namespace wii::nn
