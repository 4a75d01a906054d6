#pragma once

#include "wii/nn/model.hpp"

namespace wii::nn {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t compared = 0;
  std::size_t skipped = 0;  // perturbation moved a ReLU input across 0
};

// Compares analytic parameter gradients of the single-sample cross-entropy
// (eval mode, no dropout) with central differences. Relative error is
// |a - n| / max(|a|, |n|, floor).
GradCheckResult grad_check(Model<double>& model, const Matrix<double>& sample, int label, double epsilon = 1e-5,
                           double floor = 1e-7);

}  // namespace wii::nn
