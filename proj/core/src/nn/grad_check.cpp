#include "wii/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "wii/error.hpp"
#include "wii/nn/loss.hpp"

namespace wii::nn {

namespace {

double sample_loss(Model<double>& model, const Matrix<double>& sample, int label, std::vector<bool>* pattern) {
  Rng rng(0);
  const auto& z = model.forward_logits(sample, Mode::eval, rng);
  if (pattern) {
    pattern->clear();
    for (const auto* in : model.relu_inputs()) {
      for (Eigen::Index i = 0; i < in->size(); ++i) pattern->push_back(in->data()[i] > 0.0);
    }
  }
  // log-sum-exp without the 1e-12 clamp so tiny probabilities stay differentiable
  const double peak = z.row(0).maxCoeff();
  const double lse = peak + std::log((z.row(0).array() - peak).exp().sum());
  return lse - z(0, label);
}

}  // namespace

GradCheckResult grad_check(Model<double>& model, const Matrix<double>& sample, int label, double epsilon,
                           double floor) {
  if (sample.rows() != 1) throw Error(ErrorCode::shape, "grad_check takes a single sample");
  if (label < 0 || label >= model.num_classes()) throw Error(ErrorCode::label, "label out of range");

  std::vector<bool> base_pattern;
  sample_loss(model, sample, label, &base_pattern);
  Rng rng(0);
  const auto& z = model.forward_logits(sample, Mode::eval, rng);
  const auto loss = softmax_cross_entropy<double>(z, std::vector<int>{label});
  model.backward(loss.grad_logits);

  GradCheckResult result;
  std::vector<bool> pattern;
  for (auto* p : model.params()) {
    const Matrix<double> analytic = p->grad;
    for (Eigen::Index i = 0; i < p->value.size(); ++i) {
      double& w = p->value.data()[i];
      const double saved = w;
      w = saved + epsilon;
      const double up = sample_loss(model, sample, label, &pattern);
      bool kink = pattern != base_pattern;
      w = saved - epsilon;
      const double down = sample_loss(model, sample, label, &pattern);
      kink = kink || pattern != base_pattern;
      w = saved;
      // an input sitting exactly at 0 flips under one of the two perturbations
      if (kink) {
        ++result.skipped;
        continue;
      }
      const double numeric = (up - down) / (2.0 * epsilon);
      const double a = analytic.data()[i];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
      result.max_rel_error = std::max(result.max_rel_error, rel);
      ++result.compared;
    }
  }
  return result;
}

}  // namespace wii::nn
