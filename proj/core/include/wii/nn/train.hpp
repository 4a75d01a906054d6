#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wii/nn/adam.hpp"
#include "wii/nn/model.hpp"

namespace wii::nn {

struct TrainConfig {
  AdamConfig adam;        // lr 1e-4, betas 0.9 / 0.999, eps 1e-8
  int batch_size = 256;
  double dropout_p = 0.6;
  int patience = 3;       // epochs without val-loss improvement
  int max_epochs = 50;
  std::uint64_t seed = 1;
};

void validate(const TrainConfig& config);

// Dense inputs (one flattened sample per row) with label indices into the
// model's class list.
struct LabeledData {
  Matrix<float> inputs;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
};

struct EpochStats {
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  double train_seconds = 0.0;  // forward/backward/update over the train set
  double val_seconds = 0.0;
};

struct TrainReport {
  int epochs_run = 0;
  double seconds_per_epoch = 0.0;  // mean train_seconds
  double total_seconds = 0.0;      // sum of train_seconds
  std::vector<EpochStats> history;
  int best_epoch = 0;              // 1-based epoch whose weights were restored
  double best_val_accuracy = 0.0;  // val accuracy of the restored weights
};

using EpochCallback = std::function<void(int epoch, const EpochStats&)>;

// Mini-batch Adam with seeded shuffling, dropout in training only and early
// stopping on validation loss (best weights restored). The final partial
// batch is used.
TrainReport train(Model<float>& model, const LabeledData& train_set, const LabeledData& val_set,
                  const TrainConfig& config, const EpochCallback& on_epoch = {});

struct EvalResult {
  double mean_loss = 0.0;
  double accuracy = 0.0;
  std::vector<int> predicted;  // label indices
};

EvalResult evaluate_batches(const Model<float>& model, const LabeledData& data, int batch_size = 256);

// Posteriors for a batch of inputs, computed in chunks.
Matrix<float> predict(const Model<float>& model, const Matrix<float>& inputs, int batch_size = 256);

// Arg-max with ties resolved to the lowest index.
int argmax(const float* row, int n);

}  // namespace wii::nn
