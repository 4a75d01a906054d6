#include "wii/nn/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "wii/error.hpp"
#include "wii/nn/loss.hpp"

namespace wii::nn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void check_data(const Model<float>& model, const LabeledData& data, const char* what) {
  if (data.size() == 0) throw Error(ErrorCode::data, std::string(what) + " set is empty");
  if (static_cast<std::size_t>(data.inputs.rows()) != data.size()) {
    throw Error(ErrorCode::shape, std::string(what) + " inputs and labels differ in length");
  }
  if (data.inputs.cols() != model.input_size()) {
    throw Error(ErrorCode::shape, std::string(what) + " inputs have " + std::to_string(data.inputs.cols()) +
                                      " features, model expects " + std::to_string(model.input_size()));
  }
  for (int l : data.labels) {
    if (l < 0 || l >= model.num_classes()) throw Error(ErrorCode::label, "label index out of range");
  }
}

}  // namespace

void validate(const TrainConfig& config) {
  if (!(config.adam.lr > 0.0)) throw Error(ErrorCode::config, "learning rate must be positive");
  if (config.batch_size < 1) throw Error(ErrorCode::config, "batch size must be >= 1");
  if (!(config.dropout_p >= 0.0 && config.dropout_p < 1.0)) throw Error(ErrorCode::config, "dropout must lie in [0, 1)");
  if (config.max_epochs < 1) throw Error(ErrorCode::config, "max_epochs must be >= 1");
  if (config.patience < 1) throw Error(ErrorCode::config, "patience must be >= 1");
}

int argmax(const float* row, int n) {
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (row[i] > row[best]) best = i;
  }
  return best;
}

Matrix<float> predict(const Model<float>& model, const Matrix<float>& inputs, int batch_size) {
  Matrix<float> out(inputs.rows(), model.num_classes());
  for (Eigen::Index start = 0; start < inputs.rows(); start += batch_size) {
    const Eigen::Index n = std::min<Eigen::Index>(batch_size, inputs.rows() - start);
    out.middleRows(start, n) = model.predict(inputs.middleRows(start, n));
  }
  return out;
}

EvalResult evaluate_batches(const Model<float>& model, const LabeledData& data, int batch_size) {
  EvalResult r;
  r.predicted.resize(data.size());
  double loss = 0.0;
  std::size_t correct = 0;
  for (Eigen::Index start = 0; start < data.inputs.rows(); start += batch_size) {
    const Eigen::Index n = std::min<Eigen::Index>(batch_size, data.inputs.rows() - start);
    const Matrix<float> probs = softmax_rows<float>(model.logits(data.inputs.middleRows(start, n)));
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto idx = static_cast<std::size_t>(start + i);
      const int label = data.labels[idx];
      loss += cross_entropy<float>(std::span<const float>(probs.row(i).data(), static_cast<std::size_t>(probs.cols())),
                                   label);
      const int pred = argmax(probs.row(i).data(), static_cast<int>(probs.cols()));
      r.predicted[idx] = pred;
      if (pred == label) ++correct;
    }
  }
  r.mean_loss = loss / static_cast<double>(data.size());
  r.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
  return r;
}

TrainReport train(Model<float>& model, const LabeledData& train_set, const LabeledData& val_set,
                  const TrainConfig& config, const EpochCallback& on_epoch) {
  validate(config);
  check_data(model, train_set, "train");
  check_data(model, val_set, "validation");

  Rng shuffle_rng(mix_seed(config.seed, {1}));
  Rng dropout_rng(mix_seed(config.seed, {2}));

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  TrainReport report;
  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<Matrix<float>> best = model.snapshot();
  int stale = 0;

  Matrix<float> batch;
  std::vector<int> labels;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    const auto t0 = Clock::now();
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(config.batch_size), order.size() - start);
      batch.resize(static_cast<Eigen::Index>(n), train_set.inputs.cols());
      labels.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        batch.row(static_cast<Eigen::Index>(i)) = train_set.inputs.row(static_cast<Eigen::Index>(order[start + i]));
        labels[i] = train_set.labels[order[start + i]];
      }
      const auto& logits = model.forward_logits(batch, Mode::train, dropout_rng);
      const auto loss = softmax_cross_entropy<float>(logits, labels);
      if (!std::isfinite(loss.mean_loss)) throw Error(ErrorCode::numeric, "training loss is not finite");
      loss_sum += loss.mean_loss * static_cast<double>(n);
      model.backward(loss.grad_logits);
      model.adam_step();
    }
    EpochStats stats;
    stats.train_seconds = seconds_since(t0);
    stats.train_loss = loss_sum / static_cast<double>(order.size());

    const auto t1 = Clock::now();
    const auto val = evaluate_batches(model, val_set, config.batch_size);
    stats.val_seconds = seconds_since(t1);
    stats.val_loss = val.mean_loss;
    stats.val_accuracy = val.accuracy;
    if (!std::isfinite(stats.val_loss)) throw Error(ErrorCode::numeric, "validation loss is not finite");

    report.history.push_back(stats);
    report.epochs_run = epoch;
    report.total_seconds += stats.train_seconds;
    if (on_epoch) on_epoch(epoch, stats);

    if (stats.val_loss < best_loss) {
      best_loss = stats.val_loss;
      best = model.snapshot();
      report.best_epoch = epoch;
      report.best_val_accuracy = stats.val_accuracy;
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  model.restore(best);
  report.seconds_per_epoch = report.total_seconds / report.epochs_run;
  return report;
}

}  // namespace wii::nn
