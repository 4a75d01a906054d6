#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "wii/catalog.hpp"
#include "wii/features.hpp"
#include "wii/nn/model.hpp"
#include "wii/nn/train.hpp"
#include "wii/pipeline.hpp"

namespace wii {

// Rows are true classes, columns predicted classes, both in class_ids order.
struct ConfusionMatrix {
  std::vector<int> class_ids;
  std::vector<std::int64_t> counts;  // K x K row-major

  std::size_t size() const { return class_ids.size(); }
  std::int64_t at(std::size_t truth, std::size_t predicted) const { return counts[truth * size() + predicted]; }
  std::int64_t row_sum(std::size_t truth) const;
  std::int64_t trace() const;
  std::int64_t total() const;
};

struct SliceAccuracy {
  std::int64_t correct = 0;
  std::int64_t total = 0;

  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
};

struct Timing {
  double seconds_per_epoch = 0.0;
  int epochs = 0;
  double total_seconds = 0.0;
};

struct Metrics {
  double overall_accuracy = 0.0;
  SliceAccuracy overall;
  std::map<Technology, SliceAccuracy> per_technology;
  std::map<int, SliceAccuracy> per_snr;
  ConfusionMatrix confusion;
  Timing timing;

  // Accuracy pooled over every SNR slice at or above snr_db.
  SliceAccuracy at_or_above(int snr_db) const;
};

struct Prediction {
  int true_class = 0;
  int predicted_class = 0;
  int snr_db = 0;
};

// Aggregates predictions. Throws a label-mapping error when a true or
// predicted class is not in class_ids.
Metrics compute_metrics(const std::vector<int>& class_ids, std::span<const Prediction> predictions);

// Stacks feature matrices into model input rows (L x 2 row-major per sample)
// with labels mapped to indices of class_ids.
nn::LabeledData make_labeled(std::span<const LabeledFeatures> items, const std::vector<int>& class_ids);

// Arg-max prediction for every item (all splits the caller passes in).
Metrics evaluate(const nn::Model<float>& model, std::span<const LabeledFeatures> items, int batch_size = 256);

// Featurizes raw records with a fitted pipeline, then evaluates.
Metrics evaluate(const nn::Model<float>& model, const Dataset& records, const FeaturePipeline& pipeline,
                 int batch_size = 256);

// Items of one split, preserving order.
std::vector<LabeledFeatures> select_split(const FeatureSet& set, Split split);

}  // namespace wii
