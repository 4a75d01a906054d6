#include "wii/eval.hpp"

#include <algorithm>
#include <numeric>

#include "wii/error.hpp"

namespace wii {

std::int64_t ConfusionMatrix::row_sum(std::size_t truth) const {
  const auto first = counts.begin() + static_cast<std::ptrdiff_t>(truth * size());
  return std::accumulate(first, first + static_cast<std::ptrdiff_t>(size()), std::int64_t{0});
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t t = 0;
  for (std::size_t i = 0; i < size(); ++i) t += at(i, i);
  return t;
}

std::int64_t ConfusionMatrix::total() const { return std::accumulate(counts.begin(), counts.end(), std::int64_t{0}); }

SliceAccuracy Metrics::at_or_above(int snr_db) const {
  SliceAccuracy s;
  for (const auto& [snr, slice] : per_snr) {
    if (snr < snr_db) continue;
    s.correct += slice.correct;
    s.total += slice.total;
  }
  return s;
}

namespace {

std::size_t index_of(const std::vector<int>& class_ids, int class_id) {
  const auto it = std::find(class_ids.begin(), class_ids.end(), class_id);
  if (it == class_ids.end()) {
    throw Error(ErrorCode::label_mapping, "class " + std::to_string(class_id) + " is not in the model's class set");
  }
  return static_cast<std::size_t>(it - class_ids.begin());
}

}  // namespace

Metrics compute_metrics(const std::vector<int>& class_ids, std::span<const Prediction> predictions) {
  Metrics m;
  const auto k = class_ids.size();
  m.confusion.class_ids = class_ids;
  m.confusion.counts.assign(k * k, 0);
  for (const auto& p : predictions) {
    const auto t = index_of(class_ids, p.true_class);
    const auto q = index_of(class_ids, p.predicted_class);
    ++m.confusion.counts[t * k + q];
    const bool hit = t == q;
    for (SliceAccuracy* s : {&m.overall, &m.per_technology[class_spec(p.true_class).technology], &m.per_snr[p.snr_db]}) {
      ++s->total;
      s->correct += hit ? 1 : 0;
    }
  }
  m.overall_accuracy = m.overall.accuracy();
  return m;
}

nn::LabeledData make_labeled(std::span<const LabeledFeatures> items, const std::vector<int>& class_ids) {
  nn::LabeledData data;
  if (items.empty()) return data;
  const auto width = items.front().features.values.size();
  data.inputs.resize(static_cast<Eigen::Index>(items.size()), static_cast<Eigen::Index>(width));
  data.labels.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& v = items[i].features.values;
    if (v.size() != width) throw Error(ErrorCode::shape, "feature matrices differ in size");
    std::copy(v.begin(), v.end(), data.inputs.row(static_cast<Eigen::Index>(i)).data());
    data.labels.push_back(static_cast<int>(index_of(class_ids, items[i].class_id)));
  }
  return data;
}

Metrics evaluate(const nn::Model<float>& model, std::span<const LabeledFeatures> items, int batch_size) {
  if (items.empty()) throw Error(ErrorCode::data, "no records to evaluate");
  const auto data = make_labeled(items, model.class_ids);
  if (data.inputs.cols() != model.input_size()) {
    throw Error(ErrorCode::shape, "features have " + std::to_string(data.inputs.cols()) + " values, model expects " +
                                      std::to_string(model.input_size()));
  }
  const auto posteriors = nn::predict(model, data.inputs, batch_size);
  std::vector<Prediction> preds(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const int idx = nn::argmax(posteriors.row(static_cast<Eigen::Index>(i)).data(), model.num_classes());
    preds[i] = {items[i].class_id, model.class_ids[static_cast<std::size_t>(idx)], items[i].snr_db};
  }
  return compute_metrics(model.class_ids, preds);
}

Metrics evaluate(const nn::Model<float>& model, const Dataset& records, const FeaturePipeline& pipeline,
                 int batch_size) {
  const auto features = pipeline.apply(records);
  return evaluate(model, features.items, batch_size);
}

std::vector<LabeledFeatures> select_split(const FeatureSet& set, Split split) {
  std::vector<LabeledFeatures> out;
  for (const auto& item : set.items) {
    if (item.split == split) out.push_back(item);
  }
  return out;
}

}  // namespace wii
