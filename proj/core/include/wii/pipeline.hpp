#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wii/band.hpp"
#include "wii/features.hpp"
#include "wii/pca.hpp"
#include "wii/subsample.hpp"

namespace wii {

// Training-cost reductions, applied in the order band -> train SNR -> (PCA | subsample).
struct ReductionConfig {
  std::optional<BandSpec> band;
  std::optional<int> train_snr;
  std::optional<double> pca_rate;
  std::optional<SubsampleSpec> subsample;
};

void validate(const ReductionConfig& config, const CaptureSpec& capture = {});
std::string describe(const ReductionConfig& config);

class Reducer {
 public:
  explicit Reducer(ReductionConfig config = {}, CaptureSpec capture = {});

  // Rebuilds an already fitted reducer from stored state.
  static Reducer fitted(ReductionConfig config, CaptureSpec capture, std::optional<PcaModel> pca,
                        std::optional<SubsampleSpec> subsample);

  // Applies the band (dropping unobservable classes), keeps only train
  // records at train_snr, fits PCA or subsample indices on the remaining
  // train split and applies them to every record.
  FeatureSet fit_transform(FeatureSet set);

  // Same transforms with the fitted state; no SNR filtering.
  FeatureSet transform(FeatureSet set) const;

  std::vector<int> classes() const;
  const ReductionConfig& config() const { return config_; }
  const std::optional<PcaModel>& pca() const { return pca_; }
  const std::optional<SubsampleSpec>& subsample() const { return subsample_; }

 private:
  FeatureSet apply_band_stage(FeatureSet set) const;
  FeatureSet apply_compression(FeatureSet set) const;

  ReductionConfig config_;
  CaptureSpec capture_;
  std::optional<PcaModel> pca_;
  std::optional<SubsampleSpec> subsample_;
  bool fitted_ = false;
};

// Representation plus fitted reductions: turns raw records into model inputs.
struct FeaturePipeline {
  Representation repr = Representation::freq_iq;
  Reducer reducer;

  FeatureSet apply(const Dataset& d) const;
};

// Compact binary form of a fitted pipeline (representation, band, train SNR,
// PCA basis or subsample indices) for embedding in model checkpoints.
std::string encode_pipeline(const FeaturePipeline& pipeline);
FeaturePipeline decode_pipeline(std::string_view bytes);

}  // namespace wii
