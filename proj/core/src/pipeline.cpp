#include "wii/pipeline.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "wii/binary_io.hpp"

#include "wii/error.hpp"
#include "wii/parallel.hpp"

namespace wii {

void validate(const ReductionConfig& config, const CaptureSpec& capture) {
  if (config.band) validate(*config.band, capture);
  if (config.train_snr && !on_snr_grid(*config.train_snr)) {
    throw Error(ErrorCode::config, "train SNR " + std::to_string(*config.train_snr) + " dB is not on the grid");
  }
  if (config.pca_rate && config.subsample) {
    throw Error(ErrorCode::config, "PCA and subsampling are mutually exclusive");
  }
  if (config.pca_rate && !(*config.pca_rate > 0.0 && *config.pca_rate <= 1.0)) {
    throw Error(ErrorCode::config, "PCA rate must lie in (0, 1]");
  }
  if (config.subsample && !(config.subsample->rate > 0.0 && config.subsample->rate <= 1.0)) {
    throw Error(ErrorCode::config, "subsample rate must lie in (0, 1]");
  }
}

std::string describe(const ReductionConfig& config) {
  std::ostringstream os;
  os << "band=" << (config.band ? format_band(*config.band) : "full");
  os << " train_snr=" << (config.train_snr ? std::to_string(*config.train_snr) : "all");
  if (config.pca_rate) os << " pca_rate=" << *config.pca_rate;
  if (config.subsample) {
    os << " subsample=" << to_string(config.subsample->method) << " rate=" << config.subsample->rate
       << " seed=" << config.subsample->seed;
  }
  return os.str();
}

Reducer::Reducer(ReductionConfig config, CaptureSpec capture) : config_(std::move(config)), capture_(capture) {
  validate(config_, capture_);
}

Reducer Reducer::fitted(ReductionConfig config, CaptureSpec capture, std::optional<PcaModel> pca,
                        std::optional<SubsampleSpec> subsample) {
  Reducer r(std::move(config), capture);
  r.pca_ = std::move(pca);
  r.subsample_ = std::move(subsample);
  r.fitted_ = true;
  return r;
}

std::vector<int> Reducer::classes() const {
  if (!config_.band) {
    std::vector<int> all;
    for (const auto& spec : catalog()) all.push_back(spec.class_id);
    return all;
  }
  const auto ids = observable_classes(*config_.band);
  return {ids.begin(), ids.end()};
}

FeatureSet Reducer::apply_band_stage(FeatureSet set) const {
  if (!config_.band) return set;
  if (set.projected) throw Error(ErrorCode::representation, "band selection must precede PCA");
  const auto keep = observable_classes(*config_.band);
  std::erase_if(set.items, [&](const LabeledFeatures& item) { return !keep.contains(item.class_id); });
  parallel_for(set.items.size(), [&](std::size_t i) {
    set.items[i].features = apply_band(set.items[i].features, *config_.band, capture_);
  });
  return set;
}

FeatureSet Reducer::apply_compression(FeatureSet set) const {
  if (pca_) {
    parallel_for(set.items.size(), [&](std::size_t i) { set.items[i].features = pca_features(*pca_, set.items[i].features); });
    set.projected = true;
  } else if (subsample_) {
    parallel_for(set.items.size(),
                 [&](std::size_t i) { set.items[i].features = subsample_apply(*subsample_, set.items[i].features); });
  }
  return set;
}

FeatureSet Reducer::fit_transform(FeatureSet set) {
  set = apply_band_stage(std::move(set));
  if (config_.train_snr) {
    const int snr = *config_.train_snr;
    std::erase_if(set.items, [&](const LabeledFeatures& item) { return item.split == Split::train && item.snr_db != snr; });
    const bool any = std::any_of(set.items.begin(), set.items.end(),
                                 [](const LabeledFeatures& item) { return item.split == Split::train; });
    if (!any) throw Error(ErrorCode::empty_selection, "no train records at " + std::to_string(snr) + " dB");
  }

  std::vector<FeatureMatrix> train;
  if (config_.pca_rate || config_.subsample) {
    for (const auto& item : set.items) {
      if (item.split == Split::train) train.push_back(item.features);
    }
  }
  if (config_.pca_rate) {
    if (set.projected) throw Error(ErrorCode::representation, "features are already projected");
    pca_ = pca_fit(train, pca_components_for_rate(set.rows(), *config_.pca_rate));
  } else if (config_.subsample) {
    subsample_ = subsample_resolve(*config_.subsample, set.rows(), train);
  }
  fitted_ = true;
  return apply_compression(std::move(set));
}

FeatureSet Reducer::transform(FeatureSet set) const {
  if (!fitted_ && (config_.pca_rate || config_.subsample)) {
    throw Error(ErrorCode::config, "reducer must be fitted before transform");
  }
  return apply_compression(apply_band_stage(std::move(set)));
}

FeatureSet FeaturePipeline::apply(const Dataset& d) const { return reducer.transform(to_feature_set(d, repr)); }

namespace {

constexpr char kPipelineMagic[] = "WIIP";
constexpr std::uint16_t kPipelineVersion = 1;

void write_vector(BinaryWriter& w, const Eigen::VectorXd& v) {
  w.u32(static_cast<std::uint32_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) w.f64(v[i]);
}

Eigen::VectorXd read_vector(BinaryReader& r) {
  Eigen::VectorXd v(r.u32());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = r.f64();
  return v;
}

}  // namespace

std::string encode_pipeline(const FeaturePipeline& pipeline) {
  std::ostringstream os(std::ios::binary);
  BinaryWriter w(os);
  const auto& cfg = pipeline.reducer.config();
  w.bytes(std::string_view(kPipelineMagic, 4));
  w.u16(kPipelineVersion);
  w.u8(static_cast<std::uint8_t>(pipeline.repr));
  w.string(cfg.band ? format_band(*cfg.band) : "");
  w.u8(cfg.train_snr ? 1 : 0);
  w.i8(static_cast<std::int8_t>(cfg.train_snr.value_or(0)));
  w.f64(cfg.pca_rate.value_or(0.0));
  const auto& pca = pipeline.reducer.pca();
  w.u8(pca ? 1 : 0);
  if (pca) {
    write_vector(w, pca->mean);
    write_vector(w, pca->variances);
    w.u32(static_cast<std::uint32_t>(pca->k()));
    w.u32(static_cast<std::uint32_t>(pca->d()));
    for (Eigen::Index i = 0; i < pca->k(); ++i) {
      for (Eigen::Index j = 0; j < pca->d(); ++j) w.f64(pca->components(i, j));
    }
  }
  const auto& sub = pipeline.reducer.subsample();
  w.u8(sub ? 1 : 0);
  if (sub) {
    w.u8(static_cast<std::uint8_t>(sub->method));
    w.f64(sub->rate);
    w.u64(sub->seed);
    w.u32(static_cast<std::uint32_t>(sub->indices.size()));
    for (auto i : sub->indices) w.u32(static_cast<std::uint32_t>(i));
  }
  return os.str();
}

FeaturePipeline decode_pipeline(std::string_view bytes) {
  std::istringstream is(std::string(bytes), std::ios::binary);
  BinaryReader r(is);
  if (r.bytes(4) != std::string_view(kPipelineMagic, 4)) throw Error(ErrorCode::format, "bad pipeline magic");
  if (r.u16() != kPipelineVersion) throw Error(ErrorCode::format, "unsupported pipeline version");
  FeaturePipeline p;
  const auto repr = r.u8();
  if (repr > 2) throw Error(ErrorCode::format, "unknown representation tag");
  p.repr = static_cast<Representation>(repr);
  ReductionConfig cfg;
  const auto band = r.string();
  if (!band.empty()) cfg.band = parse_band(band);
  const bool has_snr = r.u8() != 0;
  const int snr = r.i8();
  if (has_snr) cfg.train_snr = snr;
  const double pca_rate = r.f64();
  std::optional<PcaModel> pca;
  if (r.u8() != 0) {
    cfg.pca_rate = pca_rate;
    PcaModel m;
    m.mean = read_vector(r);
    m.variances = read_vector(r);
    const auto k = r.u32();
    const auto d = r.u32();
    if (d != m.mean.size() || k != m.variances.size()) throw Error(ErrorCode::corruption, "inconsistent PCA state");
    m.components.resize(k, d);
    for (Eigen::Index i = 0; i < m.components.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.components.cols(); ++j) m.components(i, j) = r.f64();
    }
    pca = std::move(m);
  }
  std::optional<SubsampleSpec> sub;
  if (r.u8() != 0) {
    SubsampleSpec s;
    const auto method = r.u8();
    if (method > 2) throw Error(ErrorCode::format, "unknown subsample method");
    s.method = static_cast<SubsampleMethod>(method);
    s.rate = r.f64();
    s.seed = r.u64();
    s.indices.resize(r.u32());
    for (auto& i : s.indices) i = r.u32();
    cfg.subsample = s;
    sub = std::move(s);
  }
  p.reducer = Reducer::fitted(std::move(cfg), CaptureSpec{}, std::move(pca), std::move(sub));
  return p;
}

}  // namespace wii
