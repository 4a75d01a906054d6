#include "wii/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>

#include <Eigen/Core>

#include "wii/error.hpp"
#include "wii/nn/checkpoint.hpp"
#include "wii/parallel.hpp"
#include "wii/report.hpp"
#include "wii/seed.hpp"

#ifndef WII_VERSION
#define WII_VERSION "unknown"
#endif

namespace wii {

namespace {

constexpr std::string_view kBand4 = "2422-2424,2429-2431";
constexpr std::string_view kBand2 = "2429-2431";

ExperimentPreset make(std::string name, Representation repr, std::string_view band = {},
                      std::optional<int> train_snr = std::nullopt) {
  ExperimentPreset p;
  p.name = std::move(name);
  p.repr = repr;
  if (!band.empty()) p.reduction.band = parse_band(band);
  p.reduction.train_snr = train_snr;
  return p;
}

ExperimentPreset subsample_preset(std::string name, SubsampleMethod method, double rate) {
  auto p = make(std::move(name), Representation::freq_amp_phase);
  SubsampleSpec s;
  s.method = method;
  s.rate = rate;
  p.reduction.subsample = s;
  return p;
}

std::vector<ExperimentPreset> all_presets() {
  std::vector<ExperimentPreset> v;
  v.push_back(make("full-10mhz", Representation::freq_iq));
  v.push_back(make("band-4mhz", Representation::freq_iq, kBand4));
  auto band2 = make("band-2mhz", Representation::freq_iq, kBand2);
  band2.dropout_after_conv1 = true;
  v.push_back(band2);
  v.push_back(make("snr-10db-10mhz", Representation::freq_iq, {}, -10));
  v.push_back(make("snr-2db-4mhz", Representation::freq_iq, kBand4, -2));
  v.push_back(make("ampphase-10mhz", Representation::freq_amp_phase));
  for (int n : {2, 4, 8, 16}) {
    auto p = make("pca-" + std::to_string(n) + "x", Representation::freq_amp_phase);
    p.reduction.pca_rate = 1.0 / n;
    v.push_back(p);
  }
  for (int n : {2, 4, 8}) {
    auto p = make("band4-pca-" + std::to_string(n) + "x", Representation::freq_amp_phase, kBand4);
    p.reduction.pca_rate = 1.0 / n;
    v.push_back(p);
  }
  for (int n : {2, 4, 8, 16}) {
    v.push_back(subsample_preset("random-" + std::to_string(n) + "x", SubsampleMethod::random, 1.0 / n));
  }
  v.push_back(subsample_preset("uniform-4x", SubsampleMethod::uniform, 0.25));
  v.push_back(subsample_preset("hmr-4x", SubsampleMethod::high_magnitude_rank, 0.25));
  auto baseline = make("baseline-10mhz", Representation::freq_iq);
  baseline.arch = ArchKind::baseline;
  v.push_back(baseline);
  return v;
}

template <typename F>
auto staged(std::string_view stage, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw with_stage(e, stage);
  }
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string_view to_string(ArchKind a) { return a == ArchKind::proposed ? "proposed" : "baseline"; }

ArchKind parse_arch(std::string_view s) {
  if (s == "proposed") return ArchKind::proposed;
  if (s == "baseline") return ArchKind::baseline;
  throw Error(ErrorCode::config, "unknown architecture '" + std::string(s) + "' (proposed | baseline)");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : all_presets()) names.push_back(p.name);
  return names;
}

ExperimentPreset find_preset(std::string_view name) {
  for (auto& p : all_presets()) {
    if (p.name == name) return p;
  }
  throw Error(ErrorCode::config, "unknown preset '" + std::string(name) + "'");
}

void apply_overrides(ExperimentPreset& p, const KeyValues& kv) {
  for (const auto& [key, value] : kv) {
    const bool known = std::any_of(config_keys().begin(), config_keys().end(),
                                   [&](const ConfigKey& k) { return k.name == key; });
    if (!known) throw Error(ErrorCode::config, "unknown config key '" + key + "'");
  }
  if (const auto s = get_string(kv, "repr")) {
    const auto r = parse_representation(*s);
    if (!r) throw Error(ErrorCode::config, "unknown representation '" + *s + "'");
    p.repr = *r;
  }
  if (const auto s = get_string(kv, "band")) {
    p.reduction.band = s->empty() ? std::nullopt : std::optional<BandSpec>(parse_band(*s));
  }
  if (kv.contains("train_snr")) {
    const auto v = get_int(kv, "train_snr");
    p.reduction.train_snr = v ? std::optional<int>(static_cast<int>(*v)) : std::nullopt;
  }
  if (kv.contains("pca_rate")) p.reduction.pca_rate = get_double(kv, "pca_rate");
  if (const auto s = get_string(kv, "subsample")) {
    if (s->empty()) {
      p.reduction.subsample.reset();
    } else {
      const auto m = parse_subsample_method(*s);
      if (!m) throw Error(ErrorCode::config, "unknown subsample method '" + *s + "'");
      SubsampleSpec spec = p.reduction.subsample.value_or(SubsampleSpec{});
      spec.method = *m;
      p.reduction.subsample = spec;
    }
  }
  if (const auto r = get_double(kv, "subsample_rate")) {
    if (!p.reduction.subsample) throw Error(ErrorCode::config, "subsample_rate needs a subsample method");
    p.reduction.subsample->rate = *r;
  }
  if (const auto s = get_string(kv, "arch")) p.arch = parse_arch(*s);
  if (const auto b = get_bool(kv, "dropout_after_conv1")) p.dropout_after_conv1 = *b;
  if (const auto v = get_double(kv, "lr")) p.train.adam.lr = *v;
  if (const auto v = get_double(kv, "beta1")) p.train.adam.beta1 = *v;
  if (const auto v = get_double(kv, "beta2")) p.train.adam.beta2 = *v;
  if (const auto v = get_double(kv, "epsilon")) p.train.adam.epsilon = *v;
  if (const auto v = get_int(kv, "batch_size")) p.train.batch_size = static_cast<int>(*v);
  if (const auto v = get_double(kv, "dropout")) p.train.dropout_p = *v;
  if (const auto v = get_int(kv, "patience")) p.train.patience = static_cast<int>(*v);
  if (const auto v = get_int(kv, "max_epochs")) p.train.max_epochs = static_cast<int>(*v);
  if (const auto v = get_int(kv, "vectors_per_cell")) p.scale.vectors_per_cell = static_cast<int>(*v);
  if (const auto s = get_string(kv, "snrs")) p.scale.snr_list = parse_int_list(*s);
}

KeyValues to_key_values(const ExperimentPreset& p) {
  KeyValues kv;
  kv["repr"] = std::string(to_string(p.repr));
  kv["band"] = p.reduction.band ? format_band(*p.reduction.band) : "";
  kv["train_snr"] = p.reduction.train_snr ? std::to_string(*p.reduction.train_snr) : "";
  kv["pca_rate"] = p.reduction.pca_rate ? format_double(*p.reduction.pca_rate) : "";
  kv["subsample"] = p.reduction.subsample ? std::string(to_string(p.reduction.subsample->method)) : "";
  if (p.reduction.subsample) kv["subsample_rate"] = format_double(p.reduction.subsample->rate);
  kv["arch"] = std::string(to_string(p.arch));
  kv["dropout_after_conv1"] = p.dropout_after_conv1 ? "true" : "false";
  kv["lr"] = format_double(p.train.adam.lr);
  kv["beta1"] = format_double(p.train.adam.beta1);
  kv["beta2"] = format_double(p.train.adam.beta2);
  kv["epsilon"] = format_double(p.train.adam.epsilon);
  kv["batch_size"] = std::to_string(p.train.batch_size);
  kv["dropout"] = format_double(p.train.dropout_p);
  kv["patience"] = std::to_string(p.train.patience);
  kv["max_epochs"] = std::to_string(p.train.max_epochs);
  kv["vectors_per_cell"] = std::to_string(p.scale.vectors_per_cell);
  kv["snrs"] = format_int_list(p.scale.snr_list);
  return kv;
}

void validate(const ExperimentPreset& p) {
  validate(p.reduction);
  nn::validate(p.train);
  if (p.scale.vectors_per_cell < 2) throw Error(ErrorCode::config, "vectors_per_cell must be >= 2");
  if (p.scale.snr_list.empty()) throw Error(ErrorCode::config, "SNR list is empty");
}

nn::ArchSpec build_arch(ArchKind arch, int input_len, int num_classes, double dropout_p, bool dropout_after_conv1) {
  return arch == ArchKind::proposed ? nn::proposed_cnn(input_len, num_classes, dropout_p, dropout_after_conv1)
                                    : nn::baseline_cnn(input_len, num_classes, dropout_p);
}

StageSeeds stage_seeds(std::uint64_t root_seed) {
  return {derive_seed(root_seed, "reduce"), derive_seed(root_seed, "init"), derive_seed(root_seed, "train")};
}

void write_history(const nn::TrainReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::file, "cannot open " + path.string() + " for writing");
  out << "epoch,train_loss,val_loss,val_accuracy\n";
  char buf[128];
  for (std::size_t i = 0; i < report.history.size(); ++i) {
    const auto& h = report.history[i];
    std::snprintf(buf, sizeof buf, "%zu,%.9f,%.9f,%.6f\n", i + 1, h.train_loss, h.val_loss, h.val_accuracy);
    out << buf;
  }
  out.flush();
  if (!out) throw Error(ErrorCode::file, "write failed for " + path.string());
}

ExperimentResult run_experiment(const ExperimentPreset& preset, const Dataset& data,
                                const std::filesystem::path& out_dir, const RunOptions& options,
                                const std::string& dataset_label) {
  const auto wall_start = std::chrono::steady_clock::now();
  const auto started = utc_now();
  const bool was_deterministic = deterministic();
  set_deterministic(options.deterministic || was_deterministic);
  struct Restore {
    bool value;
    ~Restore() { set_deterministic(value); }
  } restore{was_deterministic};

  staged("config", [&] { validate(preset); });
  const auto seeds = stage_seeds(options.root_seed);

  auto features = staged("preprocess", [&] { return to_feature_set(data, preset.repr); });

  ReductionConfig reduction = preset.reduction;
  if (reduction.subsample) reduction.subsample->seed = seeds.reduce;
  FeaturePipeline pipeline{preset.repr, Reducer(reduction, data.capture)};
  auto reduced = staged("reduce", [&] { return pipeline.reducer.fit_transform(std::move(features)); });

  ExperimentResult result;
  result.classes = pipeline.reducer.classes();
  result.input_len = static_cast<int>(reduced.rows());

  const auto train_items = select_split(reduced, Split::train);
  const auto val_items = select_split(reduced, Split::val);
  result.train_records = train_items.size();
  result.val_records = val_items.size();
  reduced.items.clear();

  auto train_cfg = preset.train;
  train_cfg.seed = seeds.train;
  const auto arch = staged("model", [&] {
    return build_arch(preset.arch, result.input_len, static_cast<int>(result.classes.size()), train_cfg.dropout_p,
                      preset.dropout_after_conv1);
  });
  nn::Model<float> model(arch, seeds.init, train_cfg.adam);
  model.class_ids = result.classes;
  result.parameters = model.parameter_count();

  result.train = staged("train", [&] {
    const auto train_set = make_labeled(train_items, result.classes);
    const auto val_set = make_labeled(val_items, result.classes);
    return nn::train(model, train_set, val_set, train_cfg, options.on_epoch);
  });

  result.metrics = staged("evaluate", [&] { return evaluate(model, val_items); });
  result.metrics.timing = {result.train.seconds_per_epoch, result.train.epochs_run, result.train.total_seconds};

  staged("report", [&] {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::file, "cannot create " + out_dir.string() + ": " + ec.message());
    emit_report(result.metrics, out_dir);
    write_history(result.train, out_dir / "history.csv");

    nn::CheckpointMeta meta = to_key_values(preset);
    meta["preset"] = preset.name;
    meta["pipeline"] = encode_pipeline(pipeline);
    nn::write_checkpoint(model, meta, out_dir / "model.wiim");

    KeyValues manifest = to_key_values(preset);
    manifest["preset"] = preset.name;
    manifest["root_seed"] = std::to_string(options.root_seed);
    manifest["seed_reduce"] = std::to_string(seeds.reduce);
    manifest["seed_init"] = std::to_string(seeds.init);
    manifest["seed_train"] = std::to_string(seeds.train);
    manifest["deterministic"] = deterministic() ? "true" : "false";
    manifest["threads"] = std::to_string(worker_count());
    manifest["version"] = WII_VERSION;
    manifest["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                "." + std::to_string(EIGEN_MINOR_VERSION);
    manifest["dataset"] = dataset_label;
    manifest["dataset_seed"] = std::to_string(data.seed);
    manifest["dataset_records"] = std::to_string(data.records.size());
    manifest["train_records"] = std::to_string(result.train_records);
    manifest["val_records"] = std::to_string(result.val_records);
    manifest["classes"] = format_int_list(result.classes);
    manifest["input_shape"] = std::to_string(result.input_len) + "x2x1";
    manifest["parameters"] = std::to_string(result.parameters);
    manifest["architecture"] = arch.describe();
    manifest["epochs"] = std::to_string(result.train.epochs_run);
    manifest["best_epoch"] = std::to_string(result.train.best_epoch);
    manifest["seconds_per_epoch"] = fixed6(result.train.seconds_per_epoch);
    manifest["train_seconds"] = fixed6(result.train.total_seconds);
    manifest["started_utc"] = started;
    manifest["wall_clock_seconds"] = fixed6(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count());
    const auto path = out_dir / "manifest.txt";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << format_key_values(manifest);
    out.flush();
    if (!out) throw Error(ErrorCode::file, "write failed for " + path.string());
  });
  return result;
}

ExperimentResult run_experiment(const ExperimentPreset& preset, const std::filesystem::path& dataset_path,
                                const std::filesystem::path& out_dir, const RunOptions& options) {
  const auto data = staged("load", [&] { return read_dataset(dataset_path); });
  return run_experiment(preset, data, out_dir, options, dataset_path.string());
}

}  // namespace wii
