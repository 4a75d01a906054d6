#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wii/config.hpp"
#include "wii/dataset.hpp"
#include "wii/error.hpp"
#include "wii/eval.hpp"
#include "wii/experiment.hpp"
#include "wii/features.hpp"
#include "wii/nn/checkpoint.hpp"
#include "wii/nn/train.hpp"
#include "wii/parallel.hpp"
#include "wii/pipeline.hpp"
#include "wii/report.hpp"
#include "wii/seed.hpp"

namespace fs = std::filesystem;
using namespace wii;

namespace {

std::string config_help() {
  std::string text = "Config files hold one 'key = value' per line ('#' comments). Keys:\n";
  for (const auto& k : config_keys()) {
    text += "  " + std::string(k.name) + std::string(k.name.size() < 20 ? 20 - k.name.size() : 1, ' ') +
            std::string(k.help) + "\n";
  }
  return text;
}

std::string sidecar_path(const fs::path& features) { return features.string() + ".pipeline"; }

void write_bytes(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
  out.flush();
  if (!out) throw Error(ErrorCode::file, "write failed for " + path.string());
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::file, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_epoch(int epoch, const nn::EpochStats& s) {
  std::fprintf(stderr, "epoch %3d  train_loss %.4f  val_loss %.4f  val_acc %.4f  %.2fs\n", epoch, s.train_loss,
               s.val_loss, s.val_accuracy, s.train_seconds);
}

void print_metrics(const Metrics& m) {
  std::printf("overall_accuracy %.4f (%lld/%lld)\n", m.overall_accuracy, static_cast<long long>(m.overall.correct),
              static_cast<long long>(m.overall.total));
  for (const auto& [tech, slice] : m.per_technology) {
    std::printf("  %-9s %.4f\n", std::string(to_string(tech)).c_str(), slice.accuracy());
  }
  std::printf("  snr>=10dB %.4f\n", m.at_or_above(10).accuracy());
}

int cmd_generate(int vpc, const std::string& snrs, std::uint64_t seed, double train_fraction, const fs::path& out) {
  DatasetConfig cfg;
  cfg.vectors_per_cell = vpc;
  cfg.snr_list = parse_int_list(snrs);
  cfg.seed = seed;
  if (train_fraction > 0.0) cfg.train_fraction = train_fraction;
  const auto d = build_dataset(cfg);
  write_dataset(d, out);
  std::printf("wrote %zu records to %s\n", d.records.size(), out.string().c_str());
  return 0;
}

int cmd_preprocess(const std::string& repr_name, const fs::path& in, const fs::path& out) {
  const auto repr = parse_representation(repr_name);
  if (!repr) throw Error(ErrorCode::usage, "unknown representation '" + repr_name + "'");
  const auto set = to_feature_set(read_dataset(in), *repr);
  write_features(set, out);
  std::printf("wrote %zu %s feature records (%zu rows) to %s\n", set.items.size(),
              std::string(to_string(*repr)).c_str(), set.rows(), out.string().c_str());
  return 0;
}

struct ReduceArgs {
  fs::path in;
  fs::path out;
  std::string band;
  std::optional<int> train_snr;
  std::optional<double> pca_rate;
  std::string subsample;
  double rate = 0.25;
  std::uint64_t seed = 1;
};

int cmd_reduce(const ReduceArgs& a) {
  ReductionConfig cfg;
  if (!a.band.empty()) cfg.band = parse_band(a.band);
  cfg.train_snr = a.train_snr;
  cfg.pca_rate = a.pca_rate;
  if (!a.subsample.empty()) {
    const auto m = parse_subsample_method(a.subsample);
    if (!m) throw Error(ErrorCode::usage, "unknown subsample method '" + a.subsample + "'");
    cfg.subsample = SubsampleSpec{*m, a.rate, a.seed, {}};
  }
  auto set = read_features(a.in);
  FeaturePipeline pipeline{set.repr, Reducer(cfg)};
  set = pipeline.reducer.fit_transform(std::move(set));
  write_features(set, a.out);
  write_bytes(sidecar_path(a.out), encode_pipeline(pipeline));
  std::printf("wrote %zu records (%zu rows, %s) to %s\n", set.items.size(), set.rows(), describe(cfg).c_str(),
              a.out.string().c_str());
  return 0;
}

// Loads features from either a feature file or a raw dataset (featurized with
// the pipeline when one is given).
FeatureSet load_features(const fs::path& data, const std::optional<FeaturePipeline>& pipeline) {
  if (is_feature_file(data)) return read_features(data);
  const auto d = read_dataset(data);
  if (!pipeline) return to_feature_set(d, Representation::freq_iq);
  return pipeline->apply(d);
}

std::vector<int> classes_in(const FeatureSet& set) {
  std::set<int> ids;
  for (const auto& item : set.items) ids.insert(item.class_id);
  return {ids.begin(), ids.end()};
}

int cmd_train(const std::string& arch_name, const std::string& config, const fs::path& data, const fs::path& out,
              std::uint64_t seed) {
  ExperimentPreset preset = find_preset("full-10mhz");
  preset.arch = parse_arch(arch_name);
  if (!config.empty()) apply_overrides(preset, read_key_values(config));
  validate(preset);
  const auto seeds = stage_seeds(seed);

  std::optional<FeaturePipeline> pipeline;
  FeatureSet set;
  if (is_feature_file(data)) {
    set = read_features(data);
    if (fs::exists(sidecar_path(data))) pipeline = decode_pipeline(read_bytes(sidecar_path(data)));
  } else {
    auto reduction = preset.reduction;
    if (reduction.subsample) reduction.subsample->seed = seeds.reduce;
    pipeline = FeaturePipeline{preset.repr, Reducer(reduction)};
    set = pipeline->reducer.fit_transform(to_feature_set(read_dataset(data), preset.repr));
  }
  const auto classes = pipeline ? pipeline->reducer.classes() : classes_in(set);
  const auto train_items = select_split(set, Split::train);
  const auto val_items = select_split(set, Split::val);

  auto train_cfg = preset.train;
  train_cfg.seed = seeds.train;
  const auto arch = build_arch(preset.arch, static_cast<int>(set.rows()), static_cast<int>(classes.size()),
                               train_cfg.dropout_p, preset.dropout_after_conv1);
  nn::Model<float> model(arch, seeds.init, train_cfg.adam);
  model.class_ids = classes;
  std::fprintf(stderr, "%s\n%zu parameters, %zu train / %zu val records\n", arch.describe().c_str(),
               model.parameter_count(), train_items.size(), val_items.size());
  const auto report = nn::train(model, make_labeled(train_items, classes), make_labeled(val_items, classes),
                                train_cfg, print_epoch);

  nn::CheckpointMeta meta = to_key_values(preset);
  meta["epochs"] = std::to_string(report.epochs_run);
  meta["seconds_per_epoch"] = format_double(report.seconds_per_epoch);
  meta["train_seconds"] = format_double(report.total_seconds);
  if (pipeline) meta["pipeline"] = encode_pipeline(*pipeline);
  nn::write_checkpoint(model, meta, out);
  std::printf("trained %d epochs (%.3f s/epoch), best val accuracy %.4f; wrote %s\n", report.epochs_run,
              report.seconds_per_epoch, report.best_val_accuracy, out.string().c_str());
  return 0;
}

int cmd_evaluate(const fs::path& model_path, const fs::path& data, const fs::path& out, const std::string& split) {
  auto ckpt = nn::read_checkpoint(model_path);
  std::optional<FeaturePipeline> pipeline;
  if (const auto it = ckpt.meta.find("pipeline"); it != ckpt.meta.end()) pipeline = decode_pipeline(it->second);
  if (!is_feature_file(data) && !pipeline) {
    throw Error(ErrorCode::data, "model carries no preprocessing pipeline; pass a feature file");
  }
  auto set = load_features(data, pipeline);
  std::vector<LabeledFeatures> items;
  if (split == "all") {
    items = std::move(set.items);
  } else {
    items = select_split(set, split == "train" ? Split::train : Split::val);
  }
  auto metrics = evaluate(ckpt.model, items);
  const auto meta_double = [&](const std::string& key) {
    const auto it = ckpt.meta.find(key);
    return it == ckpt.meta.end() ? 0.0 : std::stod(it->second);
  };
  metrics.timing = {meta_double("seconds_per_epoch"), static_cast<int>(meta_double("epochs")),
                    meta_double("train_seconds")};
  emit_report(metrics, out);
  print_metrics(metrics);
  return 0;
}

int cmd_run(const std::string& name, const fs::path& data, const fs::path& out, std::uint64_t seed,
            const std::string& config, bool generate) {
  auto preset = find_preset(name);
  if (!config.empty()) apply_overrides(preset, read_key_values(config));
  validate(preset);
  if (!fs::exists(data)) {
    if (!generate) throw Error(ErrorCode::file, "dataset " + data.string() + " does not exist (use --generate)");
    DatasetConfig dc;
    dc.vectors_per_cell = preset.scale.vectors_per_cell;
    dc.snr_list = preset.scale.snr_list;
    dc.seed = derive_seed(seed, "dataset");
    std::fprintf(stderr, "generating %d vectors per cell\n", dc.vectors_per_cell);
    write_dataset(build_dataset(dc), data);
  }
  RunOptions opts;
  opts.root_seed = seed;
  opts.deterministic = deterministic();
  opts.on_epoch = print_epoch;
  const auto r = run_experiment(preset, data, out, opts);
  std::printf("preset %s: input %dx2, %zu classes, %zu parameters, %d epochs, %.3f s/epoch\n", name.c_str(),
              r.input_len, r.classes.size(), r.parameters, r.train.epochs_run, r.train.seconds_per_epoch);
  print_metrics(r.metrics);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wireless interference identification: dataset synthesis, feature reduction and CNN training"};
  app.require_subcommand(1);
  app.fallthrough();
  bool det = false;
  app.add_flag("--deterministic", det, "fixed reduction order everywhere (single worker)");
  app.footer("Environment: WII_THREADS caps worker threads.\nExit codes: 0 ok, 1 usage/config, 2 data/format, "
             "3 numeric failure.");

  auto* gen = app.add_subcommand("generate", "synthesize a labeled I/Q dataset");
  int vpc = 715;
  std::string snrs = "-20:2:20";
  std::uint64_t gen_seed = 1;
  double train_fraction = 0.0;
  fs::path gen_out;
  gen->add_option("--vectors-per-cell", vpc, "records per (class, SNR) cell")->check(CLI::Range(2, 1000000));
  gen->add_option("--snrs", snrs, "SNR list in dB: lo:step:hi or comma separated")->capture_default_str();
  gen->add_option("--seed", gen_seed, "dataset seed")->capture_default_str();
  gen->add_option("--train-fraction", train_fraction, "fraction of each cell used for training (default 480/715)");
  gen->add_option("--out", gen_out, "output dataset file")->required();

  auto* pre = app.add_subcommand("preprocess", "turn a dataset into a feature file");
  std::string repr = "freq-iq";
  fs::path pre_in, pre_out;
  pre->add_option("--repr", repr, "time-iq | freq-iq | freq-amp-phase")->capture_default_str();
  pre->add_option("--in", pre_in, "dataset file")->required()->check(CLI::ExistingFile);
  pre->add_option("--out", pre_out, "feature file")->required();

  auto* red = app.add_subcommand("reduce", "band / SNR selection and PCA or subsampling of a feature file");
  ReduceArgs ra;
  red->add_option("--in", ra.in, "feature file")->required()->check(CLI::ExistingFile);
  red->add_option("--out", ra.out, "reduced feature file (fitted state saved as OUT.pipeline)")->required();
  red->add_option("--band", ra.band, "MHz sub-bands, e.g. 2429-2431 or 2422-2424,2429-2431");
  red->add_option("--train-snr", ra.train_snr, "keep only training records at this SNR (dB)");
  auto* pca_opt = red->add_option("--pca-rate", ra.pca_rate, "PCA compression rate, e.g. 0.0625");
  red->add_option("--subsample", ra.subsample, "random | uniform | hmr")->excludes(pca_opt);
  red->add_option("--rate", ra.rate, "subsampling rate")->capture_default_str();
  red->add_option("--seed", ra.seed, "subsampling seed")->capture_default_str();

  auto* trn = app.add_subcommand("train", "train a CNN on a feature file or dataset");
  trn->footer(config_help());
  std::string arch = "proposed", train_config;
  fs::path train_data, train_out;
  std::uint64_t train_seed = 1;
  trn->add_option("--arch", arch, "proposed | baseline")->capture_default_str();
  trn->add_option("--config", train_config, "key = value config file")->check(CLI::ExistingFile);
  trn->add_option("--data", train_data, "feature file or dataset")->required()->check(CLI::ExistingFile);
  trn->add_option("--out", train_out, "model checkpoint")->required();
  trn->add_option("--seed", train_seed, "root seed")->capture_default_str();

  auto* evl = app.add_subcommand("evaluate", "evaluate a checkpoint and write report CSVs");
  fs::path eval_model, eval_data, eval_out;
  std::string split = "val";
  evl->add_option("--model", eval_model, "model checkpoint")->required()->check(CLI::ExistingFile);
  evl->add_option("--data", eval_data, "feature file or dataset")->required()->check(CLI::ExistingFile);
  evl->add_option("--out", eval_out, "report directory")->required();
  evl->add_option("--split", split, "val | train | all")->check(CLI::IsMember({"val", "train", "all"}))
      ->capture_default_str();

  auto* run = app.add_subcommand("run", "run a named experiment preset end to end");
  run->footer(config_help());
  std::string preset;
  fs::path run_data, run_out;
  std::uint64_t run_seed = 1;
  std::string run_config;
  bool generate = false;
  bool list = false;
  run->add_flag("--list", list, "print preset names and exit");
  run->add_option("--preset", preset, "preset name");
  run->add_option("--data", run_data, "dataset file");
  run->add_option("--out", run_out, "output directory");
  run->add_option("--seed", run_seed, "root seed")->capture_default_str();
  run->add_option("--config", run_config, "key = value overrides")->check(CLI::ExistingFile);
  run->add_flag("--generate", generate, "generate the dataset at the preset's scale if it is missing");

  auto* cmp = app.add_subcommand("compare", "side-by-side table of report directories");
  std::vector<fs::path> dirs;
  fs::path cmp_out;
  cmp->add_option("dirs", dirs, "report directories (first is the reference)")->required()->expected(2, -1);
  cmp->add_option("--out", cmp_out, "comparison CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    set_deterministic(det);
    if (*gen) return cmd_generate(vpc, snrs, gen_seed, train_fraction, gen_out);
    if (*pre) return cmd_preprocess(repr, pre_in, pre_out);
    if (*red) return cmd_reduce(ra);
    if (*trn) return cmd_train(arch, train_config, train_data, train_out, train_seed);
    if (*evl) return cmd_evaluate(eval_model, eval_data, eval_out, split);
    if (*run) {
      if (list) {
        for (const auto& n : preset_names()) std::printf("%s\n", n.c_str());
        return 0;
      }
      if (preset.empty() || run_data.empty() || run_out.empty()) {
        throw Error(ErrorCode::usage, "run needs --preset, --data and --out");
      }
      return cmd_run(preset, run_data, run_out, run_seed, run_config, generate);
    }
    if (*cmp) {
      compare_reports(dirs, cmp_out);
      std::printf("wrote %s\n", cmp_out.string().c_str());
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "wii: %s\n", e.what());
    return exit_status(e.code());
  } catch (const std::bad_alloc&) {
    std::fprintf(stderr, "wii: out of memory\n");
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "wii: %s\n", e.what());
    return 2;
  }
  return 1;
}
