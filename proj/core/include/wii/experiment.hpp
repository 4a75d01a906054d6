#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wii/config.hpp"
#include "wii/dataset.hpp"
#include "wii/eval.hpp"
#include "wii/features.hpp"
#include "wii/nn/arch.hpp"
#include "wii/nn/train.hpp"
#include "wii/pipeline.hpp"

namespace wii {

enum class ArchKind : std::uint8_t { proposed, baseline };

std::string_view to_string(ArchKind a);
ArchKind parse_arch(std::string_view s);

// Dataset size used when a preset generates its own data.
struct DatasetScale {
  int vectors_per_cell = 715;
  std::vector<int> snr_list = snr_grid();
};

struct ExperimentPreset {
  std::string name;
  Representation repr = Representation::freq_iq;
  ReductionConfig reduction;
  ArchKind arch = ArchKind::proposed;
  bool dropout_after_conv1 = false;
  nn::TrainConfig train;
  DatasetScale scale;
};

std::vector<std::string> preset_names();
// Throws a config error for unknown names.
ExperimentPreset find_preset(std::string_view name);

// Applies config-file keys on top of a preset. Unknown keys are config errors.
void apply_overrides(ExperimentPreset& preset, const KeyValues& kv);
// Every resolved setting as config keys (round-trips through apply_overrides).
KeyValues to_key_values(const ExperimentPreset& preset);
void validate(const ExperimentPreset& preset);

nn::ArchSpec build_arch(ArchKind arch, int input_len, int num_classes, double dropout_p, bool dropout_after_conv1);

// Stage seeds derived from the root seed by stage label.
struct StageSeeds {
  std::uint64_t reduce = 0;
  std::uint64_t init = 0;
  std::uint64_t train = 0;
};
StageSeeds stage_seeds(std::uint64_t root_seed);

struct RunOptions {
  std::uint64_t root_seed = 1;
  bool deterministic = false;
  nn::EpochCallback on_epoch;
};

struct ExperimentResult {
  Metrics metrics;
  nn::TrainReport train;
  std::vector<int> classes;
  int input_len = 0;
  std::size_t train_records = 0;
  std::size_t val_records = 0;
  std::size_t parameters = 0;
};

// Featurizes, reduces, trains and evaluates on the validation split, then
// writes model.wiim, the report CSVs, history.csv and manifest.txt into
// out_dir. Errors carry the name of the stage that raised them.
ExperimentResult run_experiment(const ExperimentPreset& preset, const Dataset& data,
                                const std::filesystem::path& out_dir, const RunOptions& options = {},
                                const std::string& dataset_label = "<memory>");
ExperimentResult run_experiment(const ExperimentPreset& preset, const std::filesystem::path& dataset_path,
                                const std::filesystem::path& out_dir, const RunOptions& options = {});

// Per-epoch training history as CSV.
void write_history(const nn::TrainReport& report, const std::filesystem::path& path);

}  // namespace wii
