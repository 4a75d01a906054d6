#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "wii/catalog.hpp"
#include "wii/dataset.hpp"

namespace wii {

enum class Representation : std::uint8_t { time_iq = 0, freq_iq = 1, freq_amp_phase = 2 };

std::string_view to_string(Representation r);
std::optional<Representation> parse_representation(std::string_view s);
bool is_frequency_domain(Representation r);

// Real L x 2 feature matrix, row-major. bin_freqs holds the baseband offset
// (MHz) of each row for frequency-domain representations and is empty otherwise.
struct FeatureMatrix {
  Representation repr = Representation::freq_iq;
  std::size_t rows = 0;
  std::vector<float> values;
  std::vector<double> bin_freqs;

  float at(std::size_t row, std::size_t col) const { return values[2 * row + col]; }
  bool operator==(const FeatureMatrix&) const = default;
};

// TimeIQ: (Re, Im) of the samples. FreqIQ: (Re, Im) of the shifted spectrum
// scaled by 1/sqrt(N). FreqAmpPhase: (|X|, arg X) of the same spectrum, with
// arg in (-pi, pi] and 0 for empty bins.
FeatureMatrix to_features(const SampleRecord& record, Representation kind, const CaptureSpec& capture = {});

struct LabeledFeatures {
  int class_id = 0;
  int snr_db = 0;
  Split split = Split::train;
  FeatureMatrix features;
};

// A featurized dataset. All items share one shape and row layout.
// projected marks PCA output (rows are component pairs, not bins or samples).
struct FeatureSet {
  Representation repr = Representation::freq_iq;
  bool projected = false;
  std::vector<LabeledFeatures> items;

  std::size_t rows() const { return items.empty() ? 0 : items.front().features.rows; }
};

FeatureSet to_feature_set(const Dataset& d, Representation kind);

// Feature file: "WIIF", u16 version, u64 count, u16 rows, u8 repr,
// u8 projected, u8 has_bins, [rows x f64 bin offsets], then per record
// u8 class, i8 snr, u8 split and rows x (f32, f32).
inline constexpr std::uint16_t kFeatureFormatVersion = 1;
void write_features(const FeatureSet& set, const std::filesystem::path& path);
FeatureSet read_features(const std::filesystem::path& path);

// Peeks at the magic: true for feature files, false for raw dataset files.
bool is_feature_file(const std::filesystem::path& path);

}  // namespace wii
