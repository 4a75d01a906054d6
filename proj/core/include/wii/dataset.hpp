#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "wii/catalog.hpp"

namespace wii {

enum class Split : std::uint8_t { train = 0, val = 1 };

struct SampleRecord {
  int class_id = 0;
  int snr_db = 0;
  Split split = Split::train;
  std::vector<std::complex<float>> iq;

  bool operator==(const SampleRecord&) const = default;
};

struct Dataset {
  CaptureSpec capture;
  std::vector<SampleRecord> records;
  std::uint64_t seed = 0;
};

// The 21-value grid -20, -18, ..., +20 dB.
std::vector<int> snr_grid();
bool on_snr_grid(int snr_db);

struct DatasetConfig {
  int vectors_per_cell = 715;
  std::vector<int> snr_list = snr_grid();
  double train_fraction = 480.0 / 715.0;
  std::uint64_t seed = 1;
  CaptureSpec capture;
};

// Number of train records per (class, SNR) cell.
int train_count(const DatasetConfig& config);

std::uint64_t record_seed(std::uint64_t dataset_seed, int class_id, int snr_db, int index);

// 15 x |snr_list| x vectors_per_cell records, class-major then SNR then index.
Dataset build_dataset(const DatasetConfig& config);

// Little-endian file: "WII1", u16 version, u64 count, u16 vector_len, then per
// record u8 class, i8 snr, u8 split and vector_len (f32 I, f32 Q) pairs.
inline constexpr std::uint16_t kDatasetFormatVersion = 1;
void write_dataset(const Dataset& d, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

}  // namespace wii
