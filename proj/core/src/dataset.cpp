#include "wii/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "wii/binary_io.hpp"
#include "wii/error.hpp"
#include "wii/parallel.hpp"
#include "wii/seed.hpp"
#include "wii/waveform.hpp"

namespace wii {

namespace {
constexpr char kMagic[] = "WII1";
}

std::vector<int> snr_grid() {
  std::vector<int> grid;
  for (int s = -20; s <= 20; s += 2) grid.push_back(s);
  return grid;
}

bool on_snr_grid(int snr_db) { return snr_db >= -20 && snr_db <= 20 && snr_db % 2 == 0; }

int train_count(const DatasetConfig& config) {
  return static_cast<int>(std::lround(config.train_fraction * config.vectors_per_cell));
}

std::uint64_t record_seed(std::uint64_t dataset_seed, int class_id, int snr_db, int index) {
  return mix_seed(dataset_seed, {class_id, snr_db, index});
}

Dataset build_dataset(const DatasetConfig& config) {
  if (config.vectors_per_cell < 1) throw Error(ErrorCode::config, "vectors_per_cell must be >= 1");
  if (config.snr_list.empty()) throw Error(ErrorCode::config, "empty snr list");
  for (int s : config.snr_list) {
    if (!on_snr_grid(s)) throw Error(ErrorCode::config, "SNR " + std::to_string(s) + " dB is not on the grid");
  }
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    throw Error(ErrorCode::config, "train_fraction must lie in (0, 1)");
  }

  const int per_cell = config.vectors_per_cell;
  const int n_train = train_count(config);
  const std::size_t n_snr = config.snr_list.size();
  const std::size_t total = static_cast<std::size_t>(kNumClasses) * n_snr * static_cast<std::size_t>(per_cell);

  Dataset d;
  d.capture = config.capture;
  d.seed = config.seed;
  d.records.resize(total);

  parallel_for(total, [&](std::size_t r) {
    const int index = static_cast<int>(r % static_cast<std::size_t>(per_cell));
    const std::size_t cell = r / static_cast<std::size_t>(per_cell);
    const int snr = config.snr_list[cell % n_snr];
    const int class_id = static_cast<int>(cell / n_snr) + 1;

    const std::uint64_t seed = record_seed(config.seed, class_id, snr, index);
    const auto clean = synth_frame(class_spec(class_id), config.capture, seed);
    const auto noisy = apply_awgn(clean, snr, splitmix64(seed));

    SampleRecord& rec = d.records[r];
    rec.class_id = class_id;
    rec.snr_db = snr;
    rec.split = index < n_train ? Split::train : Split::val;
    rec.iq.resize(noisy.size());
    std::transform(noisy.begin(), noisy.end(), rec.iq.begin(),
                   [](const std::complex<double>& v) { return std::complex<float>(v); });
  });
  return d;
}

void write_dataset(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::file, "cannot open " + path.string() + " for writing");
  BinaryWriter w(out);
  w.bytes(std::string_view(kMagic, 4));
  w.u16(kDatasetFormatVersion);
  w.u64(d.records.size());
  w.u16(static_cast<std::uint16_t>(d.capture.vector_len));
  for (const auto& rec : d.records) {
    if (static_cast<int>(rec.iq.size()) != d.capture.vector_len) {
      throw Error(ErrorCode::size, "record length differs from capture vector_len");
    }
    w.u8(static_cast<std::uint8_t>(rec.class_id));
    w.i8(static_cast<std::int8_t>(rec.snr_db));
    w.u8(static_cast<std::uint8_t>(rec.split));
    w.f32_array(std::span<const float>(reinterpret_cast<const float*>(rec.iq.data()), 2 * rec.iq.size()));
  }
  out.flush();
  if (!out) throw Error(ErrorCode::file, "write failed for " + path.string());
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::file, "cannot open " + path.string());
  BinaryReader r(in);
  if (r.bytes(4) != std::string_view(kMagic, 4)) throw Error(ErrorCode::format, "bad magic in " + path.string());
  const auto version = r.u16();
  if (version != kDatasetFormatVersion) {
    throw Error(ErrorCode::format, "unsupported dataset version " + std::to_string(version));
  }
  const std::uint64_t count = r.u64();
  const int vector_len = r.u16();
  if (vector_len == 0) throw Error(ErrorCode::corruption, "zero vector_len");

  // Reject counts that cannot fit in the remaining bytes before allocating.
  const auto here = in.tellg();
  in.seekg(0, std::ios::end);
  const auto remaining = static_cast<std::uint64_t>(in.tellg() - here);
  in.seekg(here);
  const std::uint64_t record_bytes = 3 + 8ULL * static_cast<std::uint64_t>(vector_len);
  if (count > remaining / record_bytes) throw Error(ErrorCode::corruption, "truncated payload");

  Dataset d;
  d.capture.vector_len = vector_len;
  d.records.resize(count);
  for (auto& rec : d.records) {
    rec.class_id = r.u8();
    rec.snr_db = r.i8();
    const auto split = r.u8();
    if (rec.class_id < 1 || rec.class_id > kNumClasses || split > 1 || !on_snr_grid(rec.snr_db)) {
      throw Error(ErrorCode::corruption, "invalid record header");
    }
    rec.split = static_cast<Split>(split);
    rec.iq.resize(static_cast<std::size_t>(vector_len));
    r.f32_array(std::span<float>(reinterpret_cast<float*>(rec.iq.data()), 2 * rec.iq.size()));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw Error(ErrorCode::corruption, "trailing bytes");
  return d;
}

}  // namespace wii
