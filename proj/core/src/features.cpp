#include "wii/features.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include "wii/binary_io.hpp"
#include "wii/error.hpp"
#include "wii/fft.hpp"
#include "wii/parallel.hpp"

namespace wii {

namespace {
constexpr char kMagic[] = "WIIF";
}

std::string_view to_string(Representation r) {
  switch (r) {
    case Representation::time_iq: return "time-iq";
    case Representation::freq_iq: return "freq-iq";
    case Representation::freq_amp_phase: return "freq-amp-phase";
  }
  return "?";
}

std::optional<Representation> parse_representation(std::string_view s) {
  if (s == "time-iq") return Representation::time_iq;
  if (s == "freq-iq") return Representation::freq_iq;
  if (s == "freq-amp-phase") return Representation::freq_amp_phase;
  return std::nullopt;
}

bool is_frequency_domain(Representation r) { return r != Representation::time_iq; }

FeatureMatrix to_features(const SampleRecord& record, Representation kind, const CaptureSpec& capture) {
  const std::size_t n = record.iq.size();
  FeatureMatrix m;
  m.repr = kind;
  m.rows = n;
  m.values.resize(2 * n);

  if (kind == Representation::time_iq) {
    for (std::size_t i = 0; i < n; ++i) {
      m.values[2 * i] = record.iq[i].real();
      m.values[2 * i + 1] = record.iq[i].imag();
    }
    return m;
  }

  std::vector<std::complex<double>> x(record.iq.begin(), record.iq.end());
  auto spectrum = fft_shifted<double>(x);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double spacing = capture.sample_rate_msps / static_cast<double>(n);
  m.bin_freqs.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::complex<double> v = spectrum[k] * scale;
    m.bin_freqs[k] = -capture.sample_rate_msps / 2.0 + static_cast<double>(k) * spacing;
    if (kind == Representation::freq_iq) {
      m.values[2 * k] = static_cast<float>(v.real());
      m.values[2 * k + 1] = static_cast<float>(v.imag());
      continue;
    }
    const double amplitude = std::abs(v);
    double phase = amplitude == 0.0 ? 0.0 : std::atan2(v.imag(), v.real());
    if (phase <= -std::numbers::pi) phase = std::numbers::pi;
    float fphase = static_cast<float>(phase);
    if (fphase <= -std::numbers::pi_v<float>) fphase = std::numbers::pi_v<float>;
    m.values[2 * k] = static_cast<float>(amplitude);
    m.values[2 * k + 1] = fphase;
  }
  return m;
}

FeatureSet to_feature_set(const Dataset& d, Representation kind) {
  FeatureSet set;
  set.repr = kind;
  set.items.resize(d.records.size());
  parallel_for(d.records.size(), [&](std::size_t i) {
    const auto& rec = d.records[i];
    set.items[i] = {rec.class_id, rec.snr_db, rec.split, to_features(rec, kind, d.capture)};
  });
  return set;
}

void write_features(const FeatureSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::file, "cannot open " + path.string() + " for writing");
  const std::size_t rows = set.rows();
  const bool has_bins = !set.items.empty() && !set.items.front().features.bin_freqs.empty();

  BinaryWriter w(out);
  w.bytes(std::string_view(kMagic, 4));
  w.u16(kFeatureFormatVersion);
  w.u64(set.items.size());
  w.u16(static_cast<std::uint16_t>(rows));
  w.u8(static_cast<std::uint8_t>(set.repr));
  w.u8(set.projected ? 1 : 0);
  w.u8(has_bins ? 1 : 0);
  if (has_bins) {
    for (double f : set.items.front().features.bin_freqs) w.f64(f);
  }
  for (const auto& item : set.items) {
    if (item.features.rows != rows) throw Error(ErrorCode::dimension, "feature set rows are not uniform");
    w.u8(static_cast<std::uint8_t>(item.class_id));
    w.i8(static_cast<std::int8_t>(item.snr_db));
    w.u8(static_cast<std::uint8_t>(item.split));
    w.f32_array(item.features.values);
  }
  out.flush();
  if (!out) throw Error(ErrorCode::file, "write failed for " + path.string());
}

FeatureSet read_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::file, "cannot open " + path.string());
  BinaryReader r(in);
  if (r.bytes(4) != std::string_view(kMagic, 4)) throw Error(ErrorCode::format, "bad magic in " + path.string());
  const auto version = r.u16();
  if (version != kFeatureFormatVersion) {
    throw Error(ErrorCode::format, "unsupported feature file version " + std::to_string(version));
  }
  const std::uint64_t count = r.u64();
  const std::size_t rows = r.u16();
  const auto repr_tag = r.u8();
  if (repr_tag > 2) throw Error(ErrorCode::format, "unknown representation tag");
  FeatureSet set;
  set.repr = static_cast<Representation>(repr_tag);
  set.projected = r.u8() != 0;
  const bool has_bins = r.u8() != 0;
  std::vector<double> bins;
  if (has_bins) {
    bins.resize(rows);
    for (auto& f : bins) f = r.f64();
  }

  const auto here = in.tellg();
  in.seekg(0, std::ios::end);
  const auto remaining = static_cast<std::uint64_t>(in.tellg() - here);
  in.seekg(here);
  if (count > remaining / (3 + 8ULL * rows)) throw Error(ErrorCode::corruption, "truncated payload");

  set.items.resize(count);
  for (auto& item : set.items) {
    item.class_id = r.u8();
    item.snr_db = r.i8();
    const auto split = r.u8();
    if (item.class_id < 1 || item.class_id > kNumClasses || split > 1 || !on_snr_grid(item.snr_db)) {
      throw Error(ErrorCode::corruption, "invalid record header");
    }
    item.split = static_cast<Split>(split);
    item.features.repr = set.repr;
    item.features.rows = rows;
    item.features.values.resize(2 * rows);
    item.features.bin_freqs = bins;
    r.f32_array(item.features.values);
  }
  if (in.peek() != std::char_traits<char>::eof()) throw Error(ErrorCode::corruption, "trailing bytes");
  return set;
}

bool is_feature_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::file, "cannot open " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && std::string_view(magic, 4) == std::string_view(kMagic, 4);
}

}  // namespace wii
